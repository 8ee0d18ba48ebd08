#include "meneuron/manifest.hpp"

#include <array>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <memory>
#include <sstream>

#include <openssl/evp.h>

#include "json.hpp"
#include "meneuron/errors.hpp"

namespace meneuron {

namespace fs = std::filesystem;
using nlohmann::json;

#ifndef MENEURON_VERSION
#define MENEURON_VERSION "0.0.0"
#endif

std::string_view tool_version() { return MENEURON_VERSION; }

std::string sha256_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read '" + path.string() + "' for hashing");
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("SHA-256 initialisation failed");
    }
    std::array<char, 1 << 16> buf{};
    while (in) {
        in.read(buf.data(), buf.size());
        if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), md.data(), &len);
    std::string hex;
    char byte[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(byte, sizeof byte, "%02x", md[i]);
        hex += byte;
    }
    return hex;
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void add_output(RunManifest& m, const fs::path& file, const fs::path& base_dir) {
    OutputRecord r;
    r.path = fs::relative(file, base_dir).generic_string();
    r.sha256 = sha256_file(file);
    r.bytes = fs::file_size(file);
    m.outputs.push_back(std::move(r));
}

std::string to_json(const RunManifest& m) {
    json j;
    j["tool_version"] = m.tool_version;
    j["command"] = m.command;
    j["arguments"] = m.arguments;
    j["master_seed"] = m.master_seed;
    j["config_ini"] = m.config_ini;
    j["started_utc"] = m.started_utc;
    j["finished_utc"] = m.finished_utc;
    json outs = json::array();
    for (const auto& o : m.outputs) outs.push_back({{"path", o.path}, {"sha256", o.sha256}, {"bytes", o.bytes}});
    j["outputs"] = outs;
    return j.dump(2) + "\n";
}

RunManifest manifest_from_json(std::string_view text) {
    RunManifest m;
    try {
        const json j = json::parse(text);
        m.tool_version = j.at("tool_version").get<std::string>();
        m.command = j.at("command").get<std::string>();
        m.arguments = j.at("arguments").get<std::vector<std::string>>();
        m.master_seed = j.at("master_seed").get<std::uint64_t>();
        m.config_ini = j.at("config_ini").get<std::string>();
        m.started_utc = j.value("started_utc", "");
        m.finished_utc = j.value("finished_utc", "");
        for (const auto& o : j.at("outputs")) {
            m.outputs.push_back({o.at("path").get<std::string>(), o.at("sha256").get<std::string>(),
                                 o.at("bytes").get<std::uintmax_t>()});
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed manifest: ") + e.what());
    }
    return m;
}

void write_manifest(const fs::path& path, const RunManifest& m) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    out << to_json(m);
    if (!out) throw ConfigError("write to '" + path.string() + "' failed");
}

RunManifest read_manifest(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read manifest '" + path.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return manifest_from_json(buf.str());
}

}  // namespace meneuron
