#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace meneuron {

std::string_view tool_version();

struct OutputRecord {
    std::string path;  // relative to the manifest's directory
    std::string sha256;
    std::uintmax_t bytes = 0;
};

/// Everything needed to reproduce a run's data files: the fully resolved
/// config and the master seed. Timestamps are informational only.
struct RunManifest {
    std::string tool_version;
    std::string command;
    std::vector<std::string> arguments;
    std::string config_ini;
    std::uint64_t master_seed = 0;
    std::string started_utc;
    std::string finished_utc;
    std::vector<OutputRecord> outputs;
};

std::string sha256_file(const std::filesystem::path& path);

/// ISO 8601, second resolution.
std::string utc_timestamp();

/// Hashes `file` and appends it with a path relative to `base_dir`.
void add_output(RunManifest& m, const std::filesystem::path& file, const std::filesystem::path& base_dir);

std::string to_json(const RunManifest& m);
RunManifest manifest_from_json(std::string_view text);

void write_manifest(const std::filesystem::path& path, const RunManifest& m);
RunManifest read_manifest(const std::filesystem::path& path);

}  // namespace meneuron
