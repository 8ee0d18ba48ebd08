#include "meneuron/config.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <system_error>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "meneuron/errors.hpp"

namespace meneuron {

namespace {

#include "meneuron/default_config_text.inc"

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& key, std::string_view text) {
    const std::string t = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size()) {
        throw ConfigError("config key '" + key + "': cannot parse '" + t + "' as a number");
    }
    return v;
}

std::uint64_t parse_uint(const std::string& key, std::string_view text) {
    const std::string t = trim(text);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size()) {
        throw ConfigError("config key '" + key + "': cannot parse '" + t + "' as a non-negative integer");
    }
    return v;
}

Vector3 parse_vector(const std::string& key, std::string_view text) {
    std::array<double, 3> c{};
    std::size_t i = 0;
    std::size_t start = 0;
    const std::string t(text);
    while (true) {
        const auto comma = t.find(',', start);
        if (i >= 3) throw ConfigError("config key '" + key + "': expected three comma-separated numbers");
        c[i++] = parse_double(key, std::string_view(t).substr(start, comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (i != 3) throw ConfigError("config key '" + key + "': expected three comma-separated numbers");
    return {c[0], c[1], c[2]};
}

std::string format_vector(const Vector3& v) {
    return format_double(v.x) + ", " + format_double(v.y) + ", " + format_double(v.z);
}

struct Field {
    std::function<void(Config&, const std::string& key, const std::string& value)> set;
    std::function<std::string(const Config&)> get;
};

template <class Member>
Field real(Member member) {
    return {[member](Config& c, const std::string& k, const std::string& v) { member(c) = parse_double(k, v); },
            [member](const Config& c) { return format_double(member(c)); }};
}

template <class Member>
Field count(Member member) {
    return {[member](Config& c, const std::string& k, const std::string& v) {
                member(c) = static_cast<std::remove_reference_t<decltype(member(c))>>(parse_uint(k, v));
            },
            [member](const Config& c) { return std::to_string(member(c)); }};
}

template <class Member>
Field vector3(Member member) {
    return {[member](Config& c, const std::string& k, const std::string& v) { member(c) = parse_vector(k, v); },
            [member](const Config& c) { return format_vector(member(c)); }};
}

// Ordered so to_ini is stable.
const std::vector<std::pair<std::string, Field>>& schema() {
    static const std::vector<std::pair<std::string, Field>> fields = {
        {"device.saturation_magnetization", real([](auto& c) -> auto& { return c.device.saturation_magnetization; })},
        {"device.damping_alpha", real([](auto& c) -> auto& { return c.device.damping_alpha; })},
        {"device.volume", real([](auto& c) -> auto& { return c.device.volume; })},
        {"device.demag_factors", vector3([](auto& c) -> auto& { return c.device.demag_factors; })},
        {"device.temperature", real([](auto& c) -> auto& { return c.device.temperature; })},
        {"device.me_coefficient", real([](auto& c) -> auto& { return c.device.me_coefficient; })},
        {"device.me_thickness", real([](auto& c) -> auto& { return c.device.me_thickness; })},
        {"device.resistance_p", real([](auto& c) -> auto& { return c.device.resistance_p; })},
        {"device.tmr_ratio", real([](auto& c) -> auto& { return c.device.tmr_ratio; })},
        {"device.spin_polarization", real([](auto& c) -> auto& { return c.device.spin_polarization; })},
        {"device.polarizer_axis", vector3([](auto& c) -> auto& { return c.device.polarizer_axis; })},

        {"sim.dt", real([](auto& c) -> auto& { return c.sim.dt; })},
        {"sim.t_max", real([](auto& c) -> auto& { return c.sim.t_max; })},
        {"sim.seed", count([](auto& c) -> auto& { return c.sim.seed; })},
        {"sim.initial_m", vector3([](auto& c) -> auto& { return c.sim.initial_m; })},
        {"sim.record_stride", count([](auto& c) -> auto& { return c.sim.record_stride; })},
        {"sim.stop_after_transitions",
         {[](Config& c, const std::string& k, const std::string& v) {
              const auto n = parse_uint(k, v);
              c.sim.stop_after_transitions = n == 0 ? std::nullopt : std::optional<std::size_t>(n);
          },
          [](const Config& c) { return std::to_string(c.sim.stop_after_transitions.value_or(0)); }}},

        {"sweep.v_me_min", real([](auto& c) -> auto& { return c.sweep.v_me_min; })},
        {"sweep.v_me_max", real([](auto& c) -> auto& { return c.sweep.v_me_max; })},
        {"sweep.v_me_count", count([](auto& c) -> auto& { return c.sweep.v_me_count; })},
        {"sweep.v_i_min", real([](auto& c) -> auto& { return c.sweep.v_i_min; })},
        {"sweep.v_i_max", real([](auto& c) -> auto& { return c.sweep.v_i_max; })},
        {"sweep.v_i_count", count([](auto& c) -> auto& { return c.sweep.v_i_count; })},
        {"sweep.min_dwells", count([](auto& c) -> auto& { return c.sweep.min_dwells; })},
        {"sweep.trajectories_per_cell", count([](auto& c) -> auto& { return c.sweep.trajectories_per_cell; })},
        {"sweep.cell_time_budget", real([](auto& c) -> auto& { return c.sweep.cell_time_budget; })},
        {"sweep.window_v_me_min", real([](auto& c) -> auto& { return c.sweep.window.v_me_min; })},
        {"sweep.window_v_me_max", real([](auto& c) -> auto& { return c.sweep.window.v_me_max; })},
        {"sweep.window_v_i_min", real([](auto& c) -> auto& { return c.sweep.window.v_i_min; })},
        {"sweep.window_v_i_max", real([](auto& c) -> auto& { return c.sweep.window.v_i_max; })},
        {"sweep.tau_window_min", real([](auto& c) -> auto& { return c.sweep.tau_window_min; })},
        {"sweep.tau_window_max", real([](auto& c) -> auto& { return c.sweep.tau_window_max; })},

        {"analysis.theta_on", real([](auto& c) -> auto& { return c.analysis.theta_on; })},
        {"analysis.independence_threshold", real([](auto& c) -> auto& { return c.analysis.independence_threshold; })},
        {"analysis.fit_r2_min", real([](auto& c) -> auto& { return c.analysis.fit_r2_min; })},

        {"neuron.dt_markov", real([](auto& c) -> auto& { return c.neuron.dt_markov; })},
    };
    return fields;
}

const Field* find_field(const std::string& dotted) {
    for (const auto& [name, field] : schema()) {
        if (name == dotted) return &field;
    }
    return nullptr;
}

void require(bool ok, const std::string& what) {
    if (!ok) throw ConfigError("invalid config: " + what);
}

}  // namespace

std::string_view default_config_text() { return kDefaultConfigText; }

const Config& default_config() {
    static const Config c = parse_config(kDefaultConfigText, Config{});
    return c;
}

Config parse_config(std::string_view ini_text, const Config& base) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    std::istringstream in{std::string(ini_text)};
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("config syntax error: ") + e.what());
    }
    Config c = base;
    for (const auto& [section, keys] : tree) {
        if (!keys.data().empty()) {
            throw ConfigError("config key '" + section + "' is outside any [section]");
        }
        if (section != "device" && section != "sim" && section != "sweep" && section != "analysis" &&
            section != "neuron") {
            throw ConfigError("unknown config section [" + section + "]");
        }
        for (const auto& [key, value] : keys) {
            const std::string dotted = section + "." + key;
            const Field* f = find_field(dotted);
            if (f == nullptr) throw ConfigError("unknown config key '" + dotted + "'");
            f->set(c, dotted, value.get_value<std::string>());
        }
    }
    validate(c);
    return c;
}

Config load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string to_ini(const Config& c) {
    std::string out;
    std::string current;
    for (const auto& [name, field] : schema()) {
        const auto dot = name.find('.');
        const std::string section = name.substr(0, dot);
        if (section != current) {
            if (!current.empty()) out += '\n';
            out += "[" + section + "]\n";
            current = section;
        }
        out += name.substr(dot + 1) + " = " + field.get(c) + "\n";
    }
    return out;
}

void validate(const Config& c) {
    validate(c.device);
    validate(c.sim);
    const auto& s = c.sweep;
    require(s.v_me_count >= 1 && s.v_i_count >= 1, "sweep axis counts must be >= 1");
    require(s.v_me_count == 1 || s.v_me_max > s.v_me_min, "sweep.v_me_max must exceed sweep.v_me_min");
    require(s.v_i_count == 1 || s.v_i_max > s.v_i_min, "sweep.v_i_max must exceed sweep.v_i_min");
    require(s.min_dwells >= 1, "sweep.min_dwells must be >= 1");
    require(s.trajectories_per_cell >= 1, "sweep.trajectories_per_cell must be >= 1");
    require(s.cell_time_budget > 0, "sweep.cell_time_budget must be > 0");
    require(s.window.v_me_max > s.window.v_me_min && s.window.v_i_max > s.window.v_i_min,
            "sweep window bounds must be increasing");
    require(s.tau_window_min > 0 && s.tau_window_max > s.tau_window_min, "tau window must be increasing and positive");
    require(c.analysis.theta_on > 0 && c.analysis.theta_on < 1, "analysis.theta_on must be in (0, 1)");
    require(c.analysis.independence_threshold > 0, "analysis.independence_threshold must be > 0");
    require(c.analysis.fit_r2_min >= 0 && c.analysis.fit_r2_min <= 1, "analysis.fit_r2_min must be in [0, 1]");
    require(c.neuron.dt_markov > 0, "neuron.dt_markov must be > 0");
}

std::vector<double> linspace(double min, double max, std::size_t count) {
    std::vector<double> v;
    if (count == 0) return v;
    if (count == 1) return {min};
    v.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double f = static_cast<double>(i) / static_cast<double>(count - 1);
        v.push_back(i + 1 == count ? max : min + (max - min) * f);
    }
    return v;
}

std::string format_double(double v) {
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

}  // namespace meneuron
