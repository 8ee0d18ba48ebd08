#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "meneuron/device.hpp"
#include "meneuron/integrator.hpp"

namespace meneuron {

/// Voltage rectangle inside which the device model is trusted.
struct OperatingWindow {
    double v_me_min = -1.0, v_me_max = 1.0;
    double v_i_min = -1.0, v_i_max = 1.0;

    bool contains(const BiasPoint& b, double tol = 1e-12) const noexcept {
        return b.v_me >= v_me_min - tol && b.v_me <= v_me_max + tol && b.v_i >= v_i_min - tol &&
               b.v_i <= v_i_max + tol;
    }
};

struct SweepSettings {
    double v_me_min = -0.5, v_me_max = 0.5;
    std::size_t v_me_count = 9;
    double v_i_min = -0.5, v_i_max = 0.5;
    std::size_t v_i_count = 9;
    std::size_t min_dwells = 200;
    std::size_t trajectories_per_cell = 1;
    double cell_time_budget = 2e-5;  // simulated seconds per trajectory
    OperatingWindow window;
    double tau_window_min = 2e-10;
    double tau_window_max = 5e-9;
};

struct AnalysisSettings {
    double theta_on = 0.3;
    double independence_threshold = 5.0;
    double fit_r2_min = 0.8;
};

struct NeuronSettings {
    double dt_markov = 1e-11;
};

/// Fully resolved run configuration: [device], [sim], [sweep], [analysis],
/// [neuron] sections of the INI file.
struct Config {
    DeviceParams device;
    SimConfig sim;
    SweepSettings sweep;
    AnalysisSettings analysis;
    NeuronSettings neuron;
};

/// Text of config/defaults.ini, compiled in.
std::string_view default_config_text();

/// The shipped defaults.
const Config& default_config();

/// Applies every key in `ini_text` on top of `base`. Unknown sections or
/// keys, unparsable values and violated invariants throw ConfigError.
Config parse_config(std::string_view ini_text, const Config& base = default_config());

/// Reads and parses a config file; missing file throws ConfigError with the path.
Config load_config(const std::filesystem::path& path);

/// Serializes every field, defaults included, as INI text that
/// parse_config reads back to an identical Config.
std::string to_ini(const Config& c);

void validate(const Config& c);

/// Evenly spaced values min..max inclusive; count 1 yields {min}.
std::vector<double> linspace(double min, double max, std::size_t count);

/// Formats with the shortest representation that round-trips.
std::string format_double(double v);

}  // namespace meneuron
