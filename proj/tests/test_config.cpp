#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "meneuron/config.hpp"
#include "meneuron/errors.hpp"

using namespace meneuron;

TEST_CASE("shipped defaults") {
    const Config& c = default_config();
    CHECK(c.device.saturation_magnetization == 1e6);
    CHECK(c.device.demag_factors == Vector3{0.90, 0.08, 0.02});
    CHECK(c.device.polarizer_axis == Vector3{0, 0, 1});
    CHECK(c.sim.dt == 1e-13);
    CHECK(c.analysis.theta_on == 0.3);
    CHECK(c.sweep.min_dwells == 200);
    CHECK(c.sweep.v_me_count == 9);
    CHECK_FALSE(c.sim.stop_after_transitions.has_value());
}

TEST_CASE("to_ini round-trips every field") {
    Config c = default_config();
    c.device.temperature = 301.25;
    c.sim.seed = 18446744073709551615ULL;
    c.sim.stop_after_transitions = 40;
    c.sweep.window.v_i_min = -0.123456789012345;
    const std::string text = to_ini(c);
    const Config back = parse_config(text, Config{});
    CHECK(to_ini(back) == text);
    CHECK(back.sim.seed == c.sim.seed);
    CHECK(back.sim.stop_after_transitions == std::optional<std::size_t>(40));
    CHECK(back.sweep.window.v_i_min == c.sweep.window.v_i_min);
}

TEST_CASE("overrides apply on top of the base") {
    const Config c = parse_config("[sim]\nseed = 5\n# comment\n; other comment\n[device]\ntemperature = 77\n");
    CHECK(c.sim.seed == 5);
    CHECK(c.device.temperature == 77);
    CHECK(c.sim.dt == default_config().sim.dt);
}

TEST_CASE("config errors are reported") {
    auto message = [](std::string_view text) {
        try {
            parse_config(text);
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string("no error");
    };
    CHECK(message("[device]\ntemprature = 300\n").find("device.temprature") != std::string::npos);
    CHECK(message("[devices]\ntemperature = 300\n").find("[devices]") != std::string::npos);
    CHECK(message("temperature = 300\n").find("outside") != std::string::npos);
    CHECK(message("[device]\ntemperature = warm\n").find("warm") != std::string::npos);
    CHECK(message("[device]\ndemag_factors = 0.9, 0.1\n").find("three") != std::string::npos);
    CHECK(message("[device]\ndamping_alpha = 1.5\n") != "no error");
    CHECK(message("[sim]\ndt = 0\n") != "no error");
    CHECK(message("[sim]\nseed = -3\n") != "no error");
    CHECK(message("[analysis]\ntheta_on = 1.2\n") != "no error");
    CHECK(message("[device\n") != "no error");
}

TEST_CASE("missing config file names the path") {
    const std::filesystem::path missing = "definitely/not/here.ini";
    try {
        load_config(missing);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("definitely/not/here.ini") != std::string::npos);
    }
}

TEST_CASE("load_config reads a file") {
    const auto path = std::filesystem::temp_directory_path() / "meneuron_test_config.ini";
    {
        std::ofstream out(path);
        out << "[neuron]\ndt_markov = 2e-11\n";
    }
    CHECK(load_config(path).neuron.dt_markov == 2e-11);
    std::filesystem::remove(path);
}

TEST_CASE("linspace and number formatting") {
    CHECK(linspace(-0.5, 0.5, 5) == std::vector<double>{-0.5, -0.25, 0.0, 0.25, 0.5});
    CHECK(linspace(1.0, 2.0, 1) == std::vector<double>{1.0});
    CHECK(linspace(0.0, 1.0, 0).empty());
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1e-13) == "1e-13");
    const double x = 0.1 + 0.2;
    CHECK(std::stod(format_double(x)) == x);
}
