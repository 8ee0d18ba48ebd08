#include "meneuron/integrator.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "meneuron/constants.hpp"
#include "meneuron/telegraph.hpp"

namespace meneuron {

void validate(const SimConfig& c) {
    if (!(c.dt > 0)) throw ConfigError("sim.dt must be > 0");
    if (!(c.t_max >= c.dt)) throw ConfigError("sim.t_max must be >= sim.dt");
    if (std::abs(norm(c.initial_m) - 1.0) > 1e-9) throw ConfigError("sim.initial_m must be a unit vector");
    if (c.record_stride < 1) throw ConfigError("sim.record_stride must be >= 1");
    if (c.stop_after_transitions && *c.stop_after_transitions < 1)
        throw ConfigError("sim.stop_after_transitions must be >= 1");
}

Vector3 heun_step(const Vector3& m, const BiasPoint& bias, double dt, GaussianStream& noise,
                  const DeviceParams& p) {
    const Vector3 h = thermal_field_sample(noise, p, dt);
    const Vector3 f0 = llg_rhs(m, bias, h, p);
    const Vector3 predicted = m + f0 * dt;
    const Vector3 f1 = llg_rhs(predicted, bias, h, p);
    const Vector3 corrected = m + (f0 + f1) * (0.5 * dt);
    const double len = norm(corrected);
    if (!std::isfinite(len) || std::abs(len - 1.0) > kMaxStepNormError) {
        throw NumericalError("heun_step diverged (|m| = " + std::to_string(len) + ")", 0);
    }
    return corrected * (1.0 / len);
}

Trajectory run_trajectory(const SimConfig& config, const BiasPoint& bias, const DeviceParams& p,
                          TelegraphDetector* detector) {
    validate(config);
    Trajectory out;
    out.dt_effective = config.dt * static_cast<double>(config.record_stride);
    out.bias = bias;
    out.seed = config.seed;
    const auto stride = static_cast<long long>(config.record_stride);
    const long long n_steps = std::llround(config.t_max / config.dt);
    out.samples.reserve(static_cast<std::size_t>(n_steps / stride + 1));

    integrate(config, bias, p, [&](long long k, const Vector3& m) {
        if (k % stride == 0) {
            out.samples.push_back({static_cast<double>(k) * config.dt, m});
        }
        if (detector != nullptr) {
            detector->observe(k, m.z);
            if (config.stop_after_transitions &&
                detector->transitions() >= *config.stop_after_transitions) {
                return false;
            }
        }
        return true;
    });
    return out;
}

double analytic_fmr_frequency(const DeviceParams& p) {
    // Linearized LLG about +z: mx, my oscillate at gamma' sqrt(a b - alpha^2 (a - b)^2 / 4)
    // with a = Ms (Nx - Nz), b = Ms (Ny - Nz); the alpha term is the damping shift.
    const double alpha = p.damping_alpha;
    const double gamma_prime = constants::gamma / (1.0 + alpha * alpha);
    const auto& n = p.demag_factors;
    const double a = p.saturation_magnetization * (n.x - n.z);
    const double b = p.saturation_magnetization * (n.y - n.z);
    const double w2 = a * b - 0.25 * alpha * alpha * (a - b) * (a - b);
    if (!(w2 > 0)) throw std::invalid_argument("analytic_fmr_frequency: overdamped, no precession");
    return gamma_prime / (2.0 * constants::pi) * std::sqrt(w2);
}

double precession_frequency_check(const DeviceParams& p, double dt) {
    DeviceParams cold = p;
    cold.temperature = 0.0;  // thermal_field_sigma is then exactly zero

    const double f_analytic = analytic_fmr_frequency(cold);
    const double tilt = 1e-3;
    SimConfig cfg;
    cfg.dt = dt;
    cfg.t_max = 40.0 / f_analytic;
    cfg.initial_m = {0.0, std::sin(tilt), std::cos(tilt)};

    std::vector<double> crossings;
    double prev_t = 0.0;
    double prev_x = 0.0;
    integrate(cfg, BiasPoint{}, cold, [&](long long k, const Vector3& m) {
        const double t = static_cast<double>(k) * dt;
        if (k > 0 && ((prev_x < 0.0 && m.x >= 0.0) || (prev_x > 0.0 && m.x <= 0.0))) {
            crossings.push_back(prev_t + dt * prev_x / (prev_x - m.x));
        }
        prev_t = t;
        prev_x = m.x;
        return true;
    });
    if (crossings.size() < 4) {
        throw NumericalError("precession_frequency_check: too few zero crossings", 0);
    }
    const double span = crossings.back() - crossings.front();
    const double f_sim = static_cast<double>(crossings.size() - 1) / (2.0 * span);
    return std::abs(f_sim - f_analytic) / f_analytic;
}

}  // namespace meneuron
