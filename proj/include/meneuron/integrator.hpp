#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "meneuron/device.hpp"
#include "meneuron/errors.hpp"
#include "meneuron/rng.hpp"
#include "meneuron/vector3.hpp"

namespace meneuron {

class TelegraphDetector;

struct SimConfig {
    double dt = 1e-13;  // s
    double t_max = 1e-6;  // s
    std::uint64_t seed = 1;
    Vector3 initial_m{0.0, 0.0, 1.0};
    std::size_t record_stride = 1;
    std::optional<std::size_t> stop_after_transitions;
};

/// Throws ConfigError on dt <= 0, t_max < dt, |initial_m| != 1, stride 0.
void validate(const SimConfig& c);

struct TrajectorySample {
    double time = 0.0;  // s
    Vector3 m{};
};

struct Trajectory {
    double dt_effective = 0.0;  // dt * record_stride
    std::vector<TrajectorySample> samples;
    BiasPoint bias{};
    std::uint64_t seed = 0;
};

/// Largest tolerated deviation of |m| from 1 before renormalization. A larger
/// excursion means dt is too coarse for the field scale.
inline constexpr double kMaxStepNormError = 0.1;

/// Fixed-step Heun integrator for one trajectory. One thermal-field draw per
/// step is shared by predictor and corrector (Stratonovich-consistent).
class HeunStepper {
public:
    HeunStepper(const DeviceParams& p, const BiasPoint& bias, double dt, std::uint64_t seed)
        : kernel_(p, bias), dt_(dt), sigma_(thermal_field_sigma(p, dt)), noise_(seed) {}

    /// Advances m in place. Throws NumericalError on blow-up.
    void step(Vector3& m, long long step_index) {
        Vector3 h{};
        if (sigma_ != 0.0) h = noise_.next3() * sigma_;
        const Vector3 f0 = kernel_.rhs(m, h);
        const Vector3 predicted = m + f0 * dt_;
        const Vector3 f1 = kernel_.rhs(predicted, h);
        const Vector3 corrected = m + (f0 + f1) * (0.5 * dt_);
        const double len = norm(corrected);
        if (!std::isfinite(len) || std::abs(len - 1.0) > kMaxStepNormError) {
            throw NumericalError("integration diverged at step " + std::to_string(step_index) +
                                     " (|m| = " + std::to_string(len) + "); reduce dt",
                                 step_index);
        }
        m = corrected * (1.0 / len);
    }

    double dt() const noexcept { return dt_; }

private:
    LlgKernel kernel_;
    double dt_;
    double sigma_;
    GaussianStream noise_;
};

/// One Heun step from m. Draws one thermal sample from `noise`.
Vector3 heun_step(const Vector3& m, const BiasPoint& bias, double dt, GaussianStream& noise,
                  const DeviceParams& p);

/// Runs the stepper from config.initial_m, calling observer(step, m) after
/// the initial state (step 0) and after every step. The observer returns
/// false to stop early. Returns the number of steps taken.
template <class Observer>
long long integrate(const SimConfig& config, const BiasPoint& bias, const DeviceParams& p,
                    Observer&& observer) {
    const long long n_steps = static_cast<long long>(std::llround(config.t_max / config.dt));
    HeunStepper stepper(p, bias, config.dt, config.seed);
    Vector3 m = normalized(config.initial_m);
    if (!observer(0LL, m)) return 0;
    for (long long k = 1; k <= n_steps; ++k) {
        stepper.step(m, k);
        if (!observer(k, m)) return k;
    }
    return n_steps;
}

/// Deterministic in (seed, config, bias, params). When a detector is given,
/// every step is fed to it and stop_after_transitions is honored.
Trajectory run_trajectory(const SimConfig& config, const BiasPoint& bias, const DeviceParams& p,
                          TelegraphDetector* detector = nullptr);

/// Small-angle precession about +z at T = 0 and zero bias; returns the
/// relative error of the zero-crossing frequency of mx against
/// analytic_fmr_frequency.
double precession_frequency_check(const DeviceParams& p, double dt = 1e-13);

/// Small-angle triaxial FMR frequency in Hz, gamma' = gamma / (1 + alpha^2),
/// including the damping shift; the Kittel value (gamma'/2pi) Ms
/// sqrt((Nx - Nz)(Ny - Nz)) for alpha -> 0.
double analytic_fmr_frequency(const DeviceParams& p);

}  // namespace meneuron
