#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "meneuron/integrator.hpp"

namespace meneuron {

enum class StateLabel : std::uint8_t { Transit, P, AP };

std::string_view to_string(StateLabel s);

struct DwellRecord {
    StateLabel state = StateLabel::P;
    double duration = 0.0;  // s
    double start_time = 0.0;  // s
};

inline constexpr double kDefaultThetaOn = 0.3;

/// Schmitt-trigger labeling of mz: switches to P only at mz >= +theta_on and
/// to AP only at mz <= -theta_on. Warns on stderr if no crossing occurs.
std::vector<StateLabel> detect_states(const Trajectory& trajectory, double theta_on = kDefaultThetaOn);

/// One record per maximal run of equal labels. Transit runs and the first and
/// last (censored) runs are dropped.
std::vector<DwellRecord> dwell_times(std::span<const StateLabel> labels, double dt_effective);

/// Streaming version of detect_states + dwell_times, used when trajectories
/// are too long to store. Durations are step counts times dt, so for the
/// same samples it reproduces dwell_times exactly (minus the censored tail,
/// which is never closed).
class TelegraphDetector {
public:
    TelegraphDetector(double theta_on, double dt);

    /// Feeds the sample at integer step index `step`; returns true if the
    /// label changed.
    bool observe(long long step, double mz);

    StateLabel state() const noexcept { return state_; }
    std::size_t transitions() const noexcept { return transitions_; }
    std::size_t count(StateLabel s) const noexcept {
        return s == StateLabel::P ? n_p_ : (s == StateLabel::AP ? n_ap_ : 0);
    }
    const std::vector<DwellRecord>& dwells() const noexcept { return dwells_; }
    std::vector<DwellRecord> take_dwells() { return std::move(dwells_); }

private:
    double theta_on_;
    double dt_;
    StateLabel state_ = StateLabel::Transit;
    long long run_start_ = 0;
    bool first_run_ = true;
    std::size_t transitions_ = 0;
    std::size_t n_p_ = 0, n_ap_ = 0;
    std::vector<DwellRecord> dwells_;
};

struct LifetimeEstimate {
    StateLabel state = StateLabel::P;
    double mean = 0.0;  // s
    double std_error = 0.0;  // s, mean / sqrt(count)
    std::size_t count = 0;
    double ks_statistic = 0.0;  // vs Exp(mean)
    double ks_pvalue = 1.0;
};

/// Means per state with exponential-model standard errors and a KS check.
/// Throws InsufficientDataError naming the state that has no dwells.
std::pair<LifetimeEstimate, LifetimeEstimate> estimate_lifetimes(std::span<const DwellRecord> dwells);

LifetimeEstimate estimate_lifetime(std::span<const double> durations, StateLabel state);

std::vector<double> durations_of(std::span<const DwellRecord> dwells, StateLabel state);

/// Duty fraction tau_ap / (tau_p + tau_ap). Throws std::invalid_argument if
/// both are zero or either is negative.
double firing_rate(double tau_p, double tau_ap);

}  // namespace meneuron
