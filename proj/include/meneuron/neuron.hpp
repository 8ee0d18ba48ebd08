#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "meneuron/characterization.hpp"
#include "meneuron/stats.hpp"
#include "meneuron/telegraph.hpp"

namespace meneuron {

/// Bilinear interpolation of log tau_P and log tau_AP over a (V1, V2) grid.
/// Immutable after construction; safe to share between threads.
class NeuronLUT {
public:
    struct Lifetimes {
        double tau_p = 0.0;
        double tau_ap = 0.0;
    };

    NeuronLUT(std::vector<double> axis1, std::vector<double> axis2, std::vector<double> tau_p,
              std::vector<double> tau_ap, std::optional<BasisAngles> angles = std::nullopt);

    /// Throws DomainError outside the grid rectangle (no extrapolation).
    Lifetimes lookup(double v1, double v2) const;
    bool contains(double v1, double v2) const noexcept;

    const std::vector<double>& axis1() const noexcept { return axis1_; }
    const std::vector<double>& axis2() const noexcept { return axis2_; }
    const std::optional<BasisAngles>& angles() const noexcept { return angles_; }

private:
    std::vector<double> axis1_, axis2_;
    std::vector<double> tau_p_, tau_ap_;  // row-major like LifetimeGrid
    std::vector<double> log_tau_p_, log_tau_ap_;
    std::optional<BasisAngles> angles_;
};

/// Requires axis_kind V1_V2 and every cell valid with positive means.
NeuronLUT build_lut(const LifetimeGrid& grid);

struct DriveSegment {
    double t_start = 0.0;  // s
    double v1 = 0.0;
    double v2 = 0.0;
};

/// First segment must start at 0 and starts must be strictly increasing.
void validate_drive(std::span<const DriveSegment> drive);

struct SpikeTrain {
    std::vector<double> spike_times;  // AP entries, s
    std::vector<std::pair<double, StateLabel>> waveform;  // state changes incl. t = 0
    std::vector<DwellRecord> dwells;  // completed, the first (censored) excluded
    double duration = 0.0;
    double time_in_ap = 0.0;
    StateLabel initial_state = StateLabel::P;

    double duty_fraction() const noexcept { return duration > 0 ? time_in_ap / duration : 0.0; }
};

/// Two-state chain on a dt_markov time lattice; escape probability per step
/// 1 - exp(-dt/tau_state(V1, V2)). Waiting times are drawn as geometric
/// jumps, so the cost scales with the number of transitions, not steps. The
/// initial state is drawn from the stationary distribution of the first
/// segment. Throws DomainError (with the time) for drive outside the LUT and
/// ConfigError if dt_markov > tau / 20 anywhere on the drive.
SpikeTrain generate_spike_train(const NeuronLUT& lut, std::span<const DriveSegment> drive, double duration,
                                std::uint64_t seed, double dt_markov, bool record_waveform = false);

/// Same process with one Bernoulli draw per lattice step. Reference for tests
/// and benchmarks; equal in distribution, not bitwise.
SpikeTrain generate_spike_train_stepwise(const NeuronLUT& lut, std::span<const DriveSegment> drive,
                                         double duration, std::uint64_t seed, double dt_markov,
                                         bool record_waveform = false);

struct ValidationPoint {
    double v1 = 0.0, v2 = 0.0;
    BiasPoint bias{};
    LifetimeEstimate llg_p{StateLabel::P}, llg_ap{StateLabel::AP};
    LifetimeEstimate markov_p{StateLabel::P}, markov_ap{StateLabel::AP};
    double ratio_p = 0.0, ratio_ap = 0.0;  // markov mean / llg mean
    stats::KsResult ks_p, ks_ap;  // two-sample, first ks_samples of each side
    bool mean_ok = false;
    bool ks_ok = false;
};

struct ValidationReport {
    std::vector<ValidationPoint> points;
    double mean_tolerance = 0.10;
    double ks_alpha = 0.01;
    std::size_t ks_samples = 500;

    bool passed() const noexcept;
};

/// LLG dwells at each (V1, V2) (mapped through the LUT's angles; identity if
/// none) against Markov dwells from the LUT at the same point. LLG sampling
/// uses opt.min_dwells per state; the Markov side draws at least as many.
ValidationReport validate_against_llg(std::span<const std::pair<double, double>> points, const DeviceParams& p,
                                      const SweepOptions& opt, const NeuronLUT& lut, double dt_markov,
                                      std::size_t ks_samples = 500);

}  // namespace meneuron
