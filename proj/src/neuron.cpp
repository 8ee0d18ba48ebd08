#include "meneuron/neuron.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "meneuron/errors.hpp"
#include "meneuron/rng.hpp"

namespace meneuron {

namespace {

// Locates v in axis: lower node index and fractional position in [0, 1].
bool locate(const std::vector<double>& axis, double v, std::size_t& i, double& t) {
    if (!(v >= axis.front() && v <= axis.back())) return false;
    if (axis.size() == 1) {
        i = 0;
        t = 0.0;
        return true;
    }
    const auto it = std::upper_bound(axis.begin(), axis.end(), v);
    i = it == axis.end() ? axis.size() - 2 : static_cast<std::size_t>(it - axis.begin()) - 1;
    t = (v - axis[i]) / (axis[i + 1] - axis[i]);
    return true;
}

std::string drive_text(double v1, double v2) {
    return "(V1, V2) = (" + format_double(v1) + ", " + format_double(v2) + ") V";
}

struct SegmentRates {
    long long first_step = 0;
    double p_escape_p = 0.0;  // leaving P
    double p_escape_ap = 0.0;
    double tau_p = 0.0;
    double tau_ap = 0.0;
};

std::vector<SegmentRates> prepare(const NeuronLUT& lut, std::span<const DriveSegment> drive, double duration,
                                  double dt, long long& n_steps) {
    validate_drive(drive);
    if (!(dt > 0)) throw ConfigError("dt_markov must be > 0");
    if (!(duration > 0)) throw ConfigError("spike train duration must be > 0");
    n_steps = std::llround(duration / dt);
    std::vector<SegmentRates> segs;
    for (const auto& d : drive) {
        if (d.t_start >= duration) break;
        long long k = static_cast<long long>(std::ceil(d.t_start / dt));
        while (k > 0 && static_cast<double>(k - 1) * dt >= d.t_start) --k;
        while (static_cast<double>(k) * dt < d.t_start) ++k;
        if (!lut.contains(d.v1, d.v2)) {
            throw DomainError("drive " + drive_text(d.v1, d.v2) + " at t = " + format_double(d.t_start) +
                                  " s lies outside the lookup-table domain",
                              d.t_start);
        }
        const auto taus = lut.lookup(d.v1, d.v2);
        if (dt > std::min(taus.tau_p, taus.tau_ap) / 20.0) {
            throw ConfigError("dt_markov = " + format_double(dt) + " s exceeds 1/20 of the shortest lifetime " +
                              format_double(std::min(taus.tau_p, taus.tau_ap)) + " s at t = " +
                              format_double(d.t_start) + " s");
        }
        segs.push_back({k, -std::expm1(-dt / taus.tau_p), -std::expm1(-dt / taus.tau_ap), taus.tau_p, taus.tau_ap});
    }
    return segs;
}

// Accumulates state changes into a SpikeTrain.
class Recorder {
public:
    Recorder(SpikeTrain& out, StateLabel initial, double dt, bool waveform)
        : out_(out), state_(initial), dt_(dt), waveform_(waveform) {
        out_.initial_state = initial;
        if (waveform_) out_.waveform.emplace_back(0.0, initial);
    }

    StateLabel state() const noexcept { return state_; }

    void flip(long long step) {
        const double t = static_cast<double>(step) * dt_;
        const double len = static_cast<double>(step - since_) * dt_;
        if (state_ == StateLabel::AP) out_.time_in_ap += len;
        if (!first_) out_.dwells.push_back({state_, len, static_cast<double>(since_) * dt_});
        first_ = false;
        state_ = state_ == StateLabel::P ? StateLabel::AP : StateLabel::P;
        if (state_ == StateLabel::AP) out_.spike_times.push_back(t);
        if (waveform_) out_.waveform.emplace_back(t, state_);
        since_ = step;
    }

    void finish(long long n_steps) {
        if (state_ == StateLabel::AP) out_.time_in_ap += static_cast<double>(n_steps - since_) * dt_;
        out_.duration = static_cast<double>(n_steps) * dt_;
    }

private:
    SpikeTrain& out_;
    StateLabel state_;
    double dt_;
    bool waveform_;
    bool first_ = true;
    long long since_ = 0;
};

StateLabel stationary_draw(Rng& rng, const SegmentRates& s) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return u(rng) < s.tau_ap / (s.tau_p + s.tau_ap) ? StateLabel::AP : StateLabel::P;
}

double escape_probability(const SegmentRates& s, StateLabel state) {
    return state == StateLabel::P ? s.p_escape_p : s.p_escape_ap;
}

}  // namespace

NeuronLUT::NeuronLUT(std::vector<double> axis1, std::vector<double> axis2, std::vector<double> tau_p,
                     std::vector<double> tau_ap, std::optional<BasisAngles> angles)
    : axis1_(std::move(axis1)),
      axis2_(std::move(axis2)),
      tau_p_(std::move(tau_p)),
      tau_ap_(std::move(tau_ap)),
      angles_(angles) {
    if (axis1_.empty() || axis2_.empty()) throw ConfigError("lookup table axes must be non-empty");
    for (const auto* a : {&axis1_, &axis2_}) {
        for (std::size_t i = 1; i < a->size(); ++i) {
            if (!((*a)[i] > (*a)[i - 1])) throw ConfigError("lookup table axes must be strictly increasing");
        }
    }
    const std::size_t n = axis1_.size() * axis2_.size();
    if (tau_p_.size() != n || tau_ap_.size() != n) throw ConfigError("lookup table size does not match its axes");
    for (std::size_t c = 0; c < n; ++c) {
        if (!(tau_p_[c] > 0 && tau_ap_[c] > 0 && std::isfinite(tau_p_[c]) && std::isfinite(tau_ap_[c]))) {
            throw ConfigError("lookup table lifetimes must be finite and positive");
        }
        log_tau_p_.push_back(std::log(tau_p_[c]));
        log_tau_ap_.push_back(std::log(tau_ap_[c]));
    }
}

bool NeuronLUT::contains(double v1, double v2) const noexcept {
    return v1 >= axis1_.front() && v1 <= axis1_.back() && v2 >= axis2_.front() && v2 <= axis2_.back();
}

NeuronLUT::Lifetimes NeuronLUT::lookup(double v1, double v2) const {
    std::size_t i = 0, j = 0;
    double t = 0.0, u = 0.0;
    if (!locate(axis1_, v1, i, t) || !locate(axis2_, v2, j, u)) {
        throw DomainError("lookup at " + drive_text(v1, v2) + " is outside the table domain [" +
                          format_double(axis1_.front()) + ", " + format_double(axis1_.back()) + "] x [" +
                          format_double(axis2_.front()) + ", " + format_double(axis2_.back()) + "]");
    }
    const std::size_t n2 = axis2_.size();
    const bool node_i = t == 0.0 || t == 1.0;
    const bool node_j = u == 0.0 || u == 1.0;
    if (node_i && node_j) {
        const std::size_t c = (i + (t == 1.0 ? 1 : 0)) * n2 + j + (u == 1.0 ? 1 : 0);
        return {tau_p_[c], tau_ap_[c]};
    }
    auto interp = [&](const std::vector<double>& f) {
        const std::size_t i1 = std::min(i + 1, axis1_.size() - 1);
        const std::size_t j1 = std::min(j + 1, n2 - 1);
        const double f00 = f[i * n2 + j], f01 = f[i * n2 + j1];
        const double f10 = f[i1 * n2 + j], f11 = f[i1 * n2 + j1];
        return (1 - t) * ((1 - u) * f00 + u * f01) + t * ((1 - u) * f10 + u * f11);
    };
    return {std::exp(interp(log_tau_p_)), std::exp(interp(log_tau_ap_))};
}

NeuronLUT build_lut(const LifetimeGrid& grid) {
    validate(grid);
    if (grid.axis_kind != AxisKind::V1_V2) throw ConfigError("lookup table needs a V1_V2 grid");
    std::vector<double> tp, tap;
    for (std::size_t c = 0; c < grid.cells.size(); ++c) {
        const GridCell& cell = grid.cells[c];
        if (!cell.valid() || !(cell.tau_p.mean > 0) || !(cell.tau_ap.mean > 0)) {
            const std::size_t n2 = grid.axis2.size();
            throw ConfigError("grid cell (" + format_double(grid.axis1[c / n2]) + ", " +
                              format_double(grid.axis2[c % n2]) + ") is " + flags_to_string(cell.flags) +
                              "; cannot build lookup table");
        }
        tp.push_back(cell.tau_p.mean);
        tap.push_back(cell.tau_ap.mean);
    }
    return NeuronLUT(grid.axis1, grid.axis2, std::move(tp), std::move(tap), grid.angles);
}

void validate_drive(std::span<const DriveSegment> drive) {
    if (drive.empty()) throw ConfigError("drive schedule is empty");
    if (drive.front().t_start != 0.0) throw ConfigError("drive schedule must start at t = 0");
    for (std::size_t i = 1; i < drive.size(); ++i) {
        if (!(drive[i].t_start > drive[i - 1].t_start)) {
            throw ConfigError("drive segment start times must be strictly increasing (row " + std::to_string(i + 1) +
                              ")");
        }
    }
    for (const auto& d : drive) {
        if (!std::isfinite(d.v1) || !std::isfinite(d.v2)) throw ConfigError("drive voltages must be finite");
    }
}

SpikeTrain generate_spike_train(const NeuronLUT& lut, std::span<const DriveSegment> drive, double duration,
                                std::uint64_t seed, double dt_markov, bool record_waveform) {
    long long n_steps = 0;
    const auto segs = prepare(lut, drive, duration, dt_markov, n_steps);
    Rng rng(mix64(seed));
    SpikeTrain out;
    Recorder rec(out, stationary_draw(rng, segs.front()), dt_markov, record_waveform);

    std::size_t s = 0;
    long long k = 0;
    while (k < n_steps) {
        while (s + 1 < segs.size() && k >= segs[s + 1].first_step) ++s;
        const long long seg_end = s + 1 < segs.size() ? std::min(segs[s + 1].first_step, n_steps) : n_steps;
        // Failures before the first escape; step k + f is the escaping step.
        std::geometric_distribution<long long> wait(escape_probability(segs[s], rec.state()));
        const long long f = wait(rng);
        if (f < seg_end - k) {
            k += f + 1;
            rec.flip(k);
        } else {
            k = seg_end;  // memoryless: redraw with the next segment's rate
        }
    }
    rec.finish(n_steps);
    return out;
}

SpikeTrain generate_spike_train_stepwise(const NeuronLUT& lut, std::span<const DriveSegment> drive,
                                         double duration, std::uint64_t seed, double dt_markov,
                                         bool record_waveform) {
    long long n_steps = 0;
    const auto segs = prepare(lut, drive, duration, dt_markov, n_steps);
    Rng rng(mix64(seed));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    SpikeTrain out;
    Recorder rec(out, stationary_draw(rng, segs.front()), dt_markov, record_waveform);
    std::size_t s = 0;
    for (long long k = 0; k < n_steps; ++k) {
        while (s + 1 < segs.size() && k >= segs[s + 1].first_step) ++s;
        if (u(rng) < escape_probability(segs[s], rec.state())) rec.flip(k + 1);
    }
    rec.finish(n_steps);
    return out;
}

bool ValidationReport::passed() const noexcept {
    return !points.empty() &&
           std::all_of(points.begin(), points.end(), [](const ValidationPoint& p) { return p.mean_ok && p.ks_ok; });
}

ValidationReport validate_against_llg(std::span<const std::pair<double, double>> points, const DeviceParams& p,
                                      const SweepOptions& opt, const NeuronLUT& lut, double dt_markov,
                                      std::size_t ks_samples) {
    ValidationReport report;
    report.ks_samples = ks_samples;
    const std::size_t need = std::max(opt.min_dwells, ks_samples);
    for (std::size_t idx = 0; idx < points.size(); ++idx) {
        ValidationPoint vp;
        vp.v1 = points[idx].first;
        vp.v2 = points[idx].second;
        vp.bias = lut.angles() ? inverse_basis_transform(vp.v1, vp.v2, *lut.angles()) : BiasPoint{vp.v1, vp.v2};

        std::vector<DwellRecord> llg;
        const GridCell cell = measure_cell(vp.bias, p, opt, idx, llg);
        vp.llg_p = cell.tau_p;
        vp.llg_ap = cell.tau_ap;

        const auto taus = lut.lookup(vp.v1, vp.v2);
        const DriveSegment constant[] = {{0.0, vp.v1, vp.v2}};
        double duration = 1.25 * static_cast<double>(need + 2) * (taus.tau_p + taus.tau_ap);
        SpikeTrain train;
        for (;;) {
            train = generate_spike_train(lut, constant, duration, derive_seed(~opt.sim.seed, idx), dt_markov);
            const auto np = durations_of(train.dwells, StateLabel::P).size();
            const auto nap = durations_of(train.dwells, StateLabel::AP).size();
            if (np >= need && nap >= need) break;
            duration *= 1.5;
        }
        const auto mp = durations_of(train.dwells, StateLabel::P);
        const auto map = durations_of(train.dwells, StateLabel::AP);
        vp.markov_p = estimate_lifetime(mp, StateLabel::P);
        vp.markov_ap = estimate_lifetime(map, StateLabel::AP);

        if (cell.valid()) {
            vp.ratio_p = vp.markov_p.mean / vp.llg_p.mean;
            vp.ratio_ap = vp.markov_ap.mean / vp.llg_ap.mean;
            const auto lp = durations_of(llg, StateLabel::P);
            const auto lap = durations_of(llg, StateLabel::AP);
            auto head = [&](const std::vector<double>& v) {
                return std::span<const double>(v.data(), std::min(v.size(), ks_samples));
            };
            vp.ks_p = stats::ks_two_sample(head(lp), head(mp));
            vp.ks_ap = stats::ks_two_sample(head(lap), head(map));
            vp.mean_ok = std::abs(vp.ratio_p - 1) <= report.mean_tolerance &&
                         std::abs(vp.ratio_ap - 1) <= report.mean_tolerance;
            vp.ks_ok = vp.ks_p.pvalue > report.ks_alpha && vp.ks_ap.pvalue > report.ks_alpha;
        }
        report.points.push_back(vp);
    }
    return report;
}

}  // namespace meneuron
