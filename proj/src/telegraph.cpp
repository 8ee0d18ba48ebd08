#include "meneuron/telegraph.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>
#include <string>

#include "meneuron/stats.hpp"

namespace meneuron {

std::string_view to_string(StateLabel s) {
    switch (s) {
        case StateLabel::P: return "P";
        case StateLabel::AP: return "AP";
        case StateLabel::Transit: return "Transit";
    }
    return "?";
}

std::vector<StateLabel> detect_states(const Trajectory& trajectory, double theta_on) {
    if (!(theta_on > 0.0 && theta_on < 1.0)) {
        throw std::invalid_argument("detect_states: theta_on must be in (0, 1)");
    }
    std::vector<StateLabel> labels;
    labels.reserve(trajectory.samples.size());
    StateLabel current = StateLabel::Transit;
    bool crossed = false;
    for (const auto& s : trajectory.samples) {
        if (s.m.z >= theta_on) {
            crossed = crossed || current != StateLabel::P;
            current = StateLabel::P;
        } else if (s.m.z <= -theta_on) {
            crossed = crossed || current != StateLabel::AP;
            current = StateLabel::AP;
        }
        labels.push_back(current);
    }
    if (!crossed) std::cerr << "warning: detect_states: no threshold crossing in trajectory\n";
    return labels;
}

std::vector<DwellRecord> dwell_times(std::span<const StateLabel> labels, double dt_effective) {
    struct Run {
        StateLabel state;
        std::size_t start;
        std::size_t length;
    };
    std::vector<Run> runs;
    for (std::size_t i = 0; i < labels.size();) {
        std::size_t j = i;
        while (j < labels.size() && labels[j] == labels[i]) ++j;
        if (labels[i] != StateLabel::Transit) runs.push_back({labels[i], i, j - i});
        i = j;
    }
    std::vector<DwellRecord> out;
    if (runs.size() < 3) return out;
    for (std::size_t r = 1; r + 1 < runs.size(); ++r) {
        out.push_back({runs[r].state, static_cast<double>(runs[r].length) * dt_effective,
                       static_cast<double>(runs[r].start) * dt_effective});
    }
    return out;
}

TelegraphDetector::TelegraphDetector(double theta_on, double dt) : theta_on_(theta_on), dt_(dt) {
    if (!(theta_on > 0.0 && theta_on < 1.0)) {
        throw std::invalid_argument("TelegraphDetector: theta_on must be in (0, 1)");
    }
}

bool TelegraphDetector::observe(long long step, double mz) {
    StateLabel next = state_;
    if (mz >= theta_on_) {
        next = StateLabel::P;
    } else if (mz <= -theta_on_) {
        next = StateLabel::AP;
    }
    if (next == state_) return false;

    if (state_ != StateLabel::Transit) {
        ++transitions_;
        if (!first_run_) {
            dwells_.push_back({state_, static_cast<double>(step - run_start_) * dt_,
                               static_cast<double>(run_start_) * dt_});
            (state_ == StateLabel::P ? n_p_ : n_ap_) += 1;
        }
        first_run_ = false;
    }
    state_ = next;
    run_start_ = step;
    return true;
}

std::vector<double> durations_of(std::span<const DwellRecord> dwells, StateLabel state) {
    std::vector<double> out;
    for (const auto& d : dwells) {
        if (d.state == state) out.push_back(d.duration);
    }
    return out;
}

LifetimeEstimate estimate_lifetime(std::span<const double> durations, StateLabel state) {
    if (durations.empty()) {
        throw InsufficientDataError("no completed dwells in state " + std::string(to_string(state)));
    }
    LifetimeEstimate est;
    est.state = state;
    est.count = durations.size();
    est.mean = stats::mean(durations);
    est.std_error = est.mean / std::sqrt(static_cast<double>(est.count));
    const auto ks = stats::ks_exponential(durations, est.mean);
    est.ks_statistic = ks.statistic;
    est.ks_pvalue = ks.pvalue;
    return est;
}

std::pair<LifetimeEstimate, LifetimeEstimate> estimate_lifetimes(std::span<const DwellRecord> dwells) {
    const auto p = durations_of(dwells, StateLabel::P);
    const auto ap = durations_of(dwells, StateLabel::AP);
    return {estimate_lifetime(p, StateLabel::P), estimate_lifetime(ap, StateLabel::AP)};
}

double firing_rate(double tau_p, double tau_ap) {
    if (tau_p < 0 || tau_ap < 0) throw std::invalid_argument("firing_rate: lifetimes must be >= 0");
    if (tau_p == 0 && tau_ap == 0) throw std::invalid_argument("firing_rate: both lifetimes are zero");
    return tau_ap / (tau_p + tau_ap);
}

}  // namespace meneuron
