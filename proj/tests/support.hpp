#pragma once

#include <cmath>
#include <functional>

#include "meneuron/characterization.hpp"
#include "meneuron/config.hpp"

namespace meneuron::testing {

inline DeviceParams default_device() { return default_config().device; }

// Grid whose cells hold exact lifetimes from analytic fields, with a fixed
// dwell count so stderr = mean / sqrt(count).
inline LifetimeGrid synthetic_grid(const std::vector<double>& a1, const std::vector<double>& a2,
                                   const std::function<double(double, double)>& tau_p,
                                   const std::function<double(double, double)>& tau_ap,
                                   AxisKind kind = AxisKind::ME_I, std::size_t count = 400) {
    LifetimeGrid g;
    g.axis_kind = kind;
    g.axis1 = a1;
    g.axis2 = a2;
    g.min_dwells = count;
    for (double x : a1) {
        for (double y : a2) {
            GridCell c;
            c.bias = {x, y};
            c.tau_p.mean = tau_p(x, y);
            c.tau_ap.mean = tau_ap(x, y);
            c.tau_p.count = c.tau_ap.count = count;
            c.tau_p.std_error = c.tau_p.mean / std::sqrt(static_cast<double>(count));
            c.tau_ap.std_error = c.tau_ap.mean / std::sqrt(static_cast<double>(count));
            c.trajectories = 1;
            g.cells.push_back(c);
        }
    }
    return g;
}

}  // namespace meneuron::testing
