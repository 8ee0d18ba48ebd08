#include "meneuron/characterization.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <omp.h>

#include "meneuron/errors.hpp"
#include "meneuron/rng.hpp"

namespace meneuron {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// cos/sin of exact multiples of pi/2 come out as ~1e-17 instead of 0; snap
// them so that identity angles map voltages bit-for-bit.
double snap(double v) { return std::abs(v) < 1e-15 ? 0.0 : v; }

void fill_estimate(LifetimeEstimate& est, std::span<const DwellRecord> dwells) {
    const auto d = durations_of(dwells, est.state);
    if (d.empty()) {
        est.mean = kNaN;
        est.std_error = kNaN;
        est.count = 0;
        est.ks_statistic = kNaN;
        est.ks_pvalue = kNaN;
        return;
    }
    est = estimate_lifetime(d, est.state);
}

struct Task {
    std::size_t cell;
    std::size_t trajectory;
};

std::size_t per_trajectory_target(const SweepOptions& opt) {
    const std::size_t n = std::max<std::size_t>(opt.trajectories_per_cell, 1);
    return (opt.min_dwells + n - 1) / n;
}

DwellSample run_task(const BiasPoint& bias, const DeviceParams& p, const SweepOptions& opt, std::size_t cell,
                     std::size_t trajectory) {
    SimConfig sim = opt.sim;
    sim.seed = derive_seed(opt.sim.seed, cell * opt.trajectories_per_cell + trajectory);
    return sample_dwells(bias, p, sim, opt.theta_on, per_trajectory_target(opt), opt.time_budget);
}

GridCell merge_cell(const BiasPoint& bias, const SweepOptions& opt, std::span<DwellSample> samples,
                    std::vector<DwellRecord>* dwells_out) {
    GridCell cell;
    cell.bias = bias;
    std::vector<DwellRecord> pooled;
    for (auto& s : samples) {
        cell.simulated_time += s.simulated_time;
        pooled.insert(pooled.end(), s.dwells.begin(), s.dwells.end());
        ++cell.trajectories;
    }
    fill_estimate(cell.tau_p, pooled);
    fill_estimate(cell.tau_ap, pooled);
    if (cell.tau_p.count == 0 || cell.tau_ap.count == 0) cell.flags |= cell_flags::kFailed;
    if (cell.tau_p.count < opt.min_dwells || cell.tau_ap.count < opt.min_dwells) {
        cell.flags |= cell_flags::kBudgetLimited;
    }
    if (dwells_out != nullptr) *dwells_out = std::move(pooled);
    return cell;
}

// Runs every (cell, trajectory) task of `biases`, in parallel or not, and
// assembles cells in index order. Cells with skip[i] set are left untouched.
std::vector<GridCell> run_cells(const std::vector<BiasPoint>& biases, const std::vector<bool>& skip,
                                const DeviceParams& p, const SweepOptions& opt, bool parallel) {
    if (opt.trajectories_per_cell == 0) throw ConfigError("trajectories_per_cell must be >= 1");
    if (opt.min_dwells == 0) throw ConfigError("min_dwells must be >= 1");
    validate(p);

    std::vector<Task> tasks;
    for (std::size_t c = 0; c < biases.size(); ++c) {
        if (skip[c]) continue;
        for (std::size_t t = 0; t < opt.trajectories_per_cell; ++t) tasks.push_back({c, t});
    }
    std::vector<DwellSample> results(tasks.size());
    std::vector<std::exception_ptr> errors(tasks.size());
    std::size_t done = 0;
    const auto n_tasks = static_cast<long long>(tasks.size());

    auto body = [&](long long k) {
        const auto& task = tasks[static_cast<std::size_t>(k)];
        try {
            results[static_cast<std::size_t>(k)] = run_task(biases[task.cell], p, opt, task.cell, task.trajectory);
        } catch (...) {
            errors[static_cast<std::size_t>(k)] = std::current_exception();
        }
    };

    if (parallel) {
        const int threads = opt.threads > 0 ? opt.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
        for (long long k = 0; k < n_tasks; ++k) {
            body(k);
#pragma omp critical(meneuron_sweep_progress)
            {
                ++done;
                if (opt.progress) opt.progress(done, tasks.size());
            }
        }
    } else {
        for (long long k = 0; k < n_tasks; ++k) {
            body(k);
            ++done;
            if (opt.progress) opt.progress(done, tasks.size());
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    std::vector<GridCell> cells(biases.size());
    for (std::size_t first = 0; first < tasks.size();) {
        const std::size_t c = tasks[first].cell;
        const std::size_t n = opt.trajectories_per_cell;
        cells[c] = merge_cell(biases[c], opt, std::span(results).subspan(first, n), nullptr);
        first += n;
    }
    for (std::size_t c = 0; c < biases.size(); ++c) {
        if (skip[c]) cells[c].bias = biases[c];
    }
    return cells;
}

LifetimeGrid physical_sweep(std::span<const double> v_me_values, std::span<const double> v_i_values,
                            const DeviceParams& p, const SweepOptions& opt, bool parallel) {
    LifetimeGrid g;
    g.axis_kind = AxisKind::ME_I;
    g.axis1.assign(v_me_values.begin(), v_me_values.end());
    g.axis2.assign(v_i_values.begin(), v_i_values.end());
    g.master_seed = opt.sim.seed;
    g.min_dwells = opt.min_dwells;
    g.cells.resize(g.axis1.size() * g.axis2.size());
    validate(g);

    std::vector<BiasPoint> biases;
    for (double vme : g.axis1) {
        for (double vi : g.axis2) {
            const BiasPoint b{vme, vi};
            if (!opt.window.contains(b)) {
                throw ConfigError("sweep node (" + format_double(vme) + ", " + format_double(vi) +
                                  ") V lies outside the operating window");
            }
            biases.push_back(b);
        }
    }
    g.cells = run_cells(biases, std::vector<bool>(biases.size(), false), p, opt, parallel);
    return g;
}

bool same_node(double a, double b, double scale) { return std::abs(a - b) <= 1e-9 * std::max(scale, 1e-12); }

std::size_t interior_index(std::span<const double> axis, double v, const char* name) {
    double scale = 0;
    for (double a : axis) scale = std::max(scale, std::abs(a));
    for (std::size_t i = 0; i < axis.size(); ++i) {
        if (same_node(axis[i], v, scale)) {
            if (i == 0 || i + 1 == axis.size()) {
                throw std::invalid_argument(std::string("k_factors: node is on the ") + name + " boundary");
            }
            return i;
        }
    }
    throw std::invalid_argument(std::string("k_factors: ") + name + " value is not a grid node");
}

std::pair<double, double> central_difference(const LifetimeEstimate& lo, const LifetimeEstimate& hi, double h) {
    return {(hi.mean - lo.mean) / h, std::hypot(hi.std_error, lo.std_error) / h};
}

double ratio(double num, double den, bool& infinite) {
    infinite = den == 0.0;
    if (infinite) return std::numeric_limits<double>::infinity();
    return std::abs(num / den);
}

double fold_half_turn(double a) {
    while (a > std::numbers::pi) a -= 2 * std::numbers::pi;
    while (a <= -std::numbers::pi) a += 2 * std::numbers::pi;
    return a;
}

}  // namespace

std::string_view to_string(AxisKind k) { return k == AxisKind::ME_I ? "ME_I" : "V1_V2"; }

std::string flags_to_string(std::uint32_t flags) {
    if (flags == 0) return "ok";
    std::string out;
    auto add = [&](std::uint32_t bit, const char* name) {
        if ((flags & bit) == 0) return;
        if (!out.empty()) out += '|';
        out += name;
    };
    add(cell_flags::kBudgetLimited, "budget_limited");
    add(cell_flags::kFailed, "failed");
    add(cell_flags::kOutsideWindow, "outside_window");
    return out;
}

std::uint32_t flags_from_string(std::string_view text) {
    std::uint32_t flags = 0;
    if (text == "ok" || text.empty()) return 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto bar = text.find('|', start);
        const auto tok = text.substr(start, bar == std::string_view::npos ? std::string_view::npos : bar - start);
        if (tok == "budget_limited") {
            flags |= cell_flags::kBudgetLimited;
        } else if (tok == "failed") {
            flags |= cell_flags::kFailed;
        } else if (tok == "outside_window") {
            flags |= cell_flags::kOutsideWindow;
        } else {
            throw ConfigError("unknown cell flag '" + std::string(tok) + "'");
        }
        if (bar == std::string_view::npos) break;
        start = bar + 1;
    }
    return flags;
}

double BasisAngles::constants_half_pi() { return std::numbers::pi / 2; }

BasisAngles::BasisAngles(double alpha_basis, double beta_basis) : alpha_(alpha_basis), beta_(beta_basis) {
    if (!std::isfinite(alpha_basis) || !std::isfinite(beta_basis)) {
        throw CalibrationError("basis angles must be finite");
    }
    m_ = {snap(std::cos(alpha_)), snap(std::sin(alpha_)), snap(std::cos(beta_)), snap(std::sin(beta_))};
    const double det = m_[0] * m_[3] - m_[1] * m_[2];
    if (std::abs(det) < 1e-3) {
        throw CalibrationError("basis angles alpha = " + format_double(alpha_) + " and beta = " + format_double(beta_) +
                               " give a singular transform");
    }
    inv_ = {m_[3] / det, -m_[1] / det, -m_[2] / det, m_[0] / det};
}

double BasisAngles::alpha_contour() const noexcept { return fold_half_turn(alpha_ + std::numbers::pi / 2); }
double BasisAngles::beta_contour() const noexcept { return fold_half_turn(beta_ + std::numbers::pi / 2); }

TransformedBias basis_transform(const BiasPoint& bias, const BasisAngles& angles) {
    const auto& m = angles.matrix();
    return {m[0] * bias.v_me + m[1] * bias.v_i, m[2] * bias.v_me + m[3] * bias.v_i};
}

BiasPoint inverse_basis_transform(double v1, double v2, const BasisAngles& angles) {
    const auto& n = angles.inverse();
    return {n[0] * v1 + n[1] * v2, n[2] * v1 + n[3] * v2};
}

void validate(const LifetimeGrid& g) {
    auto increasing = [](const std::vector<double>& a) {
        for (std::size_t i = 1; i < a.size(); ++i) {
            if (!(a[i] > a[i - 1])) return false;
        }
        return true;
    };
    if (g.axis1.empty() || g.axis2.empty()) throw ConfigError("grid axes must be non-empty");
    if (!increasing(g.axis1) || !increasing(g.axis2)) throw ConfigError("grid axes must be strictly increasing");
    if (g.cells.size() != g.axis1.size() * g.axis2.size()) {
        throw ConfigError("grid has " + std::to_string(g.cells.size()) + " cells for a " +
                          std::to_string(g.axis1.size()) + "x" + std::to_string(g.axis2.size()) + " axis product");
    }
}

SweepOptions sweep_options(const Config& c) {
    SweepOptions o;
    o.sim = c.sim;
    o.theta_on = c.analysis.theta_on;
    o.min_dwells = c.sweep.min_dwells;
    o.trajectories_per_cell = c.sweep.trajectories_per_cell;
    o.time_budget = c.sweep.cell_time_budget;
    o.window = c.sweep.window;
    return o;
}

DwellSample sample_dwells(const BiasPoint& bias, const DeviceParams& p, const SimConfig& sim, double theta_on,
                          std::size_t min_per_state, double time_budget) {
    SimConfig run = sim;
    run.t_max = time_budget;
    run.stop_after_transitions.reset();
    TelegraphDetector detector(theta_on, run.dt);
    const long long steps = integrate(run, bias, p, [&](long long k, const Vector3& m) {
        detector.observe(k, m.z);
        return detector.count(StateLabel::P) < min_per_state || detector.count(StateLabel::AP) < min_per_state;
    });
    DwellSample out;
    out.simulated_time = static_cast<double>(steps) * run.dt;
    out.budget_limited =
        detector.count(StateLabel::P) < min_per_state || detector.count(StateLabel::AP) < min_per_state;
    out.dwells = detector.take_dwells();
    return out;
}

GridCell measure_cell(const BiasPoint& bias, const DeviceParams& p, const SweepOptions& opt,
                      std::size_t cell_index, std::vector<DwellRecord>& dwells_out) {
    std::vector<DwellSample> samples;
    for (std::size_t t = 0; t < opt.trajectories_per_cell; ++t) {
        samples.push_back(run_task(bias, p, opt, cell_index, t));
    }
    return merge_cell(bias, opt, samples, &dwells_out);
}

GridCell measure_cell(const BiasPoint& bias, const DeviceParams& p, const SweepOptions& opt,
                      std::size_t cell_index) {
    std::vector<DwellRecord> unused;
    return measure_cell(bias, p, opt, cell_index, unused);
}

LifetimeGrid sweep_grid(std::span<const double> v_me_values, std::span<const double> v_i_values,
                        const DeviceParams& p, const SweepOptions& opt) {
    return physical_sweep(v_me_values, v_i_values, p, opt, true);
}

LifetimeGrid sweep_grid_serial(std::span<const double> v_me_values, std::span<const double> v_i_values,
                               const DeviceParams& p, const SweepOptions& opt) {
    return physical_sweep(v_me_values, v_i_values, p, opt, false);
}

LifetimeGrid transformed_sweep(std::span<const double> v1_values, std::span<const double> v2_values,
                               const BasisAngles& angles, const DeviceParams& p, const SweepOptions& opt) {
    LifetimeGrid g;
    g.axis_kind = AxisKind::V1_V2;
    g.axis1.assign(v1_values.begin(), v1_values.end());
    g.axis2.assign(v2_values.begin(), v2_values.end());
    g.master_seed = opt.sim.seed;
    g.min_dwells = opt.min_dwells;
    g.angles = angles;
    g.cells.resize(g.axis1.size() * g.axis2.size());
    validate(g);

    std::vector<BiasPoint> biases;
    std::vector<bool> skip;
    for (double v1 : g.axis1) {
        for (double v2 : g.axis2) {
            const BiasPoint b = inverse_basis_transform(v1, v2, angles);
            biases.push_back(b);
            skip.push_back(!opt.window.contains(b));
        }
    }
    g.cells = run_cells(biases, skip, p, opt, true);
    for (std::size_t c = 0; c < g.cells.size(); ++c) {
        if (!skip[c]) continue;
        g.cells[c].flags = cell_flags::kOutsideWindow;
        g.cells[c].tau_p.mean = g.cells[c].tau_ap.mean = kNaN;
        g.cells[c].tau_p.std_error = g.cells[c].tau_ap.std_error = kNaN;
    }
    return g;
}

OperatingWindow probe_operating_window(const DeviceParams& p, const SweepOptions& opt, double tau_min,
                                       double tau_max, double step, double max_half_width) {
    if (!(step > 0) || !(max_half_width >= step) || !(tau_max > tau_min && tau_min > 0)) {
        throw ConfigError("probe_operating_window: invalid step, width or lifetime bounds");
    }
    std::size_t index = 0;
    auto ok = [&](double vme, double vi) {
        const GridCell c = measure_cell({vme, vi}, p, opt, index++);
        auto inside = [&](const LifetimeEstimate& e) { return e.mean >= tau_min && e.mean <= tau_max; };
        return c.valid() && inside(c.tau_p) && inside(c.tau_ap);
    };
    if (!ok(0.0, 0.0)) {
        throw CalibrationError("zero-bias lifetimes fall outside [" + format_double(tau_min) + ", " +
                               format_double(tau_max) + "] s");
    }
    const auto n_steps = static_cast<int>(std::floor(max_half_width / step + 1e-9));
    auto grow = [&](bool me_axis) {
        double h = 0.0;
        for (int k = 1; k <= n_steps; ++k) {
            const double v = k * step;
            const bool pass = me_axis ? ok(v, 0.0) && ok(-v, 0.0) : ok(0.0, v) && ok(0.0, -v);
            if (!pass) break;
            h = v;
        }
        return h;
    };
    double h_me = grow(true);
    double h_i = grow(false);
    while (h_me > 0 && h_i > 0) {
        if (ok(h_me, h_i) && ok(h_me, -h_i) && ok(-h_me, h_i) && ok(-h_me, -h_i)) break;
        h_me = std::max(0.0, h_me - step);
        h_i = std::max(0.0, h_i - step);
    }
    return {-h_me, h_me, -h_i, h_i};
}

KFactors k_factors(const LifetimeGrid& grid, const BiasPoint& at) {
    validate(grid);
    const std::size_t i = interior_index(grid.axis1, at.v_me, "axis 1");
    const std::size_t j = interior_index(grid.axis2, at.v_i, "axis 2");
    const GridCell& lo1 = grid.at(i - 1, j);
    const GridCell& hi1 = grid.at(i + 1, j);
    const GridCell& lo2 = grid.at(i, j - 1);
    const GridCell& hi2 = grid.at(i, j + 1);
    for (const GridCell* c : {&lo1, &hi1, &lo2, &hi2}) {
        if (!c->valid()) throw std::invalid_argument("k_factors: a neighboring cell is invalid");
    }
    const double h1 = grid.axis1[i + 1] - grid.axis1[i - 1];
    const double h2 = grid.axis2[j + 1] - grid.axis2[j - 1];
    KFactors k;
    std::tie(k.k_ap_me, k.sigma_ap_me) = central_difference(lo1.tau_ap, hi1.tau_ap, h1);
    std::tie(k.k_p_me, k.sigma_p_me) = central_difference(lo1.tau_p, hi1.tau_p, h1);
    std::tie(k.k_ap_i, k.sigma_ap_i) = central_difference(lo2.tau_ap, hi2.tau_ap, h2);
    std::tie(k.k_p_i, k.sigma_p_i) = central_difference(lo2.tau_p, hi2.tau_p, h2);
    return k;
}

bool IndependenceRatios::independent(double threshold) const noexcept {
    return std::all_of(value.begin(), value.end(), [&](double r) { return r > threshold; });
}

IndependenceRatios independence_ratios(const KFactors& k) {
    IndependenceRatios r;
    r.value[0] = ratio(k.k_ap_me, k.k_ap_i, r.infinite[0]);
    r.value[1] = ratio(k.k_p_i, k.k_p_me, r.infinite[1]);
    r.value[2] = ratio(k.k_ap_me, k.k_p_me, r.infinite[2]);
    r.value[3] = ratio(k.k_p_i, k.k_ap_i, r.infinite[3]);
    return r;
}

DeltaTau predict_delta_tau(const KFactors& k, double dv_me, double dv_i) {
    return {k.k_ap_me * dv_me + k.k_ap_i * dv_i, k.k_p_me * dv_me + k.k_p_i * dv_i};
}

PlaneFit fit_log_lifetime_plane(const LifetimeGrid& grid, StateLabel state) {
    validate(grid);
    std::vector<std::array<double, 4>> rows;  // x1, x2, log tau, weight
    for (std::size_t i = 0; i < grid.axis1.size(); ++i) {
        for (std::size_t j = 0; j < grid.axis2.size(); ++j) {
            const GridCell& c = grid.at(i, j);
            const LifetimeEstimate& e = state == StateLabel::AP ? c.tau_ap : c.tau_p;
            if (!c.valid() || e.count == 0 || !(e.mean > 0)) continue;
            rows.push_back({grid.axis1[i], grid.axis2[j], std::log(e.mean), static_cast<double>(e.count)});
        }
    }
    if (rows.size() < 4) {
        throw CalibrationError("planar fit of log tau_" + std::string(to_string(state)) + " needs at least 4 valid cells");
    }
    const auto n = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXd x(n, 3);
    Eigen::VectorXd y(n), w(n);
    for (Eigen::Index r = 0; r < n; ++r) {
        const auto& row = rows[static_cast<std::size_t>(r)];
        x(r, 0) = 1.0;
        x(r, 1) = row[0];
        x(r, 2) = row[1];
        y(r) = row[2];
        w(r) = row[3];
    }
    const Eigen::MatrixXd xtw = x.transpose() * w.asDiagonal();
    const Eigen::Matrix3d normal = xtw * x;
    const Eigen::LDLT<Eigen::Matrix3d> ldlt(normal);
    if (ldlt.info() != Eigen::Success || std::abs(normal.determinant()) < 1e-300) {
        throw CalibrationError("planar fit is degenerate (grid spans a single line)");
    }
    const Eigen::Vector3d beta = ldlt.solve(xtw * y);
    const Eigen::VectorXd resid = y - x * beta;
    const double wsum = w.sum();
    const double ybar = w.dot(y) / wsum;
    const double ss_res = (w.array() * resid.array().square()).sum();
    const double ss_tot = (w.array() * (y.array() - ybar).square()).sum();

    // Weights are inverse variances; inflate by the reduced chi-square when
    // the plane misfits beyond counting noise.
    const double dof = static_cast<double>(n - 3);
    const double chi2_red = dof > 0 ? ss_res / dof : 1.0;
    const Eigen::Matrix3d cov = normal.inverse() * std::max(1.0, chi2_red);

    PlaneFit f;
    f.intercept = beta(0);
    f.grad1 = beta(1);
    f.grad2 = beta(2);
    f.sigma_grad1 = std::sqrt(cov(1, 1));
    f.sigma_grad2 = std::sqrt(cov(2, 2));
    f.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    f.points = rows.size();
    return f;
}

ContourCalibration fit_contour_angles(const LifetimeGrid& grid, double r2_min) {
    validate(grid);
    if (grid.axis1.size() < 6 || grid.axis2.size() < 6) {
        throw CalibrationError("contour fit needs at least 4x4 interior nodes (6 values per axis)");
    }
    const PlaneFit ap = fit_log_lifetime_plane(grid, StateLabel::AP);
    const PlaneFit p = fit_log_lifetime_plane(grid, StateLabel::P);
    for (const auto* f : {&ap, &p}) {
        if (f->r2 < r2_min) {
            throw CalibrationError("planar fit of log tau_" + std::string(f == &ap ? "AP" : "P") + " has R^2 = " +
                                   format_double(f->r2) + " < " + format_double(r2_min) +
                                   "; lifetime contours are not straight over this grid");
        }
        if (f->grad1 == 0.0 && f->grad2 == 0.0) {
            throw CalibrationError("log lifetime is flat over the grid; contour direction undefined");
        }
    }
    // Fold so that cos(alpha) >= 0 and sin(beta) >= 0: (0, pi/2) is the identity.
    double g1 = ap.grad1, g2 = ap.grad2;
    if (g1 < 0 || (g1 == 0 && g2 < 0)) g1 = -g1, g2 = -g2;
    const double alpha = std::atan2(g2, g1);
    g1 = p.grad1, g2 = p.grad2;
    if (g2 < 0 || (g2 == 0 && g1 < 0)) g1 = -g1, g2 = -g2;
    const double beta = std::atan2(g2, g1);
    return {BasisAngles(alpha, beta), ap, p};
}

CrossSensitivity cross_sensitivity(const PlaneFit& fit_ap, const PlaneFit& fit_p) {
    return {std::abs(fit_ap.grad2) / std::abs(fit_ap.grad1), std::abs(fit_p.grad1) / std::abs(fit_p.grad2)};
}

}  // namespace meneuron
