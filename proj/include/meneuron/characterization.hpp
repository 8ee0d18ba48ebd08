#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "meneuron/config.hpp"
#include "meneuron/device.hpp"
#include "meneuron/integrator.hpp"
#include "meneuron/telegraph.hpp"

namespace meneuron {

enum class AxisKind : std::uint8_t { ME_I, V1_V2 };

std::string_view to_string(AxisKind k);

namespace cell_flags {
inline constexpr std::uint32_t kBudgetLimited = 1u << 0;  // fewer than min_dwells in a state
inline constexpr std::uint32_t kFailed = 1u << 1;  // a state had no completed dwell
inline constexpr std::uint32_t kOutsideWindow = 1u << 2;  // node maps outside the operating window
}  // namespace cell_flags

std::string flags_to_string(std::uint32_t flags);
std::uint32_t flags_from_string(std::string_view text);

struct GridCell {
    BiasPoint bias{};  // physical bias that was simulated
    LifetimeEstimate tau_p{StateLabel::P};
    LifetimeEstimate tau_ap{StateLabel::AP};
    std::uint32_t flags = 0;
    std::size_t trajectories = 0;
    double simulated_time = 0.0;  // s, summed over trajectories

    bool valid() const noexcept {
        return (flags & (cell_flags::kFailed | cell_flags::kOutsideWindow)) == 0;
    }
};

/// Change of drive variables (V1, V2) = M (V_ME, V_I) with rows
/// (cos alpha, sin alpha) and (cos beta, sin beta). alpha points along the
/// gradient of log tau_AP and beta along the gradient of log tau_P, i.e.
/// normal to the respective contour lines, so V1 steers tau_AP and V2 steers
/// tau_P.
class BasisAngles {
public:
    /// Throws CalibrationError when |sin(beta - alpha)| < 1e-3.
    BasisAngles(double alpha_basis, double beta_basis);

    static BasisAngles identity() { return {0.0, constants_half_pi()}; }

    double alpha_basis() const noexcept { return alpha_; }
    double beta_basis() const noexcept { return beta_; }
    /// Direction of the tau_AP / tau_P contour lines in the (V_ME, V_I) plane.
    double alpha_contour() const noexcept;
    double beta_contour() const noexcept;

    /// Row-major {m00, m01, m10, m11}.
    const std::array<double, 4>& matrix() const noexcept { return m_; }
    const std::array<double, 4>& inverse() const noexcept { return inv_; }

private:
    static double constants_half_pi();
    double alpha_;
    double beta_;
    std::array<double, 4> m_{};
    std::array<double, 4> inv_{};
};

struct TransformedBias {
    double v1 = 0.0;
    double v2 = 0.0;
};

TransformedBias basis_transform(const BiasPoint& bias, const BasisAngles& angles);
BiasPoint inverse_basis_transform(double v1, double v2, const BasisAngles& angles);

struct LifetimeGrid {
    AxisKind axis_kind = AxisKind::ME_I;
    std::vector<double> axis1;  // V_ME or V1
    std::vector<double> axis2;  // V_I or V2
    std::vector<GridCell> cells;  // row-major, axis1 index outermost
    std::uint64_t master_seed = 0;
    std::size_t min_dwells = 0;
    std::optional<BasisAngles> angles;  // set for V1_V2 grids

    const GridCell& at(std::size_t i, std::size_t j) const { return cells.at(i * axis2.size() + j); }
    GridCell& at(std::size_t i, std::size_t j) { return cells.at(i * axis2.size() + j); }
};

/// Throws ConfigError on empty or non-increasing axes or size mismatch.
void validate(const LifetimeGrid& g);

struct SweepOptions {
    SimConfig sim;  // dt and initial_m; sim.seed is the master seed
    double theta_on = 0.3;
    std::size_t min_dwells = 200;  // per state per cell
    std::size_t trajectories_per_cell = 1;
    double time_budget = 2e-5;  // simulated seconds per trajectory
    OperatingWindow window;
    int threads = 0;  // 0 = OpenMP default (OMP_NUM_THREADS)
    std::function<void(std::size_t done, std::size_t total)> progress;
};

SweepOptions sweep_options(const Config& c);

/// Dwell records of one trajectory run until every state has `min_per_state`
/// completed dwells or the simulated-time budget is used up.
struct DwellSample {
    std::vector<DwellRecord> dwells;
    double simulated_time = 0.0;
    bool budget_limited = false;
};

DwellSample sample_dwells(const BiasPoint& bias, const DeviceParams& p, const SimConfig& sim, double theta_on,
                          std::size_t min_per_state, double time_budget);

/// Lifetimes at one bias point; trajectory t of cell `cell_index` is seeded
/// with derive_seed(master, cell_index * trajectories_per_cell + t).
GridCell measure_cell(const BiasPoint& bias, const DeviceParams& p, const SweepOptions& opt,
                      std::size_t cell_index);

/// As measure_cell but also returns the pooled dwells.
GridCell measure_cell(const BiasPoint& bias, const DeviceParams& p, const SweepOptions& opt,
                      std::size_t cell_index, std::vector<DwellRecord>& dwells_out);

/// OpenMP sweep over (V_ME, V_I) nodes. Bit-identical to sweep_grid_serial
/// for any thread count. Throws ConfigError for nodes outside opt.window.
LifetimeGrid sweep_grid(std::span<const double> v_me_values, std::span<const double> v_i_values,
                        const DeviceParams& p, const SweepOptions& opt);

/// Single-threaded reference for sweep_grid.
LifetimeGrid sweep_grid_serial(std::span<const double> v_me_values, std::span<const double> v_i_values,
                               const DeviceParams& p, const SweepOptions& opt);

/// Sweep over (V1, V2); each node is simulated at its inverse-transformed
/// physical bias. Nodes mapping outside opt.window are flagged and skipped.
LifetimeGrid transformed_sweep(std::span<const double> v1_values, std::span<const double> v2_values,
                               const BasisAngles& angles, const DeviceParams& p, const SweepOptions& opt);

/// Largest window, symmetric about (0, 0), whose four edges and four corners
/// keep both mean lifetimes within [tau_min, tau_max]. Half-widths grow in
/// `step` increments up to `max_half_width` per axis.
OperatingWindow probe_operating_window(const DeviceParams& p, const SweepOptions& opt, double tau_min,
                                       double tau_max, double step, double max_half_width);

/// Partial derivatives of the mean lifetimes, s/V. For V1_V2 grids "me"
/// reads as axis 1 (V1) and "i" as axis 2 (V2).
struct KFactors {
    double k_ap_me = 0, k_ap_i = 0, k_p_me = 0, k_p_i = 0;
    double sigma_ap_me = 0, sigma_ap_i = 0, sigma_p_me = 0, sigma_p_i = 0;
};

/// Central differences at an interior node. Throws std::invalid_argument
/// if `at` is not a node, is on the boundary, or a neighbor is invalid.
KFactors k_factors(const LifetimeGrid& grid, const BiasPoint& at);

struct IndependenceRatios {
    // |k_ap_me/k_ap_i|, |k_p_i/k_p_me|, |k_ap_me/k_p_me|, |k_p_i/k_ap_i|
    std::array<double, 4> value{};
    std::array<bool, 4> infinite{};

    /// All four exceed `threshold` ("much greater than one").
    bool independent(double threshold) const noexcept;
};

IndependenceRatios independence_ratios(const KFactors& k);

struct DeltaTau {
    double dtau_ap = 0.0;
    double dtau_p = 0.0;
};

/// First-order change of both lifetimes for a bias displacement.
DeltaTau predict_delta_tau(const KFactors& k, double dv_me, double dv_i);

/// log tau = intercept + grad1 * axis1 + grad2 * axis2, weighted least
/// squares with weights count (the inverse variance of log of a mean of
/// exponential samples).
struct PlaneFit {
    double intercept = 0.0;
    double grad1 = 0.0;
    double grad2 = 0.0;
    double sigma_grad1 = 0.0;
    double sigma_grad2 = 0.0;
    double r2 = 0.0;
    std::size_t points = 0;
};

/// Uses valid cells only. Throws CalibrationError with fewer than 3 usable cells.
PlaneFit fit_log_lifetime_plane(const LifetimeGrid& grid, StateLabel state);

struct ContourCalibration {
    BasisAngles angles;
    PlaneFit fit_ap;
    PlaneFit fit_p;
};

/// Planar fits of log tau_AP and log tau_P, then basis angles from their
/// gradients. Needs >= 4x4 interior nodes (>= 6 values per axis). Throws
/// CalibrationError if either R^2 < r2_min or the gradients are parallel.
ContourCalibration fit_contour_angles(const LifetimeGrid& grid, double r2_min = 0.8);

/// Cross-sensitivities |d log tau_AP / d axis2| / |d log tau_AP / d axis1| and
/// |d log tau_P / d axis1| / |d log tau_P / d axis2|.
struct CrossSensitivity {
    double ap = 0.0;
    double p = 0.0;
};

CrossSensitivity cross_sensitivity(const PlaneFit& fit_ap, const PlaneFit& fit_p);

}  // namespace meneuron
