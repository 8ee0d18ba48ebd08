#pragma once

#include "meneuron/rng.hpp"
#include "meneuron/vector3.hpp"

namespace meneuron {

/// Free-layer macrospin and MTJ stack parameters, SI units. The pinned layer
/// points along +z so the parallel (P) state is mz ~ +1.
struct DeviceParams {
    double saturation_magnetization = 0.0;  // A/m
    double damping_alpha = 0.0;
    double volume = 0.0;  // m^3
    Vector3 demag_factors{};  // (Nx, Ny, Nz)
    double temperature = 0.0;  // K
    double me_coefficient = 0.0;  // s/m
    double me_thickness = 0.0;  // m
    double resistance_p = 0.0;  // Ohm
    double tmr_ratio = 0.0;  // R_AP = R_P (1 + TMR)
    double spin_polarization = 0.0;
    Vector3 polarizer_axis{0.0, 0.0, 1.0};
};

/// Throws ConfigError naming the first violated constraint.
void validate(const DeviceParams& p);

/// Voltages across the ME oxide and across the MTJ stack. Positive v_me
/// favors P, positive v_i favors AP.
struct BiasPoint {
    double v_me = 0.0;
    double v_i = 0.0;

    friend constexpr bool operator==(const BiasPoint&, const BiasPoint&) = default;
};

/// Number of Bohr magnetons in the free layer, Ms V / mu_B.
double spin_count(const DeviceParams& p);

Vector3 shape_anisotropy_field(const Vector3& m, const DeviceParams& p);
Vector3 me_field(double v_me, const DeviceParams& p);

/// Standard deviation of each thermal-field component for a step of length dt.
/// Throws std::invalid_argument for dt <= 0.
double thermal_field_sigma(const DeviceParams& p, double dt);
Vector3 thermal_field_sample(GaussianStream& noise, const DeviceParams& p, double dt);

double mtj_resistance(const Vector3& m, const DeviceParams& p);
Vector3 spin_current(const Vector3& m, double v_i, const DeviceParams& p);

/// Explicit (Landau-Lifshitz) form of the Gilbert equation with the
/// Slonczewski term. h_thermal is added to the deterministic field.
Vector3 llg_rhs(const Vector3& m, const BiasPoint& bias, const Vector3& h_thermal,
                const DeviceParams& p);

/// Hard-axis escape barrier of the macrospin double well in units of kB T.
double barrier_height(const DeviceParams& p);

/// Anisotropy plus ME Zeeman energy in joules.
double magnetic_energy(const Vector3& m, double v_me, const DeviceParams& p);

/// Constants of llg_rhs folded once per (params, bias) so the integrator's
/// inner loop does no divisions. Matches llg_rhs to rounding.
class LlgKernel {
public:
    LlgKernel(const DeviceParams& p, const BiasPoint& bias);

    Vector3 rhs(const Vector3& m, const Vector3& h_thermal) const noexcept {
        Vector3 h{field_x_ * m.x, field_y_ * m.y, field_z_ * m.z + h_me_z_};
        h += h_thermal;
        // Spin torque: I_s is along the polarizer (z), magnitude set by the
        // angle-dependent conductance.
        const double cos_theta = m.z;
        const double g = g_p_ * 0.5 * (1.0 + cos_theta) + g_ap_ * 0.5 * (1.0 - cos_theta);
        const double is_z = is_scale_ * g;  // already divided by q N_s
        const Vector3 mxh = cross(m, h);
        const Vector3 torque{-gamma_ * mxh.x - is_z * m.z * m.x,
                             -gamma_ * mxh.y - is_z * m.z * m.y,
                             -gamma_ * mxh.z + is_z * (m.x * m.x + m.y * m.y)};
        const Vector3 mxt = cross(m, torque);
        return (torque + alpha_ * mxt) * inv_one_plus_alpha2_;
    }

private:
    double gamma_;
    double alpha_;
    double inv_one_plus_alpha2_;
    double field_x_, field_y_, field_z_;
    double h_me_z_;
    double g_p_, g_ap_;
    double is_scale_;
};

}  // namespace meneuron
