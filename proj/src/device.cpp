#include "meneuron/device.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "meneuron/constants.hpp"
#include "meneuron/errors.hpp"

namespace meneuron {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw ConfigError("invalid device parameter: " + what);
}

}  // namespace

void validate(const DeviceParams& p) {
    require(p.saturation_magnetization > 0, "saturation_magnetization must be > 0");
    require(p.volume > 0, "volume must be > 0");
    require(p.temperature > 0, "temperature must be > 0");
    require(p.me_thickness > 0, "me_thickness must be > 0");
    require(p.resistance_p > 0, "resistance_p must be > 0");
    require(p.tmr_ratio >= 0, "tmr_ratio must be >= 0");
    require(p.spin_polarization > 0 && p.spin_polarization <= 1,
            "spin_polarization must be in (0, 1]");
    require(p.damping_alpha > 0 && p.damping_alpha < 1, "damping_alpha must be in (0, 1)");
    require(std::isfinite(p.me_coefficient), "me_coefficient must be finite");
    const auto& n = p.demag_factors;
    for (double f : {n.x, n.y, n.z}) require(f >= 0 && f <= 1, "demag_factors must lie in [0, 1]");
    require(std::abs(n.x + n.y + n.z - 1.0) <= 1e-9, "demag_factors must sum to 1");
    require(n.z < n.y && n.y < n.x, "demag_factors must satisfy Nz < Ny < Nx (z easy axis)");
    require(p.polarizer_axis == Vector3{0.0, 0.0, 1.0}, "polarizer_axis is fixed at (0, 0, 1)");
}

double spin_count(const DeviceParams& p) {
    return p.saturation_magnetization * p.volume / constants::bohr_magneton;
}

Vector3 shape_anisotropy_field(const Vector3& m, const DeviceParams& p) {
    const double ms = p.saturation_magnetization;
    const auto& n = p.demag_factors;
    return {-ms * n.x * m.x, -ms * n.y * m.y, -ms * n.z * m.z};
}

Vector3 me_field(double v_me, const DeviceParams& p) {
    return {0.0, 0.0, p.me_coefficient * v_me / (constants::mu0 * p.me_thickness)};
}

double thermal_field_sigma(const DeviceParams& p, double dt) {
    if (!(dt > 0)) throw std::invalid_argument("thermal_field_sigma: dt must be > 0");
    const double num = 2.0 * p.damping_alpha * constants::boltzmann * p.temperature;
    const double den = constants::gamma * constants::mu0 * p.saturation_magnetization * p.volume * dt;
    return std::sqrt(num / den);
}

Vector3 thermal_field_sample(GaussianStream& noise, const DeviceParams& p, double dt) {
    const double sigma = thermal_field_sigma(p, dt);
    if (sigma == 0.0) return {};
    return noise.next3() * sigma;
}

double mtj_resistance(const Vector3& m, const DeviceParams& p) {
    const double cos_theta = dot(m, p.polarizer_axis);
    const double g_p = 1.0 / p.resistance_p;
    const double g_ap = 1.0 / (p.resistance_p * (1.0 + p.tmr_ratio));
    // cos^2(theta/2) = (1 + cos theta)/2
    const double g = g_p * 0.5 * (1.0 + cos_theta) + g_ap * 0.5 * (1.0 - cos_theta);
    return 1.0 / g;
}

Vector3 spin_current(const Vector3& m, double v_i, const DeviceParams& p) {
    const double magnitude = p.spin_polarization * v_i / mtj_resistance(m, p);
    return p.polarizer_axis * (-magnitude);
}

Vector3 llg_rhs(const Vector3& m, const BiasPoint& bias, const Vector3& h_thermal,
                const DeviceParams& p) {
    const double alpha = p.damping_alpha;
    const Vector3 h = shape_anisotropy_field(m, p) + me_field(bias.v_me, p) + h_thermal;
    const Vector3 is = spin_current(m, bias.v_i, p);
    const double stt_scale = 1.0 / (constants::elementary_charge * spin_count(p));

    // Gilbert form dm/dt = T + alpha m x dm/dt with T perpendicular to m
    // solves to dm/dt = (T + alpha m x T) / (1 + alpha^2).
    const Vector3 precession = -constants::gamma * cross(m, h);
    const Vector3 stt = stt_scale * cross(m, cross(is, m));
    const Vector3 torque = precession + stt;
    return (torque + alpha * cross(m, torque)) * (1.0 / (1.0 + alpha * alpha));
}

double barrier_height(const DeviceParams& p) {
    const double ms = p.saturation_magnetization;
    const double e_b = 0.5 * constants::mu0 * ms * ms * p.volume *
                       (p.demag_factors.y - p.demag_factors.z);
    return e_b / (constants::boltzmann * p.temperature);
}

double magnetic_energy(const Vector3& m, double v_me, const DeviceParams& p) {
    const double ms = p.saturation_magnetization;
    const auto& n = p.demag_factors;
    const double anis = 0.5 * constants::mu0 * ms * ms * p.volume *
                        (n.x * m.x * m.x + n.y * m.y * m.y + n.z * m.z * m.z);
    const double zeeman = -constants::mu0 * ms * p.volume * dot(me_field(v_me, p), m);
    return anis + zeeman;
}

LlgKernel::LlgKernel(const DeviceParams& p, const BiasPoint& bias)
    : gamma_(constants::gamma),
      alpha_(p.damping_alpha),
      inv_one_plus_alpha2_(1.0 / (1.0 + p.damping_alpha * p.damping_alpha)),
      field_x_(-p.saturation_magnetization * p.demag_factors.x),
      field_y_(-p.saturation_magnetization * p.demag_factors.y),
      field_z_(-p.saturation_magnetization * p.demag_factors.z),
      h_me_z_(me_field(bias.v_me, p).z),
      g_p_(1.0 / p.resistance_p),
      g_ap_(1.0 / (p.resistance_p * (1.0 + p.tmr_ratio))),
      is_scale_(-p.spin_polarization * bias.v_i /
                (constants::elementary_charge * spin_count(p))) {}

}  // namespace meneuron
