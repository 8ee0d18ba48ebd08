#include <catch_amalgamated.hpp>

#include <numbers>

#include "meneuron/constants.hpp"
#include "meneuron/errors.hpp"
#include "meneuron/integrator.hpp"
#include "meneuron/stats.hpp"
#include "meneuron/telegraph.hpp"
#include "support.hpp"

using namespace meneuron;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

DeviceParams cold_device() {
    DeviceParams p = testing::default_device();
    p.temperature = 0.0;
    return p;
}

}  // namespace

TEST_CASE("equilibrium is a fixed point at T = 0") {
    const DeviceParams p = cold_device();
    GaussianStream noise(1);
    Vector3 m{0, 0, 1};
    for (int i = 0; i < 1000; ++i) m = heun_step(m, {0, 0}, 1e-13, noise, p);
    CHECK_THAT(m.x, WithinAbs(0.0, 1e-12));
    CHECK_THAT(m.y, WithinAbs(0.0, 1e-12));
    CHECK_THAT(m.z, WithinAbs(1.0, 1e-12));
}

TEST_CASE("undamped precession conserves energy and mz at small tilt") {
    DeviceParams p = cold_device();
    p.damping_alpha = 0.0;
    SimConfig sc;
    sc.dt = 1e-13;
    sc.t_max = 1e-8;  // 1e5 steps
    const double tilt = 1e-3;
    sc.initial_m = {0.0, std::sin(tilt), std::cos(tilt)};
    const double e0 = magnetic_energy(sc.initial_m, 0.0, p);
    const double mz0 = sc.initial_m.z;
    double worst_e = 0.0, worst_mz = 0.0;
    const long long steps = integrate(sc, {0, 0}, p, [&](long long, const Vector3& m) {
        worst_e = std::max(worst_e, std::abs(magnetic_energy(m, 0.0, p) - e0));
        worst_mz = std::max(worst_mz, std::abs(std::abs(m.z) - mz0));
        return true;
    });
    CHECK(steps == 100000);
    CHECK(worst_mz < 1e-6);
    CHECK(worst_e < 1e-6 * std::abs(e0));
}

TEST_CASE("damped relaxation to the nearer well") {
    const DeviceParams p = cold_device();
    SimConfig sc;
    sc.dt = 1e-13;
    sc.t_max = 5e-8;
    sc.initial_m = normalized(Vector3{0.2, 0.1, 0.97});
    Vector3 last{};
    integrate(sc, {0, 0}, p, [&](long long, const Vector3& m) {
        last = m;
        return true;
    });
    CHECK(std::hypot(last.x, last.y) < 1e-6);
    CHECK(last.z > 0.999999);
}

TEST_CASE("energy is nonincreasing at T = 0 without spin current") {
    const DeviceParams p = cold_device();
    SimConfig sc;
    sc.dt = 1e-13;
    sc.t_max = 5e-9;
    sc.initial_m = normalized(Vector3{0.7, 0.3, -0.4});
    for (double vme : {0.0, 0.3, -0.5}) {
        double prev = magnetic_energy(sc.initial_m, vme, p);
        bool monotone = true;
        integrate(sc, {vme, 0.0}, p, [&](long long, const Vector3& m) {
            const double e = magnetic_energy(m, vme, p);
            monotone = monotone && e <= prev + 1e-10 * std::abs(prev);
            prev = e;
            return true;
        });
        CHECK(monotone);
    }
}

TEST_CASE("trajectories are deterministic and normalized") {
    const DeviceParams p = testing::default_device();
    SimConfig sc;
    sc.t_max = 2e-8;
    sc.seed = 77;
    const Trajectory a = run_trajectory(sc, {0.1, -0.2}, p);
    const Trajectory b = run_trajectory(sc, {0.1, -0.2}, p);
    sc.seed = 78;
    const Trajectory c = run_trajectory(sc, {0.1, -0.2}, p);
    REQUIRE(a.samples.size() == b.samples.size());
    bool same = true, differs = false;
    double worst = 0.0;
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        same = same && a.samples[i].m == b.samples[i].m && a.samples[i].time == b.samples[i].time;
        differs = differs || a.samples[i].m.z != c.samples[i].m.z;
        worst = std::max(worst, std::abs(norm(a.samples[i].m) - 1.0));
    }
    CHECK(same);
    CHECK(differs);
    CHECK(worst < 1e-9);
    CHECK(a.dt_effective == sc.dt);
}

TEST_CASE("record stride and times") {
    const DeviceParams p = testing::default_device();
    SimConfig sc;
    sc.t_max = 1e-10;
    sc.record_stride = 10;
    const Trajectory t = run_trajectory(sc, {0, 0}, p);
    REQUIRE(t.samples.size() == 101);
    CHECK(t.dt_effective == 1e-12);
    for (std::size_t i = 1; i < t.samples.size(); ++i) CHECK(t.samples[i].time > t.samples[i - 1].time);
}

TEST_CASE("stepper and free heun_step agree") {
    const DeviceParams p = testing::default_device();
    HeunStepper s(p, {0.2, 0.1}, 1e-13, 5);
    GaussianStream noise(5);
    Vector3 a{0, 0, 1}, b{0, 0, 1};
    for (int k = 1; k <= 1000; ++k) {
        s.step(a, k);
        b = heun_step(b, {0.2, 0.1}, 1e-13, noise, p);
    }
    CHECK(norm(a - b) < 1e-12);
}

TEST_CASE("zero-bias telegraph switching") {
    const DeviceParams p = testing::default_device();
    SimConfig sc;
    sc.t_max = 1e-5;
    sc.seed = 2024;
    sc.record_stride = 1000;
    sc.stop_after_transitions = 100;
    TelegraphDetector det(0.3, sc.dt);
    const Trajectory t = run_trajectory(sc, {0, 0}, p, &det);
    CHECK(det.transitions() >= 100);
    CHECK(t.samples.back().time < 1e-5);
}

TEST_CASE("coarse dt diverges with the failing step") {
    const DeviceParams p = testing::default_device();
    SimConfig sc;
    sc.dt = 1e-10;
    sc.t_max = 1e-8;
    try {
        run_trajectory(sc, {0, 0}, p);
        FAIL("expected NumericalError");
    } catch (const NumericalError& e) {
        CHECK(e.step() == 1);
        CHECK(std::string(e.what()).find("step 1") != std::string::npos);
    }
}

TEST_CASE("small-angle precession frequency") {
    const DeviceParams p = testing::default_device();
    CHECK(precession_frequency_check(p, 1e-13) < 0.01);
    const double coarse = precession_frequency_check(p, 2e-12);
    const double fine = precession_frequency_check(p, 1e-12);
    CHECK(fine < coarse);

    DeviceParams q = p;
    q.damping_alpha = 0.01;
    CHECK(precession_frequency_check(q, 1e-13) < 0.01);

    q.damping_alpha = 1e-9;
    const double ms = q.saturation_magnetization;
    const auto& n = q.demag_factors;
    const double kittel = constants::gamma / (2 * std::numbers::pi) * ms * std::sqrt((n.x - n.z) * (n.y - n.z));
    CHECK_THAT(analytic_fmr_frequency(q), WithinRel(kittel, 1e-15));
    // alpha = 0.2 lowers it by ~6.6% beyond the 1/(1 + alpha^2) factor.
    const double ratio = analytic_fmr_frequency(p) * (1 + 0.04) / kittel;
    CHECK_THAT(ratio, WithinAbs(0.934, 0.002));
    q.damping_alpha = 5.0;
    CHECK_THROWS_AS(analytic_fmr_frequency(q), std::invalid_argument);
}

TEST_CASE("equilibrium statistics follow the Boltzmann distribution") {
    const DeviceParams p = testing::default_device();
    SimConfig sc;
    sc.t_max = 4e-6;
    sc.seed = 99;
    std::vector<double> mz, my2;
    const long long thin = 2000;  // 200 ps, longer than the in-well relaxation time
    integrate(sc, {0, 0}, p, [&](long long k, const Vector3& m) {
        if (k > 0 && k % thin == 0) {
            mz.push_back(m.z);
            my2.push_back(m.y * m.y);
        }
        return true;
    });

    std::vector<double> up, down;
    for (double z : mz) (z > 0 ? up : down).push_back(std::abs(z));
    const auto ks = stats::ks_two_sample(up, down);
    INFO("up " << up.size() << " down " << down.size() << " D " << ks.statistic);
    CHECK(ks.pvalue > 0.01);

    // <mz^2> and <my^2> by quadrature over the sphere of exp(-E/kT).
    const double kt = constants::boltzmann * p.temperature;
    double z0 = 0, zz = 0, yy = 0;
    const int nt = 800, np = 1600;
    for (int i = 0; i < nt; ++i) {
        const double th = (i + 0.5) * std::numbers::pi / nt;
        for (int j = 0; j < np; ++j) {
            const double ph = (j + 0.5) * 2 * std::numbers::pi / np;
            const Vector3 m{std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)};
            const double w = std::exp(-magnetic_energy(m, 0.0, p) / kt) * std::sin(th);
            z0 += w;
            zz += w * m.z * m.z;
            yy += w * m.y * m.y;
        }
    }
    std::vector<double> mz2;
    for (double z : mz) mz2.push_back(z * z);
    CHECK_THAT(stats::mean(mz2), WithinRel(zz / z0, 0.02));
    CHECK_THAT(stats::mean(my2), WithinRel(yy / z0, 0.05));
}
