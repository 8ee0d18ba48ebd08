#include <catch_amalgamated.hpp>

#include <numbers>
#include <random>

#include "meneuron/characterization.hpp"
#include "meneuron/errors.hpp"
#include "meneuron/stats.hpp"
#include "support.hpp"

using namespace meneuron;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

double flat(double, double) { return 1e-9; }

bool same_cells(const LifetimeGrid& a, const LifetimeGrid& b) {
    if (a.cells.size() != b.cells.size()) return false;
    for (std::size_t c = 0; c < a.cells.size(); ++c) {
        const auto& x = a.cells[c];
        const auto& y = b.cells[c];
        if (!(x.bias == y.bias) || x.flags != y.flags || x.simulated_time != y.simulated_time) return false;
        if (x.tau_p.mean != y.tau_p.mean || x.tau_ap.mean != y.tau_ap.mean) return false;
        if (x.tau_p.count != y.tau_p.count || x.tau_ap.count != y.tau_ap.count) return false;
        if (x.tau_p.ks_statistic != y.tau_p.ks_statistic) return false;
    }
    return true;
}

SweepOptions quick_options(std::size_t min_dwells) {
    SweepOptions opt = sweep_options(default_config());
    opt.min_dwells = min_dwells;
    return opt;
}

}  // namespace

TEST_CASE("k-factors on synthetic grids") {
    const auto axis = linspace(-0.5, 0.5, 21);  // spacing 0.05
    SECTION("exponential field matches its derivative within the truncation bound") {
        const double a = -5.0;
        const auto g = testing::synthetic_grid(axis, axis, flat, [&](double x, double) { return std::exp(a * x); });
        const KFactors k = k_factors(g, {0.1, 0.0});
        const double h = 0.05;
        const double exact = a * std::exp(a * 0.1);
        const double bound = h * h / 6.0 * std::pow(std::abs(a), 3) * std::exp(a * (0.1 - h));
        CHECK(std::abs(k.k_ap_me - exact) <= bound);
        CHECK(k.k_ap_i == 0.0);
        CHECK(k.sigma_ap_i >= 0.0);
        CHECK(std::abs(k.k_ap_i) <= k.sigma_ap_i);
        CHECK(k.sigma_ap_me > 0.0);
    }
    SECTION("saddle gives equal and opposite partials") {
        const auto g = testing::synthetic_grid(axis, axis, flat,
                                               [](double x, double y) { return 1e-9 * (1 + x * x - y * y); });
        const KFactors k = k_factors(g, {0.1, 0.1});
        CHECK_THAT(k.k_ap_me, WithinRel(-k.k_ap_i, 1e-9));
        CHECK(k.k_ap_me > 0);
    }
    SECTION("stderr propagation") {
        const auto g = testing::synthetic_grid(axis, axis, flat, flat, AxisKind::ME_I, 100);
        const KFactors k = k_factors(g, {0.0, 0.0});
        CHECK_THAT(k.sigma_p_me, WithinRel(std::sqrt(2.0) * 1e-10 / 0.1, 1e-12));
    }
    SECTION("rejects boundary and off-grid nodes") {
        const auto g = testing::synthetic_grid(axis, axis, flat, flat);
        CHECK_THROWS_AS(k_factors(g, {-0.5, 0.0}), std::invalid_argument);
        CHECK_THROWS_AS(k_factors(g, {0.0, 0.5}), std::invalid_argument);
        CHECK_THROWS_AS(k_factors(g, {0.01, 0.0}), std::invalid_argument);
    }
}

TEST_CASE("k-factor error converges at second order") {
    auto tau = [](double x, double y) { return 1e-9 * std::exp(-3.0 * x + 2.0 * y + x * y); };
    auto error = [&](double h) {
        std::vector<double> a;
        for (int i = -4; i <= 4; ++i) a.push_back(0.2 + i * h);
        const auto g = testing::synthetic_grid(a, a, tau, tau);
        const KFactors k = k_factors(g, {a[4], a[4]});
        const double x = a[4];
        return std::abs(k.k_p_me - (-3.0 + x) * tau(x, x));
    };
    const double r1 = error(0.1) / error(0.05);
    const double r2 = error(0.05) / error(0.025);
    CHECK_THAT(r1, WithinAbs(4.0, 1.0));
    CHECK_THAT(r2, WithinAbs(4.0, 1.0));
}

TEST_CASE("independence ratios") {
    KFactors k;
    k.k_ap_me = 1;
    k.k_ap_i = 0.01;
    k.k_p_me = 0.01;
    k.k_p_i = 1;
    const auto r = independence_ratios(k);
    for (double v : r.value) CHECK_THAT(v, WithinRel(100.0, 1e-12));
    CHECK(r.independent(5.0));
    for (bool inf : r.infinite) CHECK_FALSE(inf);

    k.k_ap_i = 0.0;
    const auto s = independence_ratios(k);
    CHECK(s.infinite[0]);
    CHECK(std::isinf(s.value[0]));
    CHECK(s.infinite[3]);
    CHECK_FALSE(s.infinite[1]);
}

TEST_CASE("linear lifetime prediction") {
    KFactors k;
    k.k_ap_me = -2e-9;
    k.k_ap_i = 0.5e-9;
    k.k_p_me = 0.3e-9;
    k.k_p_i = -1e-9;
    const auto z = predict_delta_tau(k, 0, 0);
    CHECK(z.dtau_ap == 0.0);
    CHECK(z.dtau_p == 0.0);
    const auto one = predict_delta_tau(k, 0.05, -0.02);
    const auto two = predict_delta_tau(k, 0.10, -0.04);
    CHECK_THAT(two.dtau_ap, WithinRel(2 * one.dtau_ap, 1e-14));
    CHECK_THAT(two.dtau_p, WithinRel(2 * one.dtau_p, 1e-14));
    CHECK_THAT(one.dtau_ap, WithinRel(-2e-9 * 0.05 + 0.5e-9 * -0.02, 1e-14));
}

TEST_CASE("basis transform") {
    SECTION("identity pair") {
        const BasisAngles id(0.0, std::numbers::pi / 2);
        for (double x : {-0.3, 0.0, 0.7}) {
            for (double y : {-1.1, 0.25}) {
                const auto t = basis_transform({x, y}, id);
                CHECK(t.v1 == x);
                CHECK(t.v2 == y);
                const auto b = inverse_basis_transform(x, y, id);
                CHECK(b.v_me == x);
                CHECK(b.v_i == y);
            }
        }
        CHECK(BasisAngles::identity().matrix() == id.matrix());
    }
    SECTION("worked example") {
        const BasisAngles a(std::numbers::pi / 6, 2 * std::numbers::pi / 3);
        const auto t = basis_transform({0.2, 0.1}, a);
        CHECK_THAT(t.v1, WithinAbs(0.2 * std::cos(30 * kDeg) + 0.1 * 0.5, 1e-15));
        CHECK_THAT(t.v1, WithinAbs(0.2232, 1e-4));
        CHECK_THAT(t.v2, WithinAbs(-0.0134, 1e-4));
    }
    SECTION("singular angles") {
        CHECK_THROWS_AS(BasisAngles(0.4, 0.4), CalibrationError);
        CHECK_THROWS_AS(BasisAngles(0.4, 0.4 + 5e-4), CalibrationError);
        CHECK_THROWS_AS(BasisAngles(0.4, 0.4 + std::numbers::pi), CalibrationError);
    }
    SECTION("round trip, inverse and linearity on random inputs") {
        std::mt19937_64 rng(17);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        double worst = 0.0;
        for (int i = 0; i < 10000; ++i) {
            const double alpha = u(rng) * std::numbers::pi;
            const double beta = alpha + (0.01 + 0.98 * (u(rng) + 1) / 2) * std::numbers::pi;
            const BasisAngles a(alpha, beta);
            const BiasPoint x{u(rng), u(rng)};
            const auto t = basis_transform(x, a);
            const auto back = inverse_basis_transform(t.v1, t.v2, a);
            worst = std::max({worst, std::abs(back.v_me - x.v_me), std::abs(back.v_i - x.v_i)});

            const auto& m = a.matrix();
            const auto& n = a.inverse();
            CHECK_THAT(m[0] * n[0] + m[1] * n[2], WithinAbs(1.0, 1e-10));
            CHECK_THAT(m[0] * n[1] + m[1] * n[3], WithinAbs(0.0, 1e-10));
            CHECK_THAT(m[2] * n[0] + m[3] * n[2], WithinAbs(0.0, 1e-10));
            CHECK_THAT(m[2] * n[1] + m[3] * n[3], WithinAbs(1.0, 1e-10));

            const BiasPoint w{u(rng), u(rng)};
            const double s = u(rng), r = u(rng);
            const auto lhs = basis_transform({s * x.v_me + r * w.v_me, s * x.v_i + r * w.v_i}, a);
            const auto tw = basis_transform(w, a);
            CHECK_THAT(lhs.v1, WithinAbs(s * t.v1 + r * tw.v1, 1e-15));
            CHECK_THAT(lhs.v2, WithinAbs(s * t.v2 + r * tw.v2, 1e-15));
        }
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("contour angle fitting") {
    const auto axis = linspace(-0.5, 0.5, 7);
    SECTION("planted gradients are recovered within one degree") {
        const auto g = testing::synthetic_grid(
            axis, axis, [](double x, double y) { return 1e-9 * std::exp(0.8 * x - 4.0 * y); },
            [](double x, double y) { return 1e-9 * std::exp(-5.0 * x + 0.5 * y); });
        const auto cal = fit_contour_angles(g);
        CHECK_THAT(cal.angles.alpha_contour(), WithinAbs(std::atan2(5.0, 0.5), 1 * kDeg));
        CHECK_THAT(cal.angles.alpha_basis(), WithinAbs(std::atan2(-0.5, 5.0), 1 * kDeg));
        CHECK_THAT(cal.angles.beta_basis(), WithinAbs(std::atan2(4.0, -0.8), 1 * kDeg));
        CHECK_THAT(cal.fit_ap.r2, WithinAbs(1.0, 1e-12));
        CHECK_THAT(cal.fit_ap.grad1, WithinAbs(-5.0, 1e-9));
        CHECK_THAT(cal.fit_p.grad2, WithinAbs(-4.0, 1e-9));
        const auto x = cross_sensitivity(cal.fit_ap, cal.fit_p);
        CHECK_THAT(x.ap, WithinRel(0.1, 1e-9));
        CHECK_THAT(x.p, WithinRel(0.2, 1e-9));
    }
    SECTION("field flat in V_I has contours parallel to the V_I axis") {
        const auto g = testing::synthetic_grid(axis, axis, [](double, double y) { return 1e-9 * std::exp(-2 * y); },
                                               [](double x, double) { return 1e-9 * std::exp(-3 * x); });
        const auto cal = fit_contour_angles(g);
        CHECK_THAT(cal.angles.alpha_basis(), WithinAbs(0.0, 1e-9));
        CHECK_THAT(std::abs(cal.angles.alpha_contour()), WithinAbs(std::numbers::pi / 2, 1e-9));
        CHECK_THAT(cal.angles.beta_basis(), WithinAbs(std::numbers::pi / 2, 1e-9));
    }
    SECTION("parallel gradients are degenerate") {
        auto f = [](double x, double y) { return 1e-9 * std::exp(-2 * x + y); };
        const auto g = testing::synthetic_grid(axis, axis, f, f);
        CHECK_THROWS_AS(fit_contour_angles(g), CalibrationError);
    }
    SECTION("curved fields fail the R^2 gate") {
        auto bumpy = [](double x, double y) { return 1e-9 * std::exp(std::cos(12 * x) + std::sin(12 * y)); };
        const auto g = testing::synthetic_grid(axis, axis, bumpy, bumpy);
        CHECK_THROWS_AS(fit_contour_angles(g, 0.8), CalibrationError);
    }
    SECTION("too few interior nodes") {
        const auto small = linspace(-0.5, 0.5, 5);
        const auto g = testing::synthetic_grid(small, small, flat, flat);
        CHECK_THROWS_AS(fit_contour_angles(g), CalibrationError);
    }
    SECTION("transformed synthetic grid is axis aligned") {
        auto tp = [](double x, double y) { return 1e-9 * std::exp(0.8 * x - 4.0 * y); };
        auto tap = [](double x, double y) { return 1e-9 * std::exp(-5.0 * x + 0.5 * y); };
        const auto cal = fit_contour_angles(testing::synthetic_grid(axis, axis, tp, tap));
        LifetimeGrid t = testing::synthetic_grid(
            axis, axis,
            [&](double v1, double v2) {
                const auto b = inverse_basis_transform(v1, v2, cal.angles);
                return tp(b.v_me, b.v_i);
            },
            [&](double v1, double v2) {
                const auto b = inverse_basis_transform(v1, v2, cal.angles);
                return tap(b.v_me, b.v_i);
            },
            AxisKind::V1_V2);
        const auto ap = fit_log_lifetime_plane(t, StateLabel::AP);
        const auto p = fit_log_lifetime_plane(t, StateLabel::P);
        CHECK(std::abs(ap.grad2) < 1e-9 * std::abs(ap.grad1));
        CHECK(std::abs(p.grad1) < 1e-9 * std::abs(p.grad2));
    }
}

TEST_CASE("cell flags") {
    using namespace cell_flags;
    for (std::uint32_t f : {0u, kBudgetLimited, kFailed | kBudgetLimited, kOutsideWindow}) {
        CHECK(flags_from_string(flags_to_string(f)) == f);
    }
    CHECK(flags_to_string(0) == "ok");
    CHECK_THROWS_AS(flags_from_string("weird"), ConfigError);
}

TEST_CASE("sweeps are deterministic across thread counts") {
    const DeviceParams p = testing::default_device();
    SweepOptions opt = quick_options(40);
    opt.trajectories_per_cell = 2;
    const std::vector<double> a1{-0.2, 0.2}, a2{-0.1, 0.0, 0.3};
    const LifetimeGrid ref = sweep_grid_serial(a1, a2, p, opt);
    for (int threads : {1, 2, 4}) {
        opt.threads = threads;
        CHECK(same_cells(ref, sweep_grid(a1, a2, p, opt)));
    }
    for (const auto& c : ref.cells) {
        CHECK(c.trajectories == 2);
        CHECK(c.tau_p.count >= 40);
    }
}

TEST_CASE("identity transformed sweep reproduces the physical sweep") {
    const DeviceParams p = testing::default_device();
    const SweepOptions opt = quick_options(30);
    const std::vector<double> a1{-0.2, 0.0, 0.2}, a2{-0.3, 0.1};
    const LifetimeGrid phys = sweep_grid(a1, a2, p, opt);
    const LifetimeGrid tr = transformed_sweep(a1, a2, BasisAngles::identity(), p, opt);
    CHECK(tr.axis_kind == AxisKind::V1_V2);
    CHECK(same_cells(phys, tr));

    // The origin is a fixed point of any basis.
    const std::vector<double> zero{0.0};
    const LifetimeGrid o1 = sweep_grid(zero, zero, p, opt);
    const LifetimeGrid o2 = transformed_sweep(zero, zero, BasisAngles(-0.4, 2.1), p, opt);
    CHECK(o1.cells[0].tau_p.mean == o2.cells[0].tau_p.mean);
    CHECK(o1.cells[0].tau_ap.mean == o2.cells[0].tau_ap.mean);
}

TEST_CASE("operating window handling") {
    const DeviceParams p = testing::default_device();
    SweepOptions opt = quick_options(20);
    opt.window = {-0.5, 0.5, -0.5, 0.5};
    const std::vector<double> inside{0.0}, outside{0.0, 0.8};
    CHECK_THROWS_AS(sweep_grid(outside, inside, p, opt), ConfigError);
    const std::vector<double> v{-0.6, 0.0};
    const LifetimeGrid t = transformed_sweep(v, inside, BasisAngles::identity(), p, opt);
    CHECK(t.cells[0].flags == cell_flags::kOutsideWindow);
    CHECK_FALSE(t.cells[0].valid());
    CHECK(t.cells[0].trajectories == 0);
    CHECK(t.cells[1].valid());
    const std::vector<double> bad{0.1, 0.0};
    CHECK_THROWS_AS(sweep_grid(bad, inside, p, opt), ConfigError);
}

TEST_CASE("budget-limited cells are flagged, not fatal") {
    const DeviceParams p = testing::default_device();
    SweepOptions opt = quick_options(200);
    opt.time_budget = 5e-9;
    const std::vector<double> a{0.0};
    const LifetimeGrid g = sweep_grid(a, a, p, opt);
    CHECK((g.cells[0].flags & cell_flags::kBudgetLimited) != 0);
    CHECK(g.cells[0].simulated_time <= 5e-9 * (1 + 1e-12));
}

TEST_CASE("lifetime trends along grid lines") {
    const DeviceParams p = testing::default_device();
    const SweepOptions opt = quick_options(200);
    const auto line = linspace(-0.6, 0.6, 7);
    const std::vector<double> zero{0.0};
    const LifetimeGrid along_me = sweep_grid(line, zero, p, opt);
    const LifetimeGrid along_i = sweep_grid(zero, line, p, opt);
    std::vector<double> tap, tp;
    for (const auto& c : along_me.cells) tap.push_back(c.tau_ap.mean);
    for (const auto& c : along_i.cells) tp.push_back(c.tau_p.mean);
    CHECK(stats::spearman(line, tap) < -0.9);
    CHECK(stats::spearman(line, tp) < -0.9);
}
