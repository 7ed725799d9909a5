#include <doctest.h>

#include "pfront/barrier.hpp"
#include "pfront/pipeline.hpp"

using namespace pfront;

TEST_CASE("glue function: quintic smoothstep bounds") {
    auto g = build_glue(4.0, 3.0, true);
    CHECK(g.h(-3.0) == 1.0);
    CHECK(g.h(-7.0) == 0.0);
    CHECK(g.hp(-3.0) == 0.0);
    CHECK(g.hp(-7.0) == 0.0);
    // max h' = 15/(8 xi_eps) at the midpoint
    CHECK(g.hp(-5.0) == doctest::Approx(0.46875).epsilon(1e-12));
    double max_slope = 0.0, max_curv = 0.0, integral = 0.0;
    const int n = 40000;
    const double dx = 4.0 / n;
    for (int i = 0; i <= n; ++i) {
        const double x = -7.0 + 4.0 * i / double(n);
        max_slope = std::max(max_slope, g.hp(x));
        max_curv = std::max(max_curv, std::abs(g.hpp(x)));
        integral += g.hp(x) * dx * (i == 0 || i == n ? 0.5 : 1.0);
    }
    CHECK(max_slope == doctest::Approx(15.0 / 32.0).epsilon(1e-6));
    CHECK(max_curv == doctest::Approx((10.0 * std::sqrt(3.0) / 3.0) / 16.0).epsilon(1e-6));
    CHECK(integral == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(max_slope <= 1.0);

    // xi_eps = 15/8 would give slope exactly 1; below 2 is rejected.
    CHECK_THROWS_AS(build_glue(1.9, 0.0), std::invalid_argument);
    CHECK(build_glue(2.0, 0.0).max_slope() <= 1.0);

    // Supersolution orientation: falls from 1 to 0 with -1 <= h' <= 0.
    auto gs = build_glue(4.0, 3.0, false);
    CHECK(gs.h(3.0) == 1.0);
    CHECK(gs.h(7.0) == 0.0);
    CHECK(gs.hp(5.0) == doctest::Approx(-0.46875).epsilon(1e-12));
}

namespace {

SpeedSweep homogeneous_plane_sweep(const ReactionModel& model, int angles) {
    CylinderGrid g;
    g.L = 40;
    g.n_xi = 2048;
    g.dim = 2;
    g.n_y = {1, 1};
    return sweep_directions(model, g, angles);
}

}  // namespace

TEST_CASE("derived constants: formulas on measured quantities") {
    auto model = make_cubic_medium(2, 0.3, {});
    auto sweep = homogeneous_plane_sweep(model, 8);

    auto spec = derive_constants(sweep, model, 0.05);
    CHECK(spec.delta == doctest::Approx(model.sigma() / 2.0));
    CHECK(spec.delta_eps == doctest::Approx(std::min(spec.delta, 0.05 * spec.k_min / (8.0 * model.lipschitz_L()))));
    CHECK(spec.delta_eps <= spec.delta);
    CHECK(spec.k_min > 1e-6);
    // Profile crosses 1 - delta left of -C and delta right of +C.
    const auto& P = sweep.profiles.front();
    const auto& grid = sweep.grid;
    for (int i = 0; i < grid.n_xi; ++i) {
        if (grid.xi(i) <= -spec.C) CHECK(P.at(i, 0) >= 1.0 - spec.delta - 1e-9);
        if (grid.xi(i) >= spec.C) CHECK(P.at(i, 0) <= spec.delta + 1e-9);
    }

    // delta_eps is monotone in eps until the delta cap.
    auto spec2 = derive_constants(sweep, model, 0.10);
    CHECK(spec2.delta_eps >= spec.delta_eps - 1e-15);

    // (N-1)/C_eps <= eps/4 with N = 2, eps = 0.1 forces C_eps >= 40.
    CHECK(spec2.C_eps >= 40.0 - 1e-9);

    // Glue bounds hold for the derived width.
    auto glue = build_glue(spec.xi_eps, spec.C, true);
    CHECK(spec.delta * glue.max_curvature() <= model.gamma() * spec.delta_eps / 3.0 + 1e-15);
}

TEST_CASE("exponential tail barrier: finite differences match the closed form") {
    auto model = make_cubic_medium(2, 0.3, {});
    ExpTailField tail;
    tail.dim = 2;
    tail.e = {1.0, 0.0};
    tail.c = 0.2828;
    tail.mu = std::sqrt(model.gamma());
    tail.A1 = 0.0;
    tail.amp = model.sigma();
    CheckRegion reg;
    reg.t0 = 0.0;
    reg.t1 = 4.0;
    reg.nt = 5;
    reg.r0 = -8.0;
    reg.r1 = 8.0;
    reg.nr = 160;
    reg.dx = 0.04;
    auto chk = exp_tail_check(tail, model.gamma(), reg);
    CHECK(chk.max_abs_error <= 1e-6);
    CHECK(chk.min_functional >= -1e-12);  // mu c omega >= 0 everywhere
}

TEST_CASE("one-dimensional subsolution: certificate, control, and comparison propagation") {
    auto model = make_cubic_medium(1, 0.3, {});
    CylinderGrid g;
    g.L = 40;
    g.n_xi = 2048;
    g.dim = 1;
    g.n_y = {1, 1};
    auto sweep = two_direction_sweep(model, g);
    const double eps = sweep.c_min() / 2.0;
    auto spec = derive_constants(sweep, model, eps);
    const double tol = calibrate_tol_disc(model, sweep.c_min(), sweep.entries.front().mu_plus, 1, g.h(), 1e-3);

    BarrierField sub(sweep, spec, BarrierKind::Subsolution);
    CHECK(sub.frame_speed() == doctest::Approx(spec.c_lo - eps / 2.0));

    // The zeta = const locus advances at exactly the frame speed.
    const double z0 = sub.zeta(spec.T, {30.0, 0.0});
    const double z1 = sub.zeta(spec.T + 7.0, {30.0 + 7.0 * sub.frame_speed(), 0.0});
    CHECK(z0 == doctest::Approx(z1).epsilon(1e-12));

    auto res = check_barrier_zones(sub, model, spec.T, spec.T + 20.0, g.h(), tol);
    CHECK(res.samples > 1000);
    CHECK(res.max_violation <= tol);

    // Sign-flip control: the flipped field must violate by >= 10x tol. Its
    // clamp never engages, so the tail window may extend past Cp_eps where
    // the violation saturates at ~theta * delta_eps.
    BarrierField flipped(sweep, spec, BarrierKind::Subsolution, true);
    auto bad = check_barrier_zones(flipped, model, spec.T, spec.T + 20.0, g.h(), tol, 20.0);
    CHECK(bad.max_violation >= 10.0 * tol);

    // Comparison propagation: evolve the t = T snapshot and keep it above
    // the advancing barrier for 200 steps. The window is a periodic-cell
    // translate centered on the moving front zone (the plateau and deep glue
    // far behind it are constant); x0 integer keeps the medium aligned.
    BoxGrid box;
    box.dim = 1;
    box.W = 300.0;
    box.n_b = int(2 * box.W * 8) + 1;  // h = 1/8
    const double x0 = std::round(spec.sub_shift(spec.T));
    CauchyState s(box, 0.0);
    for (int i = 0; i < box.n_b; ++i) s.u[i] = sub.value(spec.T, {x0 + box.coord(i), 0.0});
    const double dt = 0.05;
    ImexStepper st(box, model, dt);
    for (int q = 1; q <= 200; ++q) {
        st.step(s);
        const double t = spec.T + q * dt;
        double worst = 0.0;
        for (int i = 0; i < box.n_b; ++i)
            worst = std::max(worst, sub.value(t, {x0 + box.coord(i), 0.0}) - s.u[i]);
        CHECK(worst <= 1e-6);
    }
}

TEST_CASE("supersolution: certificate on its strip, rejected outside") {
    auto model = make_cubic_medium(1, 0.3, {});
    CylinderGrid g;
    g.L = 40;
    g.n_xi = 2048;
    g.dim = 1;
    g.n_y = {1, 1};
    auto sweep = two_direction_sweep(model, g);
    const double eps = sweep.c_min() / 2.0;
    auto spec = derive_constants(sweep, model, eps);
    const double tol = calibrate_tol_disc(model, sweep.c_min(), sweep.entries.front().mu_plus, 1, g.h(), 1e-3);

    BarrierField sup(sweep, spec, BarrierKind::Supersolution);
    CHECK_THROWS_AS(sup.value(spec.tau_eps - 1.0, {10.0, 0.0}), std::domain_error);
    CHECK_THROWS_AS(sup.value(spec.t_end + 1.0, {10.0, 0.0}), std::domain_error);

    auto res = check_barrier_zones(sup, model, spec.tau_eps + 0.01, spec.tau_eps + 20.0, g.h(), tol);
    CHECK(res.samples > 1000);
    CHECK(res.max_violation <= tol);

    // At the start time the clamp makes the field 1 well outside radius R.
    CHECK(sup.value(spec.tau_eps, {spec.R + spec.C_eps, 0.0}) == 1.0);
}
