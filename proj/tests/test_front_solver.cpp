#include <doctest.h>

#include <numbers>

#include "pfront/front_solver.hpp"
#include "pfront/operators.hpp"

using namespace pfront;

namespace {

const double kSqrt2 = std::numbers::sqrt2;
const double kCExact = (1.0 - 0.6) / kSqrt2;                 // 0.2828427...
const double kGradMass = kSqrt2 / 12.0;                      // integral of |U'|^2
double logistic(double xi) { return 1.0 / (1.0 + std::exp(xi / kSqrt2)); }

CylinderGrid line_grid(double L, int n_xi, int n_y = 1) {
    CylinderGrid g;
    g.L = L;
    g.n_xi = n_xi;
    g.dim = 1;
    g.n_y = {n_y, 1};
    return g;
}

// Oracle for the normalization shift of the closed-form profile: quadrature
// plus bisection on the analytic integrand, independent of the library path.
double normalization_shift_oracle() {
    auto halfmass = [](double tau) {
        // integral over [tau, 60] of logistic^2 by composite Simpson
        const int n = 20000;
        const double a = tau, b = 60.0, h = (b - a) / n;
        double s = sq(logistic(a)) + sq(logistic(b));
        for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * sq(logistic(a + i * h));
        return s * h / 3.0;
    };
    double lo = -40.0, hi = 40.0;
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (halfmass(mid) - 1.0 >= 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("homogeneous line front: closed-form speed and profile") {
    auto model = make_cubic_medium(1, 0.3, {});
    auto f = solve_front(model, {1.0, 0.0}, line_grid(40, 2048));
    CHECK(std::abs(f.c - kCExact) <= 1e-3);
    CHECK(f.residual_norm <= 1e-8 * (1.0 + std::abs(f.c)));

    // sup-error against the closed form after phase alignment at u = 1/2
    const auto& g = f.profile.grid;
    double xi_half = 0.0;
    for (int i = 0; i + 1 < g.n_xi; ++i)
        if (f.profile.at(i, 0) >= 0.5 && f.profile.at(i + 1, 0) < 0.5) {
            const double a = f.profile.at(i, 0), b = f.profile.at(i + 1, 0);
            xi_half = g.xi(i) + g.h() * (a - 0.5) / (a - b);
        }
    double sup = 0.0;
    for (int i = 0; i < g.n_xi; ++i) sup = std::max(sup, std::abs(f.profile.at(i, 0) - logistic(g.xi(i) - xi_half)));
    CHECK(sup <= 1e-3);
}

TEST_CASE("discrete kernel: the linearization nearly annihilates d_xi U") {
    auto model = make_cubic_medium(1, 0.3, {{{1, 0}, 0.1, 0.0}});
    auto grid = line_grid(30, 1024, 16);
    auto f = solve_front(model, {1.0, 0.0}, grid);
    auto J = assemble_linearization(grid, model, {1.0, 0.0}, f.c, f.profile);
    const int n = grid.n_xi - 2, M = grid.slice_size();
    std::vector<double> v(std::size_t(n) * M), w;
    for (int i = 0; i < n; ++i)
        for (int m = 0; m < M; ++m) v[std::size_t(i) * M + m] = J.dc_column.at(i + 1, m);
    J.matvec(v, w);
    double r = 0.0;
    for (double x : w) r = std::max(r, std::abs(x));
    CHECK(r <= 1e-4);
}

TEST_CASE("balanced medium: standing wave with near-zero speed, after a warning") {
    auto model = make_cubic_medium(1, 0.5, {});
    auto f = solve_front(model, {1.0, 0.0}, line_grid(40, 1024));
    CHECK(!f.warnings.empty());
    CHECK(std::abs(f.c) <= 1e-6);
}

TEST_CASE("striped medium: self-convergence of the speed under refinement") {
    auto model = make_cubic_medium(1, 0.3, {{{1, 0}, 0.1, 0.0}});
    auto f1 = solve_front(model, {1.0, 0.0}, line_grid(40, 1024, 16));
    auto f2 = solve_front(model, {1.0, 0.0}, line_grid(40, 2048, 16));
    CHECK(f1.c > 0.0);
    CHECK(std::abs(f1.c - f2.c) <= 1e-3);
}

TEST_CASE("speed sign follows the mass integral on both sides") {
    for (double th0 : {0.25, 0.42, 0.58, 0.75}) {
        auto model = make_cubic_medium(1, th0, {{{1, 0}, 0.05, 0.7}});
        auto f = solve_front(model, {1.0, 0.0}, line_grid(30, 512, 16));
        const double mass = model.mass_integral();
        CHECK(mass * f.c > 0.0);
        CHECK(profile_monotone(f.profile));
    }
}

TEST_CASE("normalization: fixed point, oracle shift, grid-aligned equivariance") {
    auto model = make_cubic_medium(1, 0.3, {});
    auto grid = line_grid(40, 2001);  // h = 0.04 so a shift of 2 is 50 nodes

    PulsatingFront f;
    f.e = {1.0, 0.0};
    f.c = kCExact;
    f.profile = logistic_profile(grid);
    auto n1 = shift_to_normalization(f);
    CHECK(std::abs(n1.tau - normalization_shift_oracle()) <= 1e-6);
    CHECK(cylinder_quadrature_product(n1.front.profile, n1.front.profile, 0.0) ==
          doctest::Approx(1.0).epsilon(1e-8));

    // Normalizing again is a fixed point.
    auto n2 = shift_to_normalization(n1.front);
    CHECK(std::abs(n2.tau) <= 1e-8);

    // Shifting the input argument by +2 (grid-aligned) changes tau by -2.
    PulsatingFront fs = f;
    fs.profile = logistic_profile(grid, -2.0);  // input(xi) = U(xi + 2)
    auto n3 = shift_to_normalization(fs);
    CHECK(std::abs((n3.tau - n1.tau) - (-2.0)) <= 1e-8);

    // Too-short grid: the target is unreachable.
    PulsatingFront tiny;
    tiny.e = {1.0, 0.0};
    tiny.c = kCExact;
    tiny.profile = ProfileField(line_grid(8, 64), 0.0);
    for (int i = 0; i < 64; ++i) tiny.profile.at(i, 0) = 0.1 * logistic(tiny.profile.grid.xi(i));
    CHECK_THROWS_AS(shift_to_normalization(tiny), TargetUnreachable);
}

TEST_CASE("speed/mass identity") {
    // Closed forms: c * integral |U'|^2 = (1 - 2 theta)/12 exactly.
    CHECK(std::abs(0.2828427124746190 * 0.1178511301977579 - 1.0 / 30.0) <= 1e-6 / 30.0);
    CHECK(kCExact * kGradMass == doctest::Approx(1.0 / 30.0).epsilon(1e-14));

    auto model = make_cubic_medium(1, 0.3, {});
    auto f = solve_front(model, {1.0, 0.0}, line_grid(40, 2048));
    CHECK(speed_identity_residual(f, model) <= 1e-4);

    // Halving h reduces the residual by at least 3x (second order).
    auto f2 = solve_front(model, {1.0, 0.0}, line_grid(40, 4096));
    CHECK(speed_identity_residual(f, model) / speed_identity_residual(f2, model) >= 3.0);

    // Balanced medium: both sides vanish.
    auto m5 = make_cubic_medium(1, 0.5, {});
    auto s = solve_front(m5, {1.0, 0.0}, line_grid(40, 1024));
    const auto& g = s.profile.grid;
    double I = 0.0;
    for (int i = 1; i < g.n_xi - 1; ++i)
        I += g.h() * sq((s.profile.at(i + 1, 0) - s.profile.at(i - 1, 0)) / (2.0 * g.h()));
    CHECK(std::abs(s.c * I - m5.mass_integral()) <= 1e-6);
}

TEST_CASE("decay rates: theta-independent 1/sqrt(2), bounded below by sqrt(gamma)") {
    for (double th0 : {0.25, 0.3, 0.35}) {
        auto model = make_cubic_medium(1, th0, {});
        auto f = solve_front(model, {1.0, 0.0}, line_grid(40, 2048));
        auto d = fit_decay(f, model);
        CHECK(std::abs(d.mu_plus - 1.0 / kSqrt2) <= 0.02 / kSqrt2);
        CHECK(std::abs(d.mu_minus - 1.0 / kSqrt2) <= 0.02 / kSqrt2);
        // The bound sqrt(gamma) - 0.02 is strictly below the observed rate.
        CHECK(std::sqrt(model.gamma()) - 0.02 < d.mu_plus);
        // Characteristic-root oracle: mu+ = [c + sqrt(c^2 + 4 theta)]/2.
        const double c = f.c;
        const double oracle = (c + std::sqrt(c * c + 4.0 * th0)) / 2.0;
        CHECK(d.mu_plus == doctest::Approx(oracle).epsilon(0.02));
    }
}

TEST_CASE("reflection: mirrored direction swaps the fitted rates") {
    auto model = make_cubic_medium(1, 0.3, {});
    auto grid = line_grid(40, 2048);
    auto fp = solve_front(model, {1.0, 0.0}, grid);
    auto fm = solve_front(model, {-1.0, 0.0}, grid);
    auto dp = fit_decay(fp, model);
    auto dm = fit_decay(fm, model);
    CHECK(dp.mu_plus == doctest::Approx(dm.mu_minus).epsilon(0.01));
    CHECK(dp.mu_minus == doctest::Approx(dm.mu_plus).epsilon(0.01));
}

TEST_CASE("decay fit demands a long enough window") {
    auto model = make_cubic_medium(1, 0.3, {});
    auto f = solve_front(model, {1.0, 0.0}, line_grid(12, 128));  // tails leave the grid
    CHECK_THROWS_AS(fit_decay(f, model), WindowTooShort);
}
