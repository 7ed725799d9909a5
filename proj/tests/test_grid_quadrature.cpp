#include <doctest.h>

#include <numbers>

#include "pfront/grid.hpp"

using namespace pfront;

namespace {

ProfileField field_of(const CylinderGrid& g, double (*fn)(double)) {
    ProfileField f(g);
    for (int i = 0; i < g.n_xi; ++i)
        for (int m = 0; m < g.slice_size(); ++m) f.at(i, m) = fn(g.xi(i));
    return f;
}

}  // namespace

TEST_CASE("grid invariants are enforced") {
    CylinderGrid g;
    g.L = 40;
    g.n_xi = 32;  // too few
    g.dim = 1;
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);
    g.n_xi = 128;  // h = 0.63 too coarse
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);
    g.n_xi = 512;
    g.n_y = {8, 1};  // between 1 and 16
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);
    g.n_y = {16, 1};
    CHECK_NOTHROW(g.validate());
}

TEST_CASE("half-line quadrature of exp(-2 xi) reaches 1e-6") {
    CylinderGrid g;
    g.L = 40;
    g.n_xi = 4001;  // h = 0.02, xi = 0 is a node
    g.dim = 1;
    g.n_y = {1, 1};
    auto f = field_of(g, +[](double x) { return std::exp(-2.0 * x); });
    const double exact = (1.0 - std::exp(-160.0)) / 2.0;  // integral over [0, 40]
    CHECK(cylinder_quadrature(f, 0.0) == doctest::Approx(exact).epsilon(1e-6));

    // Off-node cut point, integral over [0.3, 40].
    const double exact2 = (std::exp(-0.6) - std::exp(-160.0)) / 2.0;
    CHECK(cylinder_quadrature(f, 0.3) == doctest::Approx(exact2).epsilon(1e-6));
}

TEST_CASE("quadrature of the zero field is zero") {
    CylinderGrid g;
    g.L = 20;
    g.n_xi = 256;
    g.dim = 1;
    g.n_y = {16, 1};
    ProfileField z(g, 0.0);
    CHECK(cylinder_quadrature(z) == 0.0);
}

TEST_CASE("|U'|^2 of the sharp-interface profile integrates to sqrt(2)/12") {
    CylinderGrid g;
    g.L = 40;
    g.n_xi = 2048;
    g.dim = 1;
    g.n_y = {1, 1};
    auto f = field_of(g, +[](double x) {
        const double u = 1.0 / (1.0 + std::exp(x / std::numbers::sqrt2));
        return sq(u * (1.0 - u) / std::numbers::sqrt2);
    });
    CHECK(cylinder_quadrature(f) == doctest::Approx(std::numbers::sqrt2 / 12.0).epsilon(1e-4));
}

TEST_CASE("y-constant fields reduce to the 1-D trapezoid value") {
    CylinderGrid g;
    g.L = 10;
    g.n_xi = 128;
    g.dim = 2;
    g.n_y = {16, 16};
    ProfileField f(g);
    std::vector<double> line(g.n_xi);
    for (int i = 0; i < g.n_xi; ++i) {
        line[i] = std::sin(0.3 * g.xi(i)) + 1.5;
        for (int m = 0; m < g.slice_size(); ++m) f.at(i, m) = line[i];
    }
    // 1-D corrected trapezoid computed independently.
    const double h = g.h();
    double t = 0.0;
    for (int i = 0; i + 1 < g.n_xi; ++i) t += 0.5 * (line[i] + line[i + 1]) * h;
    auto d5 = [&](int i, int s) {
        return (-25.0 * line[i] + 48.0 * line[i + s] - 36.0 * line[i + 2 * s] + 16.0 * line[i + 3 * s] -
                3.0 * line[i + 4 * s]) / (12.0 * h) * (s > 0 ? 1.0 : -1.0);
    };
    t -= h * h / 12.0 * (d5(g.n_xi - 1, -1) - d5(0, +1));
    CHECK(cylinder_quadrature(f) == doctest::Approx(t).epsilon(1e-13));
}

TEST_CASE("quadrature window guard") {
    CylinderGrid g;
    g.L = 10;
    g.n_xi = 128;
    g.dim = 1;
    g.n_y = {1, 1};
    ProfileField f(g, 1.0);
    CHECK_THROWS_AS(cylinder_quadrature(f, 9.9), std::invalid_argument);
}
