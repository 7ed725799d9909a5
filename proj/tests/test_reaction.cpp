#include <doctest.h>

#include <random>

#include "pfront/reaction.hpp"

using namespace pfront;

namespace {

ReactionModel random_medium(std::mt19937& rng) {
    std::uniform_real_distribution<double> th0(0.15, 0.85);
    std::uniform_real_distribution<double> amp(0.02, 0.08);
    std::uniform_real_distribution<double> ph(0.0, 6.28);
    std::uniform_int_distribution<int> nk(0, 2);
    for (;;) {
        double t0 = th0(rng);
        if (std::abs(t0 - 0.5) < 0.03) continue;  // keep the mass integral away from zero
        std::vector<ThetaMode> modes;
        const int n = nk(rng);
        for (int i = 0; i < n; ++i) modes.push_back({{1 + i, 0}, amp(rng), ph(rng)});
        try {
            return make_cubic_medium(1, t0, modes);
        } catch (const std::invalid_argument&) {
        }
    }
}

}  // namespace

TEST_CASE("cubic medium: roots and pointwise values") {
    auto m3 = make_cubic_medium(1, 0.3, {});
    CHECK(m3.f({0.0, 0.0}, 0.5) == doctest::Approx(0.05).epsilon(1e-12));  // 0.5*0.5*0.2
    CHECK(m3.f({0.37, 0.0}, 0.0) == 0.0);
    CHECK(m3.f({0.12, 0.0}, 1.0) == 0.0);
    CHECK(m3.f({0.9, 0.0}, 0.3) == doctest::Approx(0.0).epsilon(1e-15));

    // theta0 = 0.5 is odd about 1/2.
    auto m5 = make_cubic_medium(1, 0.5, {});
    for (double d : {0.1, 0.23, 0.4})
        CHECK(m5.f({0.0, 0.0}, 0.5 + d) == doctest::Approx(-m5.f({0.0, 0.0}, 0.5 - d)).epsilon(1e-13));

    // f_u(x, 0) = -theta, so the stability rate cannot exceed 0.3 here.
    CHECK(m3.fu({0.0, 0.0}, 0.0) == doctest::Approx(-0.3).epsilon(1e-13));
    CHECK(m3.gamma() <= 0.3);
    CHECK(m3.gamma() > 0.0);
    CHECK(m3.sigma() > 0.0);
    CHECK(m3.sigma() < 0.5);
}

TEST_CASE("theta field range for a single cosine mode") {
    auto m = make_cubic_medium(1, 0.3, {{{1, 0}, 0.1, 0.0}});
    CHECK(m.theta_min() == doctest::Approx(0.2).epsilon(1e-9));
    CHECK(m.theta_max() == doctest::Approx(0.4).epsilon(1e-9));
    // sigma < theta_x < 1 - sigma everywhere
    CHECK(m.sigma() < m.theta_min());
    CHECK(m.theta_max() < 1.0 - m.sigma());
}

TEST_CASE("inadmissible media are rejected") {
    CHECK_THROWS_AS(make_cubic_medium(1, 0.3, {{{1, 0}, 0.3, 0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(make_cubic_medium(1, 0.02, {}), std::invalid_argument);
    CHECK_THROWS_AS(make_cubic_medium(3, 0.3, {}), std::invalid_argument);
}

TEST_CASE("mass integral closed forms") {
    CHECK(std::abs(make_cubic_medium(1, 0.5, {}).mass_integral()) <= 1e-12);
    CHECK(make_cubic_medium(1, 0.3, {}).mass_integral() == doctest::Approx(1.0 / 30.0).epsilon(1e-10));
    // The cosine averages out of the x-integral.
    auto striped = make_cubic_medium(1, 0.3, {{{1, 0}, 0.1, 0.0}});
    CHECK(striped.mass_integral() == doctest::Approx(1.0 / 30.0).epsilon(1e-10));
    auto two = make_cubic_medium(2, 0.3, {{{1, 0}, 0.08, 0.0}, {{0, 1}, 0.05, 0.0}});
    CHECK(two.mass_integral() == doctest::Approx(1.0 / 30.0).epsilon(1e-10));
}

TEST_CASE("mass integral sign tracks the mean of theta") {
    std::mt19937 rng(12345);
    for (int i = 0; i < 20; ++i) {
        auto m = random_medium(rng);
        const double mass = m.mass_integral();
        if (m.theta_mean() < 0.5) CHECK(mass > 0.0);
        if (m.theta_mean() > 0.5) CHECK(mass < 0.0);
    }
}

TEST_CASE("f_u matches a central difference of f, including the extension") {
    std::mt19937 rng(777);
    std::uniform_real_distribution<double> ux(-0.5, 2.0), xx(0.0, 1.0);
    auto m = make_cubic_medium(1, 0.35, {{{1, 0}, 0.06, 1.1}});
    const double d = 2e-6;
    for (int i = 0; i < 1000; ++i) {
        const Vec2 x{xx(rng), 0.0};
        const double u = ux(rng) * 1.5 - 0.25;  // covers tails and blends
        const double fd = (m.f(x, u + d) - m.f(x, u - d)) / (2.0 * d);
        CHECK(std::abs(m.fu(x, u) - fd) <= 1e-8 * (1.0 + std::abs(fd)));
    }
}

TEST_CASE("f_uu matches a central difference of f_u") {
    auto m = make_cubic_medium(1, 0.3, {});
    const double d = 2e-6;
    for (double u : {-0.2, -0.12, 0.1, 0.5, 0.9, 1.12, 1.2}) {
        const double fd = (m.fu({0.1, 0.0}, u + d) - m.fu({0.1, 0.0}, u - d)) / (2.0 * d);
        CHECK(std::abs(m.fuu({0.1, 0.0}, u) - fd) <= 1e-5 * (1.0 + std::abs(fd)));
    }
}

TEST_CASE("stability strips: -f_u >= gamma on [0,sigma] and [1-sigma,1]") {
    for (auto theta0 : {0.25, 0.3, 0.4}) {
        auto m = make_cubic_medium(1, theta0, {{{2, 0}, 0.04, 0.4}});
        double worst = 1e300;
        for (int ix = 0; ix < 257; ++ix) {
            const Vec2 x{ix / 257.0, 0.0};
            for (int q = 0; q <= 400; ++q) {
                const double ulo = m.sigma() * q / 400.0;
                const double uhi = 1.0 - m.sigma() + m.sigma() * q / 400.0;
                worst = std::min(worst, -m.fu(x, ulo));
                worst = std::min(worst, -m.fu(x, uhi));
            }
        }
        CHECK(worst >= m.gamma());
    }
}

TEST_CASE("extension is linear far outside [0,1] and total") {
    auto m = make_cubic_medium(1, 0.3, {});
    // below -u0 - blend: f = f_u(x,0) u = -0.3 u
    CHECK(m.f({0.0, 0.0}, -0.5) == doctest::Approx(0.15).epsilon(1e-12));
    CHECK(m.fu({0.0, 0.0}, -0.5) == doctest::Approx(-0.3).epsilon(1e-12));
    // above 1 + u0 + blend: f = f_u(x,1)(u-1) = -0.7 (u-1)
    CHECK(m.f({0.0, 0.0}, 1.5) == doctest::Approx(-0.35).epsilon(1e-12));
    CHECK(std::isfinite(m.f({0.0, 0.0}, 1e6)));
    CHECK(std::isfinite(m.f({0.0, 0.0}, -1e6)));
}
