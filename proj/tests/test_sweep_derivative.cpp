#include <doctest.h>

#include "pfront/cauchy.hpp"
#include "pfront/sweep.hpp"

using namespace pfront;

namespace {

CylinderGrid plane_grid(double L, int n_xi, int ny0, int ny1) {
    CylinderGrid g;
    g.L = L;
    g.n_xi = n_xi;
    g.dim = 2;
    g.n_y = {ny0, ny1};
    return g;
}

}  // namespace

TEST_CASE("homogeneous medium: the sweep is rotation invariant") {
    auto model = make_cubic_medium(2, 0.3, {});
    auto sweep = sweep_directions(model, plane_grid(30, 512, 1, 1), 8);
    const double c0 = sweep.entries.front().c;
    for (const auto& e : sweep.entries) CHECK(std::abs(e.c - c0) <= 1e-8);
}

TEST_CASE("striped medium: along-stripe speed matches an independent time-domain run") {
    auto model = make_cubic_medium(2, 0.3, {{{1, 0}, 0.1, 0.0}});
    // e = (0,1): propagation along the stripes; the transverse periodicity
    // is carried by y1 and the mixed term drops out.
    auto grid = plane_grid(40, 2048, 16, 1);
    auto f = solve_front(model, {0.0, 1.0}, grid);
    CHECK(f.c > 0.0);

    // Independent oracle: evolve a planar front along x2 with the box
    // stepper and measure the level-set displacement rate.
    BoxGrid box;
    box.dim = 2;
    box.W = 14.0;
    box.n_b = 449;  // h = 1/16
    CauchyState s(box, 0.0);
    for (int i = 0; i < box.n_b; ++i)
        for (int j = 0; j < box.n_b; ++j)
            s.at(i, j) = 1.0 / (1.0 + std::exp(box.coord(j) / std::numbers::sqrt2));
    ImexStepper st(box, model, 0.01);
    auto crossing = [&]() {
        const int mid = box.n_b / 2;
        for (int j = box.n_b - 2; j >= 0; --j)
            if (s.at(mid, j) >= 0.5) {
                const double a = s.at(mid, j), b = s.at(mid, j + 1);
                return box.coord(j) + box.h() * (a - 0.5) / (a - b);
            }
        return 0.0;
    };
    st.advance(s, 3.0);
    const double x1 = crossing();
    st.advance(s, 10.0);
    const double x2 = crossing();
    const double c_box = (x2 - x1) / 7.0;
    CHECK(f.c == doctest::Approx(c_box).epsilon(0.02));
}

TEST_CASE("striped medium: sweep continuity under angle refinement") {
    auto model = make_cubic_medium(2, 0.3, {{{1, 0}, 0.1, 0.0}});
    auto grid = plane_grid(28, 768, 16, 1);
    SweepOptions opts;
    auto s16 = sweep_directions(model, grid, 16, opts);
    auto s32 = sweep_refine(model, grid, s16, opts);
    CHECK(s32.entries.size() == 32);
    for (std::size_t j = 0; j < s32.entries.size(); ++j) CHECK(s32.entries[j].residual_norm <= 1e-9);
    CHECK(s32.max_adjacent_dc() <= s16.max_adjacent_dc() / 1.5);
    CHECK(s32.max_adjacent_profile_dist() <= s16.max_adjacent_profile_dist());
    // Reused entries keep their speeds.
    for (int j = 0; j < 16; ++j)
        CHECK(s32.entries[2 * j].c == doctest::Approx(s16.entries[j].c).epsilon(1e-14));
}

TEST_CASE("speed derivative: tangential only, zero for isotropic media") {
    auto model = make_cubic_medium(2, 0.3, {{{1, 0}, 0.1, 0.0}});
    auto grid = plane_grid(28, 768, 16, 1);
    auto f = solve_front(model, {1.0, 0.0}, grid);
    // h = e contributes nothing: the radial part is projected out.
    auto de = directional_speed_derivative(f, model, grid, {1.0, 0.0});
    CHECK(std::abs(de.adjoint) <= 1e-12);

    auto model0 = make_cubic_medium(2, 0.3, {});
    auto grid0 = plane_grid(28, 256, 16, 16);
    auto f0 = solve_front(model0, {1.0, 0.0}, grid0);
    auto d0 = directional_speed_derivative(f0, model0, grid0, {0.0, 1.0});
    CHECK(std::abs(d0.adjoint) <= 1e-6);
}

TEST_CASE("speed derivative: adjoint route against sweep differences") {
    auto model = make_cubic_medium(2, 0.3, {{{1, 0}, 0.1, 0.0}});
    auto grid = plane_grid(28, 768, 16, 1);
    SweepOptions opts;
    opts.with_derivative = true;
    auto sweep = sweep_directions(model, grid, 32, opts);
    double max_fd = 0.0, max_diff = 0.0;
    for (const auto& e : sweep.entries) {
        max_fd = std::max(max_fd, std::abs(e.c_prime_fd));
        max_diff = std::max(max_diff, std::abs(e.c_prime - e.c_prime_fd));
    }
    CHECK(max_fd > 0.0);  // the striped medium is anisotropic
    CHECK(max_diff <= 0.08 * max_fd);
}
