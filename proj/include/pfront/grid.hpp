#ifndef PFRONT_GRID_HPP
#define PFRONT_GRID_HPP

/// Discretization of the truncated cylinder [-L, L] x T^N: grids, profile
/// fields, and the cylinder quadrature (corrected trapezoid in xi times the
/// exact cell mean in y).

#include <span>

#include "pfront/common.hpp"

namespace pfront {

struct CylinderGrid {
    double L = 40.0;              // truncation half-length
    int n_xi = 2048;              // xi nodes, uniform on [-L, L]
    std::array<int, 2> n_y{1, 1}; // nodes per periodic dimension ([0,1) cell)
    int dim = 1;                  // N

    double h() const { return 2.0 * L / (n_xi - 1); }
    double xi(int i) const { return -L + i * h(); }
    int slice_size() const { return n_y[0] * n_y[1]; }
    int y_count(int d) const { return n_y[d]; }
    double y_coord(int d, int j) const { return double(j) / n_y[d]; }

    // Flat y index -> coordinates in the unit cell.
    Vec2 y_of(int m) const {
        if (dim == 1) return {y_coord(0, m), 0.0};
        int j0 = m / n_y[1], j1 = m % n_y[1];
        return {y_coord(0, j0), y_coord(1, j1)};
    }

    void validate() const {
        if (dim != 1 && dim != 2) throw std::invalid_argument("grid dim must be 1 or 2");
        if (n_xi < 64) throw std::invalid_argument("n_xi must be >= 64");
        if (h() > 0.25 + 1e-12) throw std::invalid_argument("xi spacing must be <= 0.25");
        for (int d = 0; d < dim; ++d)
            if (n_y[d] != 1 && n_y[d] < 16)
                throw std::invalid_argument("n_y must be 1 (homogeneous direction) or >= 16");
        if (dim == 1 && n_y[1] != 1) throw std::invalid_argument("n_y[1] must be 1 for dim 1");
    }
};

struct ProfileField {
    CylinderGrid grid;
    std::vector<double> values;  // indexed (xi node) * slice_size + flat y

    ProfileField() = default;
    explicit ProfileField(const CylinderGrid& g, double fill = 0.0)
        : grid(g), values(std::size_t(g.n_xi) * g.slice_size(), fill) {}

    double& at(int i, int m) { return values[std::size_t(i) * grid.slice_size() + m]; }
    double at(int i, int m) const { return values[std::size_t(i) * grid.slice_size() + m]; }
    std::span<double> slice(int i) {
        return {values.data() + std::size_t(i) * grid.slice_size(), std::size_t(grid.slice_size())};
    }
    std::span<const double> slice(int i) const {
        return {values.data() + std::size_t(i) * grid.slice_size(), std::size_t(grid.slice_size())};
    }

    double slice_mean(int i) const {
        auto s = slice(i);
        double a = 0.0;
        for (double v : s) a += v;
        return a / double(s.size());
    }
    double slice_max(int i) const {
        auto s = slice(i);
        double a = -1e300;
        for (double v : s) a = std::max(a, v);
        return a;
    }
    double slice_min(int i) const {
        auto s = slice(i);
        double a = 1e300;
        for (double v : s) a = std::min(a, v);
        return a;
    }
    double max_abs() const {
        double a = 0.0;
        for (double v : values) a = std::max(a, std::abs(v));
        return a;
    }
    bool finite() const {
        for (double v : values)
            if (!std::isfinite(v)) return false;
        return true;
    }
};

namespace detail {

// One-sided 4th-order first-derivative estimate at the ends of a sampled
// function, for the Euler-Maclaurin end correction.
inline double fd_one_sided(const std::vector<double>& g, std::size_t i, double h, bool forward) {
    if (g.size() < 5) {
        return forward ? (g[i + 1] - g[i]) / h : (g[i] - g[i - 1]) / h;
    }
    if (forward)
        return (-25.0 * g[i] + 48.0 * g[i + 1] - 36.0 * g[i + 2] + 16.0 * g[i + 3] - 3.0 * g[i + 4]) / (12.0 * h);
    return (25.0 * g[i] - 48.0 * g[i - 1] + 36.0 * g[i - 2] - 16.0 * g[i - 3] + 3.0 * g[i - 4]) / (12.0 * h);
}

// Cubic (4-point Lagrange) interpolation of uniformly sampled data.
inline double lagrange4(const std::vector<double>& g, double x0, double h, double x) {
    const int n = int(g.size());
    double s = (x - x0) / h;
    int i = int(std::floor(s));
    i = std::clamp(i, 1, n - 3);
    double t = s - i;
    const double gm = g[i - 1], g0 = g[i], g1 = g[i + 1], g2 = g[i + 2];
    const double c0 = -t * (t - 1.0) * (t - 2.0) / 6.0;
    const double c1 = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
    const double c2 = -(t + 1.0) * t * (t - 2.0) / 2.0;
    const double c3 = (t + 1.0) * t * (t - 1.0) / 6.0;
    return c0 * gm + c1 * g0 + c2 * g1 + c3 * g2;
}

}  // namespace detail

// Integral over {xi > a} x T^N of the field. End-corrected trapezoid in xi,
// exact cell mean in y. Pass a <= -L for the full cylinder. A cut point that
// falls between nodes is handled with a cubic-interpolated partial cell.
inline double cylinder_quadrature(const ProfileField& f, double a = -1e300) {
    const auto& g = f.grid;
    const double h = g.h();
    std::vector<double> m(std::size_t(g.n_xi));
    for (int i = 0; i < g.n_xi; ++i) m[i] = f.slice_mean(i);

    int j0 = 0;
    if (a > -g.L) {
        j0 = int(std::ceil((a - (-g.L)) / h - 1e-12));
        j0 = std::clamp(j0, 0, g.n_xi - 1);
    }
    if (j0 >= g.n_xi - 4) throw std::invalid_argument("quadrature window too short");

    double total = 0.0;
    for (int i = j0; i < g.n_xi - 1; ++i) total += 0.5 * (m[i] + m[i + 1]) * h;
    // Euler-Maclaurin end correction with 4th-order slope estimates.
    const double dl = detail::fd_one_sided(m, std::size_t(j0), h, true);
    const double dr = detail::fd_one_sided(m, std::size_t(g.n_xi - 1), h, false);
    total -= h * h / 12.0 * (dr - dl);

    // Partial cell [a, xi_{j0}] by Simpson on cubic-interpolated values.
    if (a > -g.L && g.xi(j0) > a + 1e-14) {
        const double b = g.xi(j0);
        const double mid = 0.5 * (a + b);
        const double fa = detail::lagrange4(m, -g.L, h, a);
        const double fm = detail::lagrange4(m, -g.L, h, mid);
        total += (b - a) / 6.0 * (fa + 4.0 * fm + m[j0]);
    }
    return total;
}

// Pointwise product of two fields followed by the cylinder quadrature.
inline double cylinder_quadrature_product(const ProfileField& f, const ProfileField& g, double a = -1e300) {
    ProfileField p(f.grid);
    for (std::size_t i = 0; i < p.values.size(); ++i) p.values[i] = f.values[i] * g.values[i];
    return cylinder_quadrature(p, a);
}

}  // namespace pfront

#endif  // PFRONT_GRID_HPP
