#ifndef PFRONT_INTERPOLATE_HPP
#define PFRONT_INTERPOLATE_HPP

/// Interpolating cubic B-splines (C2) on uniform grids, 1-D and separable
/// 2-D. The barrier evaluators differentiate these with finite differences,
/// so C2 continuity across knots matters there.

#include "pfront/common.hpp"

namespace pfront {

class BSpline1D {
  public:
    enum class Bc { Natural, Periodic };

    BSpline1D() = default;
    BSpline1D(const std::vector<double>& f, double x0, double h, Bc bc) { fit(f, x0, h, bc); }

    // Solve the (1,4,1)/6 interpolation system for the control coefficients.
    // Natural ends reduce to c_0 = f_0 and c_{n-1} = f_{n-1} after the ghost
    // substitution c_{-1} = 2 c_0 - c_1 (zero second derivative).
    void fit(const std::vector<double>& f, double x0, double h, Bc bc) {
        x0_ = x0;
        h_ = h;
        bc_ = bc;
        const int n = int(f.size());
        c_ = f;
        if (n < 4) return;
        if (bc == Bc::Natural) {
            c_[0] = f[0];
            c_[n - 1] = f[n - 1];
            std::vector<double> d(n, 0.0), e(n, 0.0);
            d[1] = 4.0 / 6.0;
            e[1] = f[1] - (1.0 / 6.0) * c_[0];
            for (int i = 2; i <= n - 2; ++i) {
                const double w = (1.0 / 6.0) / d[i - 1];
                d[i] = 4.0 / 6.0 - w * (1.0 / 6.0);
                double rhs = f[i] - ((i == n - 2) ? (1.0 / 6.0) * c_[n - 1] : 0.0);
                e[i] = rhs - w * e[i - 1];
            }
            c_[n - 2] = e[n - 2] / d[n - 2];
            for (int i = n - 3; i >= 1; --i) c_[i] = (e[i] - (1.0 / 6.0) * c_[i + 1]) / d[i];
        } else {
            // Cyclic tridiagonal (1,4,1)/6 via Sherman-Morrison: write the
            // cyclic matrix as T + u v^T with u = (g, 0, .., 0, a)^T,
            // v = (1, 0, .., 0, a/g)^T, a = 1/6, g = -4/6, which removes
            // the corners and shifts the two end diagonals of T.
            const double a = 1.0 / 6.0, b = 4.0 / 6.0, g = -b;
            const double d_first = b - g;
            const double d_last = b - a * a / g;
            auto solve_tri = [&](const std::vector<double>& rhs) {
                std::vector<double> d(n), x(n);
                d[0] = d_first;
                x[0] = rhs[0];
                for (int i = 1; i < n; ++i) {
                    const double w = a / d[i - 1];
                    d[i] = ((i == n - 1) ? d_last : b) - w * a;
                    x[i] = rhs[i] - w * x[i - 1];
                }
                x[n - 1] /= d[n - 1];
                for (int i = n - 2; i >= 0; --i) x[i] = (x[i] - a * x[i + 1]) / d[i];
                return x;
            };
            std::vector<double> u(n, 0.0);
            u[0] = g;
            u[n - 1] = a;
            const auto y = solve_tri(f);
            const auto z = solve_tri(u);
            const double vy = y[0] + (a / g) * y[n - 1];
            const double vz = z[0] + (a / g) * z[n - 1];
            const double alpha = vy / (1.0 + vz);
            for (int i = 0; i < n; ++i) c_[i] = y[i] - alpha * z[i];
        }
    }

    int size() const { return int(c_.size()); }
    double x0() const { return x0_; }
    double h() const { return h_; }
    Bc bc() const { return bc_; }

    double coeff(int i) const {
        const int n = int(c_.size());
        if (bc_ == Bc::Periodic) {
            int j = i % n;
            if (j < 0) j += n;
            return c_[j];
        }
        if (i < 0) return 2.0 * c_[0] - c_[std::min(-i, n - 1)];
        if (i >= n) return 2.0 * c_[n - 1] - c_[std::max(2 * (n - 1) - i, 0)];
        return c_[i];
    }

    double eval(double x, int deriv = 0) const {
        double w[4];
        const int i = basis_weights(x, x0_, h_, int(c_.size()), bc_, deriv, w);
        return w[0] * coeff(i - 1) + w[1] * coeff(i) + w[2] * coeff(i + 1) + w[3] * coeff(i + 2);
    }

    // Cubic B-spline basis weights for the 4 active coefficients at x.
    static int basis_weights(double x, double x0, double h, int n, Bc bc, int deriv, double w[4]) {
        double s = (x - x0) / h;
        int i = int(std::floor(s));
        double t = s - i;
        if (bc == Bc::Natural) {
            if (i < 0) {
                i = 0;
                t = s;
            } else if (i > n - 2) {
                i = n - 2;
                t = s - i;
            }
        }
        const double u = 1.0 - t;
        switch (deriv) {
            case 0:
                w[0] = u * u * u / 6.0;
                w[1] = (3.0 * t * t * t - 6.0 * t * t + 4.0) / 6.0;
                w[2] = (-3.0 * t * t * t + 3.0 * t * t + 3.0 * t + 1.0) / 6.0;
                w[3] = t * t * t / 6.0;
                break;
            case 1:
                w[0] = -u * u / (2.0 * h);
                w[1] = (3.0 * t * t - 4.0 * t) / (2.0 * h);
                w[2] = (-3.0 * t * t + 2.0 * t + 1.0) / (2.0 * h);
                w[3] = t * t / (2.0 * h);
                break;
            default:
                w[0] = u / (h * h);
                w[1] = (3.0 * t - 2.0) / (h * h);
                w[2] = (-3.0 * t + 1.0) / (h * h);
                w[3] = t / (h * h);
                break;
        }
        return i;
    }

  private:
    std::vector<double> c_;
    double x0_ = 0.0, h_ = 1.0;
    Bc bc_ = Bc::Natural;
};

// Separable interpolating B-spline in up to 4 dimensions. Dimensions of
// size 1 are carried along as constants. Natural dimensions are evaluated
// away from their edges by the callers (coefficients are clamped, ghosts
// are never consulted), periodic dimensions wrap.
class TensorBSpline {
  public:
    struct Dim {
        int n = 1;
        double x0 = 0.0, h = 1.0;
        bool periodic = false;
    };

    void fit(std::vector<double> data, std::vector<Dim> dims) {
        dims_ = std::move(dims);
        c_ = std::move(data);
        const int D = int(dims_.size());
        strides_.assign(D, 1);
        for (int d = D - 2; d >= 0; --d) strides_[d] = strides_[d + 1] * dims_[d + 1].n;
        std::size_t total = strides_[0] * std::size_t(dims_[0].n);
        if (c_.size() != total) throw std::invalid_argument("tensor spline: data size mismatch");
        std::vector<double> line;
        for (int d = 0; d < D; ++d) {
            const int n = dims_[d].n;
            if (n == 1) continue;
            if (n < 4) throw std::invalid_argument("tensor spline: dimensions need >= 4 nodes");
            const std::size_t stride = strides_[d];
            const std::size_t n_lines = total / n;
            line.resize(n);
            for (std::size_t l = 0; l < n_lines; ++l) {
                // Decompose l into (outer, inner) around dimension d.
                const std::size_t inner = l % stride;
                const std::size_t outer = l / stride;
                const std::size_t base = outer * stride * n + inner;
                for (int i = 0; i < n; ++i) line[i] = c_[base + std::size_t(i) * stride];
                BSpline1D s(line, dims_[d].x0, dims_[d].h,
                            dims_[d].periodic ? BSpline1D::Bc::Periodic : BSpline1D::Bc::Natural);
                for (int i = 0; i < n; ++i) c_[base + std::size_t(i) * stride] = s.coeff(i);
            }
        }
    }

    double eval(const std::vector<double>& x) const {
        const int D = int(dims_.size());
        int idx[4] = {0, 0, 0, 0};
        int counts[4] = {1, 1, 1, 1};
        double w[4][4] = {{1, 0, 0, 0}, {1, 0, 0, 0}, {1, 0, 0, 0}, {1, 0, 0, 0}};
        for (int d = 0; d < D; ++d) {
            if (dims_[d].n == 1) continue;
            idx[d] = BSpline1D::basis_weights(
                x[d], dims_[d].x0, dims_[d].h, dims_[d].n,
                dims_[d].periodic ? BSpline1D::Bc::Periodic : BSpline1D::Bc::Natural, 0, w[d]);
            counts[d] = 4;
        }
        double acc = 0.0;
        int off[4];
        for (int a = 0; a < counts[0]; ++a) {
            off[0] = counts[0] == 1 ? idx[0] : idx[0] + a - 1;
            for (int b = 0; b < counts[1]; ++b) {
                off[1] = counts[1] == 1 ? idx[1] : idx[1] + b - 1;
                for (int c2 = 0; c2 < counts[2]; ++c2) {
                    off[2] = counts[2] == 1 ? idx[2] : idx[2] + c2 - 1;
                    for (int e2 = 0; e2 < counts[3]; ++e2) {
                        off[3] = counts[3] == 1 ? idx[3] : idx[3] + e2 - 1;
                        acc += w[0][a] * w[1][b] * w[2][c2] * w[3][e2] * coeff(off, D);
                    }
                }
            }
        }
        return acc;
    }

  private:
    std::vector<double> c_;
    std::vector<Dim> dims_;
    std::vector<std::size_t> strides_;

    double coeff(const int* off, int D) const {
        std::size_t k = 0;
        for (int d = 0; d < D; ++d) {
            int i = off[d];
            const int n = dims_[d].n;
            if (dims_[d].periodic) {
                i %= n;
                if (i < 0) i += n;
            } else {
                i = std::clamp(i, 0, n - 1);
            }
            k += std::size_t(i) * strides_[d];
        }
        return c_[k];
    }
};

}  // namespace pfront

#endif  // PFRONT_INTERPOLATE_HPP
