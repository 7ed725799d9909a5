#ifndef PFRONT_REACTION_HPP
#define PFRONT_REACTION_HPP

/// Spatially periodic bistable reaction terms f(x,u) = u(1-u)(u-theta_x),
/// their u-derivatives, the stability constants (gamma, sigma) and the
/// mass integral that controls the front speed sign.

#include <algorithm>
#include <cstdio>
#include <numbers>

#include "pfront/common.hpp"

namespace pfront {

// One Fourier mode of the unstable-zero field theta_x.
struct ThetaMode {
    std::array<int, 2> k{0, 0};  // integer wave vector (k[1] unused when dim == 1)
    double amp = 0.0;
    double phase = 0.0;
};

namespace detail {

// Nodes/weights of n-point Gauss-Legendre on [0,1], by Newton on P_n.
inline void gauss_legendre01(int n, std::vector<double>& xs, std::vector<double>& ws) {
    xs.assign(n, 0.0);
    ws.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            double dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double p0 = 1.0, p1 = x;
        for (int j = 2; j <= n; ++j) {
            double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
            p0 = p1;
            p1 = p2;
        }
        double dp = n * (x * p1 - p0) / (x * x - 1.0);
        xs[i] = 0.5 * (x + 1.0);
        ws[i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
}

}  // namespace detail

class ReactionModel {
  public:
    static constexpr double kExtensionHalfWidth = 0.1;   // u0: cubic kept on [-u0, 1+u0]
    static constexpr double kBlendWidth = 0.05;          // C2 blend into the linear tails

    ReactionModel() = default;

    int dim() const { return dim_; }
    double theta0() const { return theta0_; }
    const std::vector<ThetaMode>& modes() const { return modes_; }
    bool homogeneous() const { return modes_.empty(); }
    double gamma() const { return gamma_; }
    double sigma() const { return sigma_; }
    double lipschitz_L() const { return lipschitz_; }
    double theta_min() const { return theta_min_; }
    double theta_max() const { return theta_max_; }
    double theta_mean() const { return theta0_; }
    std::uint64_t hash() const { return hash_; }

    double theta(const Vec2& x) const {
        double t = theta0_;
        for (const auto& m : modes_) {
            double ph = m.phase + 2.0 * std::numbers::pi * (m.k[0] * x[0] + (dim_ > 1 ? m.k[1] * x[1] : 0.0));
            t += m.amp * std::cos(ph);
        }
        return t;
    }

    double f(const Vec2& x, double u) const { return eval(x, u, 0); }
    double fu(const Vec2& x, double u) const { return eval(x, u, 1); }
    double fuu(const Vec2& x, double u) const { return eval(x, u, 2); }

    // Convenience overloads for theta given directly (hot loops precompute theta).
    static double f_of_theta(double th, double u) { return cubic_branch(th, u, 0); }

    double f_theta(double th, double u) const { return eval_theta(th, u, 0); }
    double fu_theta(double th, double u) const { return eval_theta(th, u, 1); }

    // Tensor-product quadrature of f over T^N x [0,1]: Gauss-Legendre in u,
    // trapezoid (= rectangle, periodic) in x. Exact to round-off for the
    // cubic family with trigonometric theta.
    double mass_integral() const {
        std::vector<double> xs, ws;
        detail::gauss_legendre01(32, xs, ws);
        const int nx = 256;
        double total = 0.0;
        if (dim_ == 1) {
            for (int i = 0; i < nx; ++i) {
                double th = theta({double(i) / nx, 0.0});
                double s = 0.0;
                for (int q = 0; q < 32; ++q) s += ws[q] * cubic_branch(th, xs[q], 0);
                total += s;
            }
            total /= nx;
        } else {
            for (int i = 0; i < nx; ++i)
                for (int j = 0; j < nx; ++j) {
                    double th = theta({double(i) / nx, double(j) / nx});
                    double s = 0.0;
                    for (int q = 0; q < 32; ++q) s += ws[q] * cubic_branch(th, xs[q], 0);
                    total += s;
                }
            total /= double(nx) * nx;
        }
        return total;
    }

    friend ReactionModel make_cubic_medium(int dim, double theta0, const std::vector<ThetaMode>& modes);

  private:
    int dim_ = 1;
    double theta0_ = 0.3;
    std::vector<ThetaMode> modes_;
    double gamma_ = 0.0, sigma_ = 0.0, lipschitz_ = 0.0;
    double theta_min_ = 0.0, theta_max_ = 0.0;
    std::uint64_t hash_ = 0;

    // Cubic f and u-derivatives for a fixed theta.
    static double cubic_branch(double th, double u, int deriv) {
        switch (deriv) {
            case 0: return u * (1.0 - u) * (u - th);
            case 1: return -3.0 * u * u + 2.0 * (1.0 + th) * u - th;
            default: return -6.0 * u + 2.0 * (1.0 + th);
        }
    }

    // Linear tails: f = f_u(x,0) u below, f = f_u(x,1)(u-1) above.
    static double linear_left(double th, double u, int deriv) {
        const double s = -th;  // f_u at u = 0
        return deriv == 0 ? s * u : (deriv == 1 ? s : 0.0);
    }
    static double linear_right(double th, double u, int deriv) {
        const double s = -(1.0 - th);  // f_u at u = 1
        return deriv == 0 ? s * (u - 1.0) : (deriv == 1 ? s : 0.0);
    }

    double eval(const Vec2& x, double u, int deriv) const { return eval_theta(theta(x), u, deriv); }

    double eval_theta(double th, double u, int deriv) const {
        const double u0 = kExtensionHalfWidth, w = kBlendWidth;
        if (u >= -u0 && u <= 1.0 + u0) return cubic_branch(th, u, deriv);
        if (u <= -u0 - w) return linear_left(th, u, deriv);
        if (u >= 1.0 + u0 + w) return linear_right(th, u, deriv);
        // C2 blend: s goes 0 at the cubic edge, 1 at the linear edge.
        if (u < -u0) {
            double s = (-u0 - u) / w;
            return blend(th, u, deriv, s, -1.0 / w, true);
        }
        double s = (u - (1.0 + u0)) / w;
        return blend(th, u, deriv, s, 1.0 / w, false);
    }

    double blend(double th, double u, int deriv, double s, double dsdu, bool left) const {
        const double S = smoothstep5(s);
        const double S1 = smoothstep5_d1(s) * dsdu;
        const double S2 = smoothstep5_d2(s) * dsdu * dsdu;
        auto c = [&](int d) { return cubic_branch(th, u, d); };
        auto l = [&](int d) { return left ? linear_left(th, u, d) : linear_right(th, u, d); };
        switch (deriv) {
            case 0: return (1.0 - S) * c(0) + S * l(0);
            case 1: return (1.0 - S) * c(1) + S * l(1) + S1 * (l(0) - c(0));
            default:
                return (1.0 - S) * c(2) + S * l(2) + 2.0 * S1 * (l(1) - c(1)) + S2 * (l(0) - c(0));
        }
    }

    void compute_constants() {
        // theta range by dense sampling (theta is a finite trigonometric sum).
        const int nx = (dim_ == 1) ? 4096 : 512;
        theta_min_ = 1e30;
        theta_max_ = -1e30;
        auto scan = [&](const Vec2& x) {
            double t = theta(x);
            theta_min_ = std::min(theta_min_, t);
            theta_max_ = std::max(theta_max_, t);
        };
        if (dim_ == 1) {
            for (int i = 0; i < nx; ++i) scan({double(i) / nx, 0.0});
        } else {
            for (int i = 0; i < nx; ++i)
                for (int j = 0; j < nx; ++j) scan({double(i) / nx, double(j) / nx});
        }
        if (theta_min_ <= 0.05 || theta_max_ >= 0.95)
            throw std::invalid_argument("theta_x leaves (0.05, 0.95): amplitudes too large");

        // sigma: largest value <= 0.45 * min theta with a positive stability
        // margin on both strips [0,sigma] and [1-sigma,1]; gamma = half that
        // margin. The strip minima of -f_u for the cubic are attained at the
        // inner strip edges and are monotone in theta, so only the theta
        // extremes enter.
        auto strip_min = [&](double s) {
            double q = 3.0 * s * s - 2.0 * (1.0 + theta_min_) * s + theta_min_;       // u = sigma, theta = min
            double r = 3.0 * sq(1.0 - s) - 2.0 * (1.0 + theta_max_) * (1.0 - s) + theta_max_;  // u = 1 - sigma
            return std::min(q, r);
        };
        double s = 0.45 * theta_min_;
        double m = strip_min(s);
        while (m <= 0.0 && s > 1e-6) {
            s *= 0.95;
            m = strip_min(s);
        }
        if (m <= 0.0 || s >= 0.5) throw std::invalid_argument("no admissible stability margin sigma");
        sigma_ = s;
        gamma_ = 0.5 * m;

        // Lipschitz bound max |f_u| over the cell x [0,1] by dense sampling.
        lipschitz_ = 0.0;
        const int nu = 801;
        const int nxs = (dim_ == 1) ? 512 : 128;
        auto scanL = [&](const Vec2& x) {
            double th = theta(x);
            for (int q = 0; q <= nu; ++q) {
                double u = double(q) / nu;
                lipschitz_ = std::max(lipschitz_, std::abs(cubic_branch(th, u, 1)));
            }
        };
        if (dim_ == 1) {
            for (int i = 0; i < nxs; ++i) scanL({double(i) / nxs, 0.0});
        } else {
            for (int i = 0; i < nxs; ++i)
                for (int j = 0; j < nxs; ++j) scanL({double(i) / nxs, double(j) / nxs});
        }

        std::string desc = "cubic dim=" + std::to_string(dim_) + " theta0=" + std::to_string(theta0_);
        for (const auto& mo : modes_)
            desc += " k=" + std::to_string(mo.k[0]) + "," + std::to_string(mo.k[1]) +
                    " a=" + std::to_string(mo.amp) + " p=" + std::to_string(mo.phase);
        hash_ = fnv1a64(desc);
    }
};

inline ReactionModel make_cubic_medium(int dim, double theta0, const std::vector<ThetaMode>& modes) {
    if (dim != 1 && dim != 2) throw std::invalid_argument("dim must be 1 or 2");
    if (theta0 <= 0.0 || theta0 >= 1.0) throw std::invalid_argument("theta0 must lie in (0,1)");
    ReactionModel m;
    m.dim_ = dim;
    m.theta0_ = theta0;
    m.modes_ = modes;
    for (const auto& mo : m.modes_)
        if (dim == 1 && mo.k[1] != 0) throw std::invalid_argument("1-D medium with 2-D wave vector");
    m.compute_constants();
    return m;
}

}  // namespace pfront

#endif  // PFRONT_REACTION_HPP
