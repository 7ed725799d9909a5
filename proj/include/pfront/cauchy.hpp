#ifndef PFRONT_CAUCHY_HPP
#define PFRONT_CAUCHY_HPP

/// Time integration of u_t = Lap u + f(x,u) on a box: IMEX splitting with
/// explicit reaction and implicit, dimension-factored diffusion (prefactored
/// tridiagonal solves). Homogeneous Neumann box edges; the medium wraps
/// periodically.

#include <complex>

#include "pfront/front_solver.hpp"
#include "pfront/reaction.hpp"

namespace pfront {

struct BoxGrid {
    double W = 32.0;  // half-width
    int n_b = 512;    // nodes per dimension
    int dim = 2;

    double h() const { return 2.0 * W / (n_b - 1); }
    double coord(int j) const { return -W + j * h(); }
    std::size_t size() const { return dim == 1 ? std::size_t(n_b) : std::size_t(n_b) * n_b; }

    // Spacing finer than 1/16 cell and a box at least twice the expected
    // final radius are the recommended defaults; callers may override and
    // collect the warnings.
    std::vector<std::string> check(double expected_final_radius = 0.0) const {
        std::vector<std::string> w;
        if (h() > 1.0 / 16.0 + 1e-12) w.push_back("box spacing exceeds 1/16 of the unit cell");
        if (expected_final_radius > 0.0 && W < 2.0 * expected_final_radius)
            w.push_back("box half-width below twice the expected final radius");
        return w;
    }
};

struct CauchyState {
    double t = 0.0;
    BoxGrid grid;
    std::vector<double> u;

    CauchyState() = default;
    CauchyState(const BoxGrid& g, double fill = 0.0) : grid(g), u(g.size(), fill) {}
    double& at(int i, int j) { return u[std::size_t(i) * grid.n_b + j]; }
    double at(int i, int j) const { return u[std::size_t(i) * grid.n_b + j]; }
    double max_value() const {
        double v = -1e300;
        for (double x : u) v = std::max(v, x);
        return v;
    }
    double min_value() const {
        double v = 1e300;
        for (double x : u) v = std::min(v, x);
        return v;
    }
};

inline double default_imex_dt(const ReactionModel& model) {
    return std::min(0.25, 0.5 / model.lipschitz_L());
}

// v_R experiment: u = beta inside |x| < R, 0 outside. Requires
// max theta < beta < 1.
inline CauchyState init_vR(const BoxGrid& grid, const ReactionModel& model, double R, double beta) {
    if (!(beta > model.theta_max() && beta < 1.0))
        throw std::invalid_argument("beta must satisfy max theta_x < beta < 1");
    if (!(R > 0.0 && R <= grid.W / 2.0)) throw std::invalid_argument("need 0 < R <= W/2");
    CauchyState s(grid, 0.0);
    if (grid.dim == 1) {
        for (int i = 0; i < grid.n_b; ++i)
            if (std::abs(grid.coord(i)) < R) s.u[i] = beta;
    } else {
        for (int i = 0; i < grid.n_b; ++i)
            for (int j = 0; j < grid.n_b; ++j)
                if (sq(grid.coord(i)) + sq(grid.coord(j)) < R * R) s.at(i, j) = beta;
    }
    return s;
}

// omega_R experiment: u = alpha inside |x| < R, 1 outside. Requires
// 0 < alpha < min theta.
inline CauchyState init_omegaR(const BoxGrid& grid, const ReactionModel& model, double R, double alpha) {
    if (!(alpha > 0.0 && alpha < model.theta_min()))
        throw std::invalid_argument("alpha must satisfy 0 < alpha < min theta_x");
    if (!(R > 0.0 && R <= grid.W / 2.0)) throw std::invalid_argument("need 0 < R <= W/2");
    CauchyState s(grid, 1.0);
    if (grid.dim == 1) {
        for (int i = 0; i < grid.n_b; ++i)
            if (std::abs(grid.coord(i)) < R) s.u[i] = alpha;
    } else {
        for (int i = 0; i < grid.n_b; ++i)
            for (int j = 0; j < grid.n_b; ++j)
                if (sq(grid.coord(i)) + sq(grid.coord(j)) < R * R) s.at(i, j) = alpha;
    }
    return s;
}

// Diffusion substep backends: the factored backward-Euler tridiagonal solve
// (O(dt) in time), or the exact propagator of the discrete Laplacian applied
// as a truncated heat-kernel convolution (no time error, so refinement
// studies see clean second order from the Strang reaction splitting). Both
// are monotone with unit row sums.
enum class Diffusion { FactoredEuler, SpectralExact };

class ImexStepper {
  public:
    ImexStepper(const BoxGrid& grid, const ReactionModel& model, double dt,
                Diffusion diffusion = Diffusion::FactoredEuler)
        : grid_(grid), model_(model), dt_(dt), diffusion_(diffusion) {
        if (model.dim() != grid.dim) throw std::invalid_argument("model/grid dimension mismatch");
        if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
        if (dt > 1.0 / model.lipschitz_L() + 1e-12)
            throw std::invalid_argument("dt exceeds the reaction stability limit 1/L");
        if (grid.n_b < 8) throw std::invalid_argument("box too small");
        // theta at every node (wrapped to the cell).
        theta_.resize(grid.size());
        if (grid.dim == 1) {
            for (int i = 0; i < grid.n_b; ++i) theta_[i] = model.theta({wrap01(grid.coord(i)), 0.0});
        } else {
            for (int i = 0; i < grid.n_b; ++i)
                for (int j = 0; j < grid.n_b; ++j)
                    theta_[std::size_t(i) * grid.n_b + j] =
                        model.theta({wrap01(grid.coord(i)), wrap01(grid.coord(j))});
        }
        if (diffusion_ == Diffusion::SpectralExact)
            prepare_spectral();
        else
            factor_line();
    }

    double dt() const { return dt_; }

    // One Strang-symmetrized IMEX step: explicit half-reaction (midpoint
    // rule), one diffusion sweep per dimension, explicit half-reaction.
    // Every substep is monotone for dt <= 1/L, so the discrete comparison
    // principle and the [0,1] bounds are exact. With the exact diffusion
    // backend the splitting error is O(dt^2).
    void step(CauchyState& s) const {
        const int n = grid_.n_b;
        half_reaction(s);
        auto line = [&](double* u) {
            if (diffusion_ == Diffusion::SpectralExact)
                spectral_line(u);
            else
                solve_line(u, 1);
        };
        if (grid_.dim == 1) {
            line(s.u.data());
        } else {
            // x-direction: each column j is strided; y-direction: contiguous rows.
            std::vector<double> buf(n);
            for (int j = 0; j < n; ++j) {
                for (int i = 0; i < n; ++i) buf[i] = s.at(i, j);
                line(buf.data());
                for (int i = 0; i < n; ++i) s.at(i, j) = buf[i];
            }
            for (int i = 0; i < n; ++i) line(&s.at(i, 0));
        }
        half_reaction(s);
        s.t += dt_;
        for (double v : s.u)
            if (!std::isfinite(v)) throw NonFiniteField("non-finite field value after step");
    }

    void advance(CauchyState& s, double t_target) const {
        while (s.t < t_target - 1e-12) step(s);
    }

  private:
    BoxGrid grid_;
    const ReactionModel& model_;
    double dt_;
    Diffusion diffusion_;
    std::vector<double> theta_;
    std::vector<double> cp_;      // Thomas forward coefficients of (I - dt D2)

    // Explicit midpoint for the reaction flow over dt/2 (2nd order, needed
    // so the Strang composition keeps its order; monotone for dt <= 1/L).
    void half_reaction(CauchyState& s) const {
        const double h2 = 0.5 * dt_;
        for (std::size_t k = 0; k < s.u.size(); ++k) {
            const double u = s.u[k];
            const double um = u + 0.5 * h2 * model_.f_theta(theta_[k], u);
            s.u[k] = u + h2 * model_.f_theta(theta_[k], um);
        }
    }
    std::vector<double> kernel_;  // exact heat propagator taps, kernel_[0] central
    int half_taps_ = 0;
    mutable std::vector<double> line_buf_;

    // The exact propagator exp(dt D2) of the mirror-Neumann Laplacian is the
    // circular heat kernel on the even-extended (period 2N) lattice; it
    // decays like a Gaussian of width sqrt(2 dt)/h nodes, so a truncated
    // symmetric convolution applied with mirror indexing is exact to
    // round-off. Taps are nonnegative and sum to 1 (monotone substep).
    void prepare_spectral() {
        const int N = grid_.n_b - 1;
        const int n2 = 2 * N;
        std::vector<double> taps(std::size_t(N) + 1, 0.0);
        for (int t = 0; t <= N; ++t) {
            double acc = 0.0;
            for (int k = 0; k < n2; ++k) {
                const double s = std::sin(std::numbers::pi * k / n2);
                const double mult = std::exp(-dt_ * 4.0 * s * s / sq(grid_.h()));
                acc += mult * std::cos(2.0 * std::numbers::pi * k * t / n2);
            }
            taps[t] = acc / n2;
        }
        half_taps_ = N;
        while (half_taps_ > 1 && std::abs(taps[half_taps_]) < 1e-18) --half_taps_;
        kernel_.assign(taps.begin(), taps.begin() + half_taps_ + 1);
        // Renormalize the truncated kernel to unit mass.
        double sum = kernel_[0];
        for (int t = 1; t <= half_taps_; ++t) sum += 2.0 * kernel_[t];
        for (auto& v : kernel_) v /= sum;
    }

    void spectral_line(double* u) const {
        const int N = grid_.n_b - 1;
        auto& buf = line_buf_;
        buf.assign(std::size_t(N) + 1, 0.0);
        auto reflect = [N](int j) {
            while (j < 0 || j > N) {
                if (j < 0) j = -j;
                if (j > N) j = 2 * N - j;
            }
            return j;
        };
        for (int i = 0; i <= N; ++i) {
            double acc = kernel_[0] * u[i];
            const int tmax = half_taps_;
            if (i - tmax >= 0 && i + tmax <= N) {
                for (int t = 1; t <= tmax; ++t) acc += kernel_[t] * (u[i - t] + u[i + t]);
            } else {
                for (int t = 1; t <= tmax; ++t) acc += kernel_[t] * (u[reflect(i - t)] + u[reflect(i + t)]);
            }
            buf[i] = acc;
        }
        std::copy(buf.begin(), buf.end(), u);
    }

    void factor_line() {
        const int n = grid_.n_b;
        const double g = dt_ / sq(grid_.h());
        cp_.assign(n, 0.0);
        // Rows: [1+2g, -2g] at the ends (mirror ghost), [-g, 1+2g, -g] inside.
        double diag0 = 1.0 + 2.0 * g;
        cp_[0] = -2.0 * g / diag0;
        for (int i = 1; i < n - 1; ++i) cp_[i] = -g / (1.0 + 2.0 * g + g * cp_[i - 1]);
        // last row handled in solve
    }

    void solve_line(double* u, int stride) const {
        const int n = grid_.n_b;
        const double g = dt_ / sq(grid_.h());
        thread_local std::vector<double> d;
        d.assign(n, 0.0);
        double diag0 = 1.0 + 2.0 * g;
        d[0] = u[0] / diag0;
        for (int i = 1; i < n - 1; ++i) {
            const double denom = 1.0 + 2.0 * g + g * cp_[i - 1];
            d[i] = (u[std::size_t(i) * stride] + g * d[i - 1]) / denom;
        }
        const double denomN = 1.0 + 2.0 * g + 2.0 * g * cp_[n - 2];
        d[n - 1] = (u[std::size_t(n - 1) * stride] + 2.0 * g * d[n - 2]) / denomN;
        u[std::size_t(n - 1) * stride] = d[n - 1];
        for (int i = n - 2; i >= 0; --i)
            u[std::size_t(i) * stride] = d[i] - cp_[i] * u[std::size_t(i + 1) * stride];
    }
};

// Free-function step, matching the operation surface; creates the stepper
// (the tridiagonal prefactorization is O(n) and immaterial).
inline CauchyState step(const CauchyState& s, const ReactionModel& model, double dt) {
    ImexStepper st(s.grid, model, dt);
    CauchyState out = s;
    st.step(out);
    return out;
}

// Space-time recurrence defect: start from the front's profile, evolve by
// t* = (k.e)/c, compare with the initial data translated by the cell vector k.
struct PulsatingRelationOptions {
    double W = 24.0;
    int nodes_per_cell = 16;
    double dt = 0.01;
};

inline double check_pulsating_relation(const PulsatingFront& front, const ReactionModel& model,
                                       const std::array<int, 2>& k, PulsatingRelationOptions opt = {}) {
    const auto& g = front.profile.grid;
    if (std::abs(front.c) < 1e-12) throw std::invalid_argument("front speed is zero");
    const double ke = k[0] * front.e[0] + (g.dim > 1 ? k[1] * front.e[1] : 0.0);
    if (k[0] == 0 && k[1] == 0) return 0.0;
    const double t_star = ke / front.c;
    if (t_star <= 0.0) throw std::invalid_argument("k.e/c must be positive");

    // Axis-invariant reduction: when the direction is axis-aligned and both
    // the medium and the cell vector are independent of the transverse
    // coordinate, the box scheme preserves transverse constancy exactly, so
    // the run collapses to its own 1-D restriction (same discrete values).
    if (g.dim == 2) {
        for (int axis = 0; axis < 2; ++axis) {
            const int other = 1 - axis;
            const bool axis_aligned = std::abs(std::abs(front.e[axis]) - 1.0) < 1e-14 && k[other] == 0;
            bool medium_flat = true;
            for (const auto& m : model.modes())
                if (m.k[other] != 0) medium_flat = false;
            if (!(axis_aligned && medium_flat)) continue;
            std::vector<ThetaMode> modes1;
            for (const auto& m : model.modes()) modes1.push_back({{m.k[axis], 0}, m.amp, m.phase});
            ReactionModel line_model = make_cubic_medium(1, model.theta0(), modes1);
            CylinderGrid g1 = g;
            g1.dim = 1;
            g1.n_y = {g.n_y[axis], 1};
            PulsatingFront f1;
            f1.e = {front.e[axis], 0.0};
            f1.c = front.c;
            f1.profile = ProfileField(g1);
            // The profile is transverse-constant as well: restrict it.
            for (int i = 0; i < g.n_xi; ++i)
                for (int m2 = 0; m2 < g1.slice_size(); ++m2)
                    f1.profile.at(i, m2) = front.profile.at(i, axis == 0 ? m2 * g.n_y[1] : m2);
            return check_pulsating_relation(f1, line_model, {k[axis], 0}, opt);
        }
    }

    // Cell-commensurate box: integer half-width, fixed nodes per unit cell,
    // so the translate by k is a whole number of nodes.
    const int ppc = opt.nodes_per_cell;
    BoxGrid box;
    box.dim = g.dim;
    box.W = std::ceil(opt.W);  // integer half-width keeps the medium cell-aligned
    box.n_b = int(2 * box.W) * ppc + 1;

    // Profile sampler: cubic in xi per y-line, periodic cubic across y (box
    // nodes need not land on the profile's y-grid).
    const int M = g.slice_size();
    std::vector<std::vector<double>> lines(M, std::vector<double>(g.n_xi));
    for (int m = 0; m < M; ++m)
        for (int i = 0; i < g.n_xi; ++i) lines[m][i] = front.profile.at(i, m);
    auto lagrange_w = [](double t, double w[4]) {
        w[0] = -t * (t - 1.0) * (t - 2.0) / 6.0;
        w[1] = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
        w[2] = -(t + 1.0) * t * (t - 2.0) / 2.0;
        w[3] = (t + 1.0) * t * (t - 1.0) / 6.0;
    };
    auto sample_profile = [&](double xi, const Vec2& y) {
        if (xi <= -g.L) return 1.0;
        if (xi >= g.L) return 0.0;
        int i0[2] = {0, 0};
        double wy[2][4] = {{1, 0, 0, 0}, {1, 0, 0, 0}};
        int counts[2] = {1, 1};
        for (int d = 0; d < g.dim; ++d) {
            const int n = g.n_y[d];
            if (n == 1) continue;
            const double s = wrap01(y[d]) * n;
            i0[d] = int(std::floor(s));
            lagrange_w(s - i0[d], wy[d]);
            counts[d] = 4;
        }
        double acc = 0.0;
        for (int a = 0; a < counts[0]; ++a) {
            const int ja = counts[0] == 1 ? 0 : ((i0[0] + a - 1) % g.n_y[0] + g.n_y[0]) % g.n_y[0];
            for (int b = 0; b < counts[1]; ++b) {
                const int jb = counts[1] == 1 ? 0 : ((i0[1] + b - 1) % g.n_y[1] + g.n_y[1]) % g.n_y[1];
                const int m = g.dim == 1 ? ja : ja * g.n_y[1] + jb;
                acc += wy[0][a] * wy[1][b] * detail::lagrange4(lines[m], -g.L, g.h(), xi);
            }
        }
        return acc;
    };

    CauchyState s(box, 0.0);
    if (box.dim == 1) {
        for (int i = 0; i < box.n_b; ++i) {
            const double x = box.coord(i);
            s.u[i] = sample_profile(x * front.e[0], {x, 0.0});
        }
    } else {
        for (int i = 0; i < box.n_b; ++i)
            for (int j = 0; j < box.n_b; ++j) {
                const double x0 = box.coord(i), x1 = box.coord(j);
                s.at(i, j) = sample_profile(x0 * front.e[0] + x1 * front.e[1], {x0, x1});
            }
    }
    const std::vector<double> u0 = s.u;

    const int n_steps = std::max(1, int(std::ceil(t_star / opt.dt)));
    ImexStepper st(box, model, t_star / n_steps, Diffusion::SpectralExact);
    for (int q = 0; q < n_steps; ++q) st.step(s);

    // Compare on the central half with u0 translated by k (node-aligned).
    const int off0 = k[0] * ppc, off1 = (box.dim > 1 ? k[1] * ppc : 0);
    double defect = 0.0;
    if (box.dim == 1) {
        for (int i = 0; i < box.n_b; ++i) {
            if (std::abs(box.coord(i)) > box.W / 2.0) continue;
            const int isrc = i - off0;
            if (isrc < 0 || isrc >= box.n_b) continue;
            defect = std::max(defect, std::abs(s.u[i] - u0[isrc]));
        }
    } else {
        for (int i = 0; i < box.n_b; ++i)
            for (int j = 0; j < box.n_b; ++j) {
                if (std::abs(box.coord(i)) > box.W / 2.0 || std::abs(box.coord(j)) > box.W / 2.0) continue;
                const int isrc = i - off0, jsrc = j - off1;
                if (isrc < 0 || isrc >= box.n_b || jsrc < 0 || jsrc >= box.n_b) continue;
                defect = std::max(defect, std::abs(s.at(i, j) - u0[std::size_t(isrc) * box.n_b + jsrc]));
            }
    }
    return defect;
}

}  // namespace pfront

#endif  // PFRONT_CAUCHY_HPP
