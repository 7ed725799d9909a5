#ifndef PFRONT_FRONT_SOLVER_HPP
#define PFRONT_FRONT_SOLVER_HPP

/// Phase-pinned damped Newton solver for the front pair (U, c), profile
/// normalization, and the per-front certificates: speed/mass identity,
/// exponential decay fits, monotonicity.

#include <numbers>
#include <optional>

#include "pfront/block_tridiag.hpp"
#include "pfront/grid.hpp"
#include "pfront/operators.hpp"

namespace pfront {

struct PulsatingFront {
    Vec2 e{1.0, 0.0};
    double c = 0.0;
    ProfileField profile;
    std::uint64_t model_hash = 0;
    double residual_norm = 0.0;
    int newton_iters = 0;
    std::vector<std::string> warnings;
};

struct DecayFit {
    double mu_plus = 0.0, mu_minus = 0.0;
    double window_plus[2] = {0, 0}, window_minus[2] = {0, 0};
    double r2_plus = 0.0, r2_minus = 0.0;
};

struct SolveOptions {
    double tol = 1e-10;
    int max_iters = 50;
    bool check_monotone = true;
};

// Default initial guess: the sharp-interface profile 1/(1+exp(xi/sqrt(2)))
// with speed (1 - 2 mean(theta))/sqrt(2).
inline ProfileField logistic_profile(const CylinderGrid& grid, double shift = 0.0) {
    ProfileField U(grid);
    for (int i = 0; i < grid.n_xi; ++i) {
        const double xi = grid.xi(i) - shift;
        const double v = 1.0 / (1.0 + std::exp(xi / std::numbers::sqrt2));
        for (int m = 0; m < grid.slice_size(); ++m) U.at(i, m) = v;
    }
    for (int m = 0; m < grid.slice_size(); ++m) {
        U.at(0, m) = 1.0;
        U.at(grid.n_xi - 1, m) = 0.0;
    }
    return U;
}

inline double default_speed_guess(const ReactionModel& model) {
    return (1.0 - 2.0 * model.theta_mean()) / std::numbers::sqrt2;
}

// Strict interior monotonicity of the forward xi-differences, skipping nodes
// where the profile is within noise of its Dirichlet limits.
inline bool profile_monotone(const ProfileField& U, double noise_floor = 1e-9) {
    const int M = U.grid.slice_size();
    for (int i = 0; i < U.grid.n_xi - 1; ++i)
        for (int m = 0; m < M; ++m) {
            const double a = U.at(i, m), b = U.at(i + 1, m);
            if (std::max(a, b) < noise_floor) continue;
            if (std::min(a, b) > 1.0 - noise_floor) continue;
            if (b - a >= 0.0) return false;
        }
    return true;
}

// Reusable solver state; sweep and sensitivity routines tap the hot
// factorization after convergence.
class FrontNewton {
  public:
    FrontNewton(const ReactionModel& model, const CylinderGrid& grid)
        : model_(model), grid_(grid), yops_(grid) {
        grid.validate();
        if (model.dim() != grid.dim) throw std::invalid_argument("model/grid dimension mismatch");
        if (!model.homogeneous()) {
            for (int d = 0; d < grid.dim; ++d) {
                bool depends = false;
                for (const auto& mo : model.modes())
                    if (mo.k[d] != 0) depends = true;
                if (depends && grid.n_y[d] < 16)
                    throw std::invalid_argument("medium varies along a y-dimension sampled with < 16 nodes");
            }
        }
    }

    PulsatingFront solve(const Vec2& e, std::optional<ProfileField> init = std::nullopt,
                         std::optional<double> c_init = std::nullopt, SolveOptions opts = {}) {
        if (std::abs(norm2(e, grid_.dim) - 1.0) > 1e-12) throw std::invalid_argument("|e| must be 1");
        PulsatingFront out;
        out.e = e;
        out.model_hash = model_.hash();

        const double mass = model_.mass_integral();
        if (std::abs(mass) < 1e-4)
            out.warnings.push_back("mass integral " + std::to_string(mass) +
                                   " is near zero: nonzero-speed front not guaranteed");

        ProfileField U = init ? std::move(*init) : logistic_profile(grid_);
        pin_boundaries(U);
        double c = c_init ? *c_init : default_speed_guess(model_);

        const int n = grid_.n_xi - 2, M = grid_.slice_size();
        const std::size_t sz = std::size_t(n) * M;

        // Integral phase condition against the initial guess.
        ProfileField Uref = U;
        ProfileField dref = dxi_field(Uref);
        phase_row_.assign(sz, 0.0);
        const double pscale = grid_.h() / M;
        for (int i = 0; i < n; ++i)
            for (int m = 0; m < M; ++m) phase_row_[std::size_t(i) * M + m] = dref.at(i + 1, m) * pscale;

        std::vector<double> F(sz), delta(sz), rhs(sz);
        double g = 0.0, res = 0.0;
        auto evaluate = [&](const ProfileField& W, double cc, std::vector<double>& Fout, double& gout) {
            ProfileField R = front_residual(grid_, model_, e, cc, W, &yops_);
            for (int i = 0; i < n; ++i)
                for (int m = 0; m < M; ++m) Fout[std::size_t(i) * M + m] = R.at(i + 1, m);
            gout = 0.0;
            for (std::size_t k = 0; k < sz; ++k) {
                int i = int(k / M) + 1, m = int(k % M);
                gout += phase_row_[k] * (W.at(i, m) - Uref.at(i, m));
            }
        };
        auto norm_of = [&](const std::vector<double>& Fv, double gv) {
            double a = std::abs(gv);
            for (double v : Fv) a = std::max(a, std::abs(v));
            return a;
        };

        evaluate(U, c, F, g);
        res = norm_of(F, g);
        bool fresh = false;
        double last_res = res;
        int it = 0;
        factored_ = false;
        for (; res > opts.tol; ++it) {
            if (it >= opts.max_iters)
                throw NonConvergence("front solve: iteration cap reached", res);
            const bool want_fresh = !factored_ || (!fresh && res > 0.3 * last_res);
            if (want_fresh) {
                refactor(e, c, U);
                fresh = true;
            }
            for (std::size_t k = 0; k < sz; ++k) rhs[k] = -F[k];
            double dc = 0.0;
            solver_.solve(rhs.data(), -g, delta.data(), dc);
            refine(rhs, -g, delta, dc);

            // Damping: halve until the residual decreases.
            double lambda = 1.0;
            bool accepted = false;
            ProfileField trial = U;
            std::vector<double> Ft(sz);
            double gt = 0.0;
            while (lambda >= std::ldexp(1.0, -20)) {
                for (std::size_t k = 0; k < sz; ++k) {
                    int i = int(k / M) + 1, m = int(k % M);
                    trial.at(i, m) = U.at(i, m) + lambda * delta[k];
                }
                const double ct = c + lambda * dc;
                evaluate(trial, ct, Ft, gt);
                const double rt = norm_of(Ft, gt);
                if (rt < res || rt <= opts.tol) {
                    U = trial;
                    c = ct;
                    F.swap(Ft);
                    g = gt;
                    last_res = res;
                    res = rt;
                    accepted = true;
                    break;
                }
                lambda *= 0.5;
            }
            if (!accepted) {
                if (!fresh) {  // stale Jacobian: rebuild once before giving up
                    factored_ = false;
                    fresh = false;
                    continue;
                }
                throw NonConvergence("front solve: line-search stagnation", res);
            }
            fresh = false;
        }

        out.c = c;
        out.profile = std::move(U);
        out.residual_norm = res;
        out.newton_iters = it;
        converged_U_ = out.profile;  // for sensitivity reuse
        converged_c_ = c;
        converged_e_ = e;

        if (opts.check_monotone && !profile_monotone(out.profile))
            throw NonMonotoneProfile("converged profile is not strictly decreasing in xi");
        if (std::abs(mass) >= 1e-4 && mass * out.c <= 0.0)
            out.warnings.push_back("speed sign disagrees with mass integral sign");
        return out;
    }

    const CylinderGrid& grid() const { return grid_; }
    const ReactionModel& model() const { return model_; }
    const YOperators& yops() const { return yops_; }
    const BlockTridiagSolver& factorization() const { return solver_; }
    bool has_factorization() const { return factored_; }
    const ProfileField& converged_profile() const { return converged_U_; }
    double converged_speed() const { return converged_c_; }
    const Vec2& converged_direction() const { return converged_e_; }

    // Refactor at the converged point (used before sensitivity computations
    // when the hot factorization is stale).
    void refactor_at_convergence() { refactor(converged_e_, converged_c_, converged_U_); }

    void release() {
        solver_.clear();
        factored_ = false;
    }

  private:
    const ReactionModel& model_;
    CylinderGrid grid_;
    YOperators yops_;
    BlockTridiagSolver solver_;
    FrontLinearization lin_;
    std::vector<double> phase_row_;
    bool factored_ = false;
    ProfileField converged_U_;
    double converged_c_ = 0.0;
    Vec2 converged_e_{1.0, 0.0};

  public:
    const FrontLinearization& linearization() const { return lin_; }

  private:
    void pin_boundaries(ProfileField& U) const {
        for (int m = 0; m < grid_.slice_size(); ++m) {
            U.at(0, m) = 1.0;
            U.at(grid_.n_xi - 1, m) = 0.0;
        }
    }

    void refactor(const Vec2& e, double c, const ProfileField& U) {
        const int n = grid_.n_xi - 2, M = grid_.slice_size();
        lin_ = assemble_linearization(grid_, model_, e, c, U, &yops_);
        Eigen::MatrixXd B = lin_.sub_scal * Eigen::MatrixXd::Identity(M, M) - lin_.Dmix;
        Eigen::MatrixXd C = lin_.super_scal * Eigen::MatrixXd::Identity(M, M) + lin_.Dmix;
        std::vector<double> bcol(std::size_t(n) * M);
        for (int i = 0; i < n; ++i)
            for (int m = 0; m < M; ++m) bcol[std::size_t(i) * M + m] = lin_.dc_column.at(i + 1, m);
        solver_.factor(
            n, M, [this](int i, Eigen::MatrixXd& A) { A = lin_.diag_block(i); }, B, C,
            phase_row_.data(), bcol.data(), 0.0);
        factored_ = true;
    }

    // One round of iterative refinement on the bordered system.
    void refine(const std::vector<double>& rhs, double rhs_c, std::vector<double>& x, double& xc) const {
        const std::size_t sz = rhs.size();
        std::vector<double> Hx(sz);
        lin_.matvec(x, Hx);
        const int M = grid_.slice_size();
        std::vector<double> r2(sz);
        double rc2 = rhs_c;
        for (std::size_t k = 0; k < sz; ++k) {
            int i = int(k / M) + 1, m = int(k % M);
            r2[k] = rhs[k] - Hx[k] - lin_.dc_column.at(i, m) * xc;
            rc2 -= phase_row_[k] * x[k];
        }
        std::vector<double> dx(sz);
        double dxc = 0.0;
        solver_.solve(r2.data(), rc2, dx.data(), dxc);
        for (std::size_t k = 0; k < sz; ++k) x[k] += dx[k];
        xc += dxc;
    }
};

inline PulsatingFront solve_front(const ReactionModel& model, const Vec2& e, const CylinderGrid& grid,
                                  std::optional<ProfileField> init = std::nullopt,
                                  std::optional<double> c_init = std::nullopt, SolveOptions opts = {}) {
    FrontNewton fn(model, grid);
    return fn.solve(e, std::move(init), c_init, opts);
}

// Resample the profile at xi + tau on its own grid, extending with the
// Dirichlet limits (1 left, 0 right) where the stencil leaves the grid.
inline ProfileField shift_profile(const ProfileField& U, double tau) {
    const auto& g = U.grid;
    const int M = g.slice_size();
    ProfileField out(g);
    std::vector<double> line(std::size_t(g.n_xi));
    for (int m = 0; m < M; ++m) {
        for (int i = 0; i < g.n_xi; ++i) line[i] = U.at(i, m);
        for (int i = 0; i < g.n_xi; ++i) {
            const double x = g.xi(i) + tau;
            double v;
            if (x <= -g.L)
                v = 1.0;
            else if (x >= g.L)
                v = 0.0;
            else
                v = detail::lagrange4(line, -g.L, g.h(), x);
            out.at(i, m) = v;
        }
    }
    for (int m = 0; m < M; ++m) {
        out.at(0, m) = 1.0;
        out.at(g.n_xi - 1, m) = 0.0;
    }
    return out;
}

// Half-line mass of the shifted profile, integral over {xi > 0} of U(.+tau)^2.
inline double halfline_mass(const ProfileField& U, double tau) {
    ProfileField s = shift_profile(U, tau);
    return cylinder_quadrature_product(s, s, 0.0);
}

struct NormalizeResult {
    PulsatingFront front;
    double tau = 0.0;
};

// Unique shift putting the profile on the normalization surface
// integral_{xi>0} U^2 = 1; monotone bisection (the half-line mass is
// strictly decreasing in the shift).
inline NormalizeResult shift_to_normalization(const PulsatingFront& f, double tol = 1e-8) {
    const auto& g = f.profile.grid;
    const double total = cylinder_quadrature_product(f.profile, f.profile);
    if (total < 1.0)
        throw TargetUnreachable("profile mass on the truncated grid is below 1; increase L");
    double lo = -2.0 * g.L, hi = 2.0 * g.L;  // mass(lo) ~ L >= 1, mass(hi) = 0
    const double flo = halfline_mass(f.profile, lo) - 1.0;
    if (flo < 0.0) throw TargetUnreachable("normalization bracket failed; increase L");
    double tau = 0.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = halfline_mass(f.profile, mid) - 1.0;
        if (std::abs(fm) < tol * 0.1) {
            tau = mid;
            break;
        }
        if (fm >= 0.0)
            lo = mid;
        else
            hi = mid;
        tau = 0.5 * (lo + hi);
        if (hi - lo < 1e-13) break;
    }
    NormalizeResult out;
    out.tau = tau;
    out.front = f;
    out.front.profile = shift_profile(f.profile, tau);
    return out;
}

// Matched-discrete speed/mass identity residual: the same central difference
// and Riemann sum the solver uses, so that all derivative terms of the
// discrete pairing cancel exactly and only the reaction path-quadrature
// error remains.
inline double speed_identity_residual(const PulsatingFront& f, const ReactionModel& model) {
    const auto& g = f.profile.grid;
    const int M = g.slice_size();
    const double h = g.h();
    double I = 0.0;
    for (int i = 1; i < g.n_xi - 1; ++i) {
        double s = 0.0;
        for (int m = 0; m < M; ++m) s += sq((f.profile.at(i + 1, m) - f.profile.at(i - 1, m)) / (2.0 * h));
        I += h * s / M;
    }
    const double mass = model.mass_integral();
    return std::abs(f.c * I - mass) / std::max(std::abs(mass), 1e-12);
}

// Exponential decay rates fitted where max_y U (resp. max_y (1-U)) lies in
// [1e-8, 1e-3]; enforces the sqrt(gamma) lower bound with 0.02 slack.
inline DecayFit fit_decay(const PulsatingFront& f, const ReactionModel& model, bool enforce_bound = true) {
    const auto& g = f.profile.grid;
    DecayFit out;
    auto fit_tail = [&](bool plus_side, double& mu, double* window, double& r2) {
        std::vector<double> xs, ys;
        for (int i = 0; i < g.n_xi; ++i) {
            const double v = plus_side ? f.profile.slice_max(i) : 1.0 - f.profile.slice_min(i);
            if (v >= 1e-8 && v <= 1e-3) {
                xs.push_back(g.xi(i));
                ys.push_back(std::log(v));
            }
        }
        if (xs.size() < 20)
            throw WindowTooShort("decay fit window has fewer than 20 nodes; increase L");
        auto lf = fit_line(xs, ys);
        mu = plus_side ? -lf.slope : lf.slope;
        window[0] = xs.front();
        window[1] = xs.back();
        r2 = lf.r2;
    };
    fit_tail(true, out.mu_plus, out.window_plus, out.r2_plus);
    fit_tail(false, out.mu_minus, out.window_minus, out.r2_minus);
    if (enforce_bound) {
        const double bound = std::sqrt(model.gamma()) - 0.02;
        if (out.mu_plus < bound || out.mu_minus < bound)
            throw DecayBoundViolated("fitted decay rate below sqrt(gamma) - 0.02");
    }
    return out;
}

}  // namespace pfront

#endif  // PFRONT_FRONT_SOLVER_HPP
