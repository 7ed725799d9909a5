#ifndef PFRONT_SWEEP_HPP
#define PFRONT_SWEEP_HPP

/// Continuation of fronts over propagation directions on the unit circle,
/// with per-angle certificates, plus the adjoint solvability route for the
/// directional derivative of the speed.

#include <atomic>
#include <limits>
#include <thread>

#include "pfront/front_solver.hpp"

namespace pfront {

struct SweepEntry {
    double angle = 0.0;
    double c = 0.0;
    double residual_norm = 0.0;
    double identity_residual = 0.0;
    double mu_plus = 0.0, mu_minus = 0.0;
    int newton_iters = 0;
    double c_prime = std::numeric_limits<double>::quiet_NaN();     // adjoint route, tangent direction
    double c_prime_fd = std::numeric_limits<double>::quiet_NaN();  // sweep central difference
};

struct SpeedSweep {
    std::uint64_t model_hash = 0;
    CylinderGrid grid;
    std::vector<SweepEntry> entries;           // angles strictly increasing in [0, 2 pi)
    std::vector<ProfileField> profiles;        // normalized, same order
    double c_min() const {
        double v = 1e300;
        for (const auto& e : entries) v = std::min(v, e.c);
        return v;
    }
    double c_max() const {
        double v = -1e300;
        for (const auto& e : entries) v = std::max(v, e.c);
        return v;
    }
    double max_adjacent_dc() const {
        double v = 0.0;
        const int n = int(entries.size());
        for (int j = 0; j < n; ++j) v = std::max(v, std::abs(entries[(j + 1) % n].c - entries[j].c));
        return v;
    }
    double max_adjacent_profile_dist() const {
        double v = 0.0;
        const int n = int(profiles.size());
        for (int j = 0; j < n; ++j) {
            const auto& a = profiles[j];
            const auto& b = profiles[(j + 1) % n];
            double d = 0.0;
            for (std::size_t k = 0; k < a.values.size(); ++k)
                d = std::max(d, std::abs(a.values[k] - b.values[k]));
            v = std::max(v, d);
        }
        return v;
    }
};

struct SweepOptions {
    bool with_derivative = false;
    bool with_decay = true;
    SolveOptions solve;
    int threads = 1;
};

struct SpeedDerivative {
    double adjoint = 0.0;
    double fd = std::numeric_limits<double>::quiet_NaN();
    double kernel_residual = 0.0;  // ||H' psi|| / ||psi|| for the reported kernel vector
};

namespace detail {

// Inverse iteration on the transposed linearization using the solver's block
// LU; returns the adjoint kernel vector (unit 2-norm, interior layout).
inline std::vector<double> adjoint_kernel(const BlockTridiagSolver& fact, const FrontLinearization& lin) {
    const int n = lin.interior(), M = lin.M();
    const std::size_t sz = std::size_t(n) * M;
    std::vector<double> psi(sz), tmp(sz);
    for (int i = 0; i < n; ++i)
        for (int m = 0; m < M; ++m) psi[std::size_t(i) * M + m] = lin.dc_column.at(i + 1, m);
    for (int sweep = 0; sweep < 3; ++sweep) {
        fact.solve_transpose(psi.data(), tmp.data());
        double nrm = 0.0;
        for (double v : tmp) nrm += v * v;
        nrm = std::sqrt(nrm);
        if (!(nrm > 0.0) || !std::isfinite(nrm)) throw AdjointDegenerate("adjoint inverse iteration collapsed");
        for (std::size_t k = 0; k < sz; ++k) psi[k] = tmp[k] / nrm;
    }
    return psi;
}

inline void matvec_transpose(const FrontLinearization& lin, const std::vector<double>& v,
                             std::vector<double>& w) {
    // Blocks of H': diag A_i' = A_i (symmetric), sub = C', super = B'.
    const int n = lin.interior(), M = lin.M();
    w.assign(v.size(), 0.0);
    Eigen::Map<const Eigen::MatrixXd> V(v.data(), M, n);
    Eigen::Map<Eigen::MatrixXd> W(w.data(), M, n);
    const Eigen::MatrixXd DmixT = lin.Dmix.transpose();
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXd acc = lin.base_diag * V.col(i);
        const int gi = i + 1;
        for (int m = 0; m < M; ++m) acc[m] += lin.fu[std::size_t(gi) * M + m] * V(m, i);
        if (i > 0) acc.noalias() += lin.super_scal * V.col(i - 1) + DmixT * V.col(i - 1);
        if (i < n - 1) acc.noalias() += lin.sub_scal * V.col(i + 1) - DmixT * V.col(i + 1);
        W.col(i) = acc;
    }
}

inline SpeedDerivative derivative_from_factorization(FrontNewton& fn, const Vec2& e, const Vec2& h) {
    const auto& grid = fn.grid();
    // The hot factorization may be one Newton step stale; measure the kernel
    // vector against a linearization assembled at the converged point and
    // refactor there if the residual says the factorization drifted.
    FrontLinearization lin = assemble_linearization(grid, fn.model(), e, fn.converged_speed(),
                                                    fn.converged_profile(), &fn.yops());
    const int n = lin.interior(), M = lin.M();

    auto psi = adjoint_kernel(fn.factorization(), lin);
    std::vector<double> hpsi;
    matvec_transpose(lin, psi, hpsi);
    double kres = 0.0;
    for (double v : hpsi) kres += v * v;
    kres = std::sqrt(kres);
    if (kres > 1e-4) {
        fn.refactor_at_convergence();
        psi = adjoint_kernel(fn.factorization(), lin);
        matvec_transpose(lin, psi, hpsi);
        kres = 0.0;
        for (double v : hpsi) kres += v * v;
        kres = std::sqrt(kres);
    }

    SpeedDerivative out;
    out.kernel_residual = kres;

    double eh = 0.0;
    for (int d = 0; d < grid.dim; ++d) eh += e[d] * h[d];
    Vec2 hperp{h[0] - eh * e[0], h[1] - eh * e[1]};

    ProfileField rh = residual_direction_derivative(grid, hperp, fn.converged_profile(), fn.yops());
    double num = 0.0, den = 0.0;
    for (int i = 0; i < n; ++i)
        for (int m = 0; m < M; ++m) {
            const std::size_t k = std::size_t(i) * M + m;
            num += psi[k] * rh.at(i + 1, m);
            den += psi[k] * lin.dc_column.at(i + 1, m);
        }
    if (std::abs(den) < 1e-10) throw AdjointDegenerate("adjoint kernel orthogonal to the speed column");
    out.adjoint = -num / den;
    return out;
}

}  // namespace detail

// Adjoint-route directional derivative of the speed at a converged front.
// Also reports the sweep central difference when a sweep containing the
// front's angle is supplied.
inline SpeedDerivative directional_speed_derivative(const PulsatingFront& front, const ReactionModel& model,
                                                    const CylinderGrid& grid, const Vec2& h,
                                                    const SpeedSweep* sweep = nullptr) {
    FrontNewton fn(model, grid);
    auto refined = fn.solve(front.e, front.profile, front.c);
    fn.refactor_at_convergence();
    auto out = detail::derivative_from_factorization(fn, refined.e, h);
    if (sweep && !sweep->entries.empty()) {
        const double phi = std::atan2(front.e[1], front.e[0]);
        const int nA = int(sweep->entries.size());
        int j = -1;
        for (int a = 0; a < nA; ++a) {
            double d = std::remainder(sweep->entries[a].angle - phi, 2.0 * std::numbers::pi);
            if (std::abs(d) < 1e-9) j = a;
        }
        if (j >= 0) {
            const double dphi = 2.0 * std::numbers::pi / nA;
            out.fd = (sweep->entries[(j + 1) % nA].c - sweep->entries[(j + nA - 1) % nA].c) / (2.0 * dphi);
        }
    }
    return out;
}

namespace detail {

struct AngleResult {
    SweepEntry entry;
    ProfileField profile;
};

inline AngleResult solve_angle(FrontNewton& fn, const ReactionModel& model, double phi,
                               const ProfileField* warm, double c_warm, const SweepOptions& opts) {
    const Vec2 e{std::cos(phi), std::sin(phi)};
    std::optional<ProfileField> init;
    std::optional<double> cinit;
    if (warm) {
        init = *warm;
        cinit = c_warm;
    }
    PulsatingFront f = fn.solve(e, std::move(init), cinit, opts.solve);
    AngleResult out;
    out.entry.angle = phi;
    out.entry.c = f.c;
    out.entry.residual_norm = f.residual_norm;
    out.entry.newton_iters = f.newton_iters;
    out.entry.identity_residual = speed_identity_residual(f, model);
    if (opts.with_decay) {
        auto d = fit_decay(f, model);
        out.entry.mu_plus = d.mu_plus;
        out.entry.mu_minus = d.mu_minus;
    }
    if (opts.with_derivative) {
        const Vec2 tangent{-std::sin(phi), std::cos(phi)};
        out.entry.c_prime = derivative_from_factorization(fn, e, tangent).adjoint;
    }
    auto norm = shift_to_normalization(f);
    out.profile = std::move(norm.front.profile);
    return out;
}

}  // namespace detail

// Serial continuation around the circle: angles 2 pi j / n_angles, each
// solve warm-started from the previous angle's normalized front. A failed
// angle is retried through inserted midpoint warm starts.
inline SpeedSweep sweep_directions(const ReactionModel& model, const CylinderGrid& grid, int n_angles,
                                   SweepOptions opts = {}) {
    if (grid.dim != 2) throw std::invalid_argument("direction sweeps need dim 2");
    if (n_angles < 2) throw std::invalid_argument("n_angles must be >= 2");
    SpeedSweep sweep;
    sweep.model_hash = model.hash();
    sweep.grid = grid;
    FrontNewton fn(model, grid);

    const ProfileField* warm = nullptr;
    double c_warm = 0.0;
    ProfileField warm_store;
    for (int j = 0; j < n_angles; ++j) {
        const double phi = 2.0 * std::numbers::pi * j / n_angles;
        detail::AngleResult r;
        try {
            r = detail::solve_angle(fn, model, phi, warm, c_warm, opts);
        } catch (const NonConvergence&) {
            if (!warm) throw;
            // Bisection of the continuation step: pull the warm start closer.
            const double prev = sweep.entries.back().angle;
            ProfileField bridge = *warm;
            double cb = c_warm;
            bool ok = false;
            for (int depth = 1; depth <= 4 && !ok; ++depth) {
                const int pieces = 1 << depth;
                try {
                    ProfileField w = bridge;
                    double cw = cb;
                    for (int s = 1; s <= pieces; ++s) {
                        const double ph = prev + (phi - prev) * double(s) / pieces;
                        auto rr = detail::solve_angle(fn, model, ph, &w, cw, opts);
                        w = rr.profile;
                        cw = rr.entry.c;
                        if (s == pieces) r = std::move(rr);
                    }
                    ok = true;
                } catch (const NonConvergence&) {
                }
            }
            if (!ok) throw NonConvergence("sweep failed at angle " + std::to_string(phi), 0.0);
        }
        warm_store = r.profile;
        c_warm = r.entry.c;
        warm = &warm_store;
        sweep.entries.push_back(r.entry);
        sweep.profiles.push_back(std::move(r.profile));
    }

    // Sweep central differences for the derivative cross-check.
    const int nA = int(sweep.entries.size());
    const double dphi = 2.0 * std::numbers::pi / nA;
    for (int j = 0; j < nA; ++j)
        sweep.entries[j].c_prime_fd =
            (sweep.entries[(j + 1) % nA].c - sweep.entries[(j + nA - 1) % nA].c) / (2.0 * dphi);
    return sweep;
}

// Double the angular resolution of a sweep: previous entries are kept, new
// midpoint angles are solved warm-started from their left neighbor.
// Midpoints are independent and may run on several threads.
inline SpeedSweep sweep_refine(const ReactionModel& model, const CylinderGrid& grid, const SpeedSweep& prev,
                               SweepOptions opts = {}) {
    const int nOld = int(prev.entries.size());
    const int nNew = 2 * nOld;
    SpeedSweep sweep;
    sweep.model_hash = model.hash();
    sweep.grid = grid;
    sweep.entries.resize(nNew);
    sweep.profiles.resize(nNew);
    for (int j = 0; j < nOld; ++j) {
        sweep.entries[2 * j] = prev.entries[j];
        sweep.entries[2 * j].angle = 2.0 * std::numbers::pi * (2 * j) / nNew;
        sweep.profiles[2 * j] = prev.profiles[j];
    }

    std::vector<int> mids(nOld);
    for (int j = 0; j < nOld; ++j) mids[j] = j;
    const int nthreads = std::max(1, opts.threads);
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    std::vector<std::string> errors(nOld);
    auto work = [&]() {
        FrontNewton fn(model, grid);
        for (;;) {
            const int j = next.fetch_add(1);
            if (j >= nOld) break;
            const double phi = 2.0 * std::numbers::pi * (2 * j + 1) / nNew;
            try {
                auto r = detail::solve_angle(fn, model, phi, &prev.profiles[j], prev.entries[j].c, opts);
                sweep.entries[2 * j + 1] = r.entry;
                sweep.profiles[2 * j + 1] = std::move(r.profile);
            } catch (const std::exception& ex) {
                errors[j] = ex.what();
            }
        }
    };
    if (nthreads == 1) {
        work();
    } else {
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    for (const auto& e : errors)
        if (!e.empty()) throw NonConvergence("sweep refinement: " + e, 0.0);

    const double dphi = 2.0 * std::numbers::pi / nNew;
    for (int j = 0; j < nNew; ++j)
        sweep.entries[j].c_prime_fd =
            (sweep.entries[(j + 1) % nNew].c - sweep.entries[(j + nNew - 1) % nNew].c) / (2.0 * dphi);
    return sweep;
}

}  // namespace pfront

#endif  // PFRONT_SWEEP_HPP
