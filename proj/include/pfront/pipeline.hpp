#ifndef PFRONT_PIPELINE_HPP
#define PFRONT_PIPELINE_HPP

/// Experiment orchestration: medium -> front/sweep -> derivative -> spread
/// -> verify, with per-stage artifacts. A failing stage stops its dependents;
/// independent stages still run. Exit is nonzero iff any requested check
/// failed or a stage errored.

#include <filesystem>
#include <iostream>

#include "pfront/barrier.hpp"
#include "pfront/config.hpp"
#include "pfront/io.hpp"
#include "pfront/sweep_io.hpp"

namespace pfront {

struct StageSet {
    bool medium = false, front = false, sweep = false, derivative = false, spread = false, verify = false;
};

inline StageSet stages_for_command(const std::string& cmd, const RunConfig& cfg) {
    StageSet s;
    s.medium = true;
    if (cmd == "medium") return s;
    if (cmd == "front") {
        s.front = true;
        return s;
    }
    if (cmd == "sweep") {
        s.sweep = true;
        return s;
    }
    if (cmd == "derivative") {
        s.sweep = s.derivative = true;
        return s;
    }
    if (cmd == "spread") {
        s.spread = true;
        s.sweep = cfg.sandwich && cfg.angles > 0;
        s.verify = cfg.sandwich;
        return s;
    }
    if (cmd == "verify") {
        s.verify = true;
        s.front = cfg.verify_pulsating || cfg.barriers == "tail" || cfg.dim == 1;
        s.sweep = (cfg.angles > 0) &&
                  (cfg.sandwich || cfg.barriers == "sub" || cfg.barriers == "super" || cfg.barriers == "all");
        s.spread = cfg.sandwich;
        return s;
    }
    // all
    s.front = true;
    s.sweep = cfg.angles > 0 && cfg.dim == 2;
    s.derivative = s.sweep;
    s.spread = !cfg.experiments.empty() && cfg.dim == 2;
    s.verify = cfg.verify_pulsating || cfg.barriers != "none" || cfg.sandwich;
    return s;
}

// Build a two-direction pseudo-sweep (e = +1, e = -1) for dim-1 barrier use.
inline SpeedSweep two_direction_sweep(const ReactionModel& model, const CylinderGrid& grid) {
    SpeedSweep sweep;
    sweep.model_hash = model.hash();
    sweep.grid = grid;
    for (double sgn : {1.0, -1.0}) {
        auto f = solve_front(model, {sgn, 0.0}, grid);
        auto d = fit_decay(f, model);
        SweepEntry e;
        e.angle = sgn > 0 ? 0.0 : std::numbers::pi;
        e.c = f.c;
        e.residual_norm = f.residual_norm;
        e.identity_residual = speed_identity_residual(f, model);
        e.mu_plus = d.mu_plus;
        e.mu_minus = d.mu_minus;
        e.newton_iters = f.newton_iters;
        sweep.entries.push_back(e);
        sweep.profiles.push_back(shift_to_normalization(f).front.profile);
    }
    return sweep;
}

// Zone-covering certificate for a barrier field: samples every structural
// zone of the moving coordinate (constant plateau, glue, interface core,
// tail) by mapping zeta windows to radii per time. Returns the worst result.
inline CertificateResult check_barrier_zones(const BarrierField& field, const ReactionModel& model,
                                             double t0, double t1, double dx, double tol_disc,
                                             double tail_extension = 0.0) {
    const auto& sp = field.spec();
    const int orient = field.kind() == BarrierKind::Subsolution ? +1 : -1;
    CertificateResult worst;
    worst.tol_disc = tol_disc;
    worst.pass = true;
    struct Window {
        double z0, z1;
        int nr;
    };
    const double zc = sp.C, ze = sp.xi_eps;
    // The tail stops short of the side-specific clamp abscissa.
    // tail_extension > 0 pushes past it; only meaningful for sign-flipped
    // control fields, whose clamp never engages.
    const double clamp_abscissa =
        field.kind() == BarrierKind::Subsolution ? sp.Cp_plus : sp.Cp_minus;
    std::vector<Window> wins = {
        {-ze - zc - 30.0, -ze - zc, 40},                            // constant plateau
        {-ze - zc, -zc, 400},                                       // glue
        {-zc - 2.0, zc + 2.0, 300},                                 // interface core
        {zc, clamp_abscissa - 6.0 * dx + tail_extension, 200},      // tail
    };
    if (field.kind() == BarrierKind::Supersolution)
        for (auto& w : wins) {
            const double a = -w.z1, b = -w.z0;
            w.z0 = a;
            w.z1 = b;
        }
    const int nt = 6;
    for (int it = 0; it < nt; ++it) {
        const double t = t0 + (t1 - t0) * double(it) / (nt - 1);
        const double shift = field.kind() == BarrierKind::Subsolution ? sp.sub_shift(t) : sp.super_shift(t);
        for (const auto& w : wins) {
            CheckRegion reg;
            reg.t0 = reg.t1 = t;
            reg.nt = 1;
            // zeta -> radius: sub r = zeta + shift; super r = shift - zeta.
            double r0, r1;
            if (field.kind() == BarrierKind::Subsolution) {
                r0 = w.z0 + shift;
                r1 = w.z1 + shift;
            } else {
                r0 = shift - w.z1;
                r1 = shift - w.z0;
            }
            r0 = std::max(r0, sp.C_eps);
            r1 = std::max(r1, sp.C_eps);
            if (r1 - r0 < 4.0 * dx) continue;
            reg.r0 = r0;
            reg.r1 = r1;
            reg.nr = w.nr;
            reg.nphi = field.dim() == 1 ? 2 : 4;
            reg.dx = dx;
            auto res = check_parabolic_inequality(field, model, reg, orient, tol_disc);
            worst.samples += res.samples;
            if (res.max_violation > worst.max_violation) {
                worst.max_violation = res.max_violation;
                worst.worst_t = res.worst_t;
                worst.worst_r = res.worst_r;
                worst.worst_phi = res.worst_phi;
            }
        }
    }
    worst.pass = worst.max_violation <= tol_disc;
    return worst;
}

inline int run_pipeline(const RunConfig& cfg, const std::string& cmd, const std::string& out_override,
                        int threads, std::ostream& log) {
    namespace fs = std::filesystem;
    const std::string out = out_override.empty() ? cfg.out_dir : out_override;
    fs::create_directories(out);
    const StageSet stages = stages_for_command(cmd, cfg);
    int failures = 0;
    auto stage_fail = [&](const std::string& name, const std::exception& ex) {
        log << "[stage " << name << "] FAILED: " << ex.what() << "\n";
        ++failures;
    };

    // ---- medium ----------------------------------------------------------
    std::optional<ReactionModel> model;
    try {
        model = cfg.model();
        std::ofstream os(out + "/medium.txt");
        os << "# config=" << std::hex << cfg.hash << std::dec << "\n";
        os << "dim = " << model->dim() << "\n";
        os << "theta0 = " << fmt_g(cfg.theta0) << "\n";
        os << "modes = " << cfg.modes.size() << "\n";
        os << "theta_min = " << fmt_g(model->theta_min()) << "\n";
        os << "theta_max = " << fmt_g(model->theta_max()) << "\n";
        os << "gamma = " << fmt_g(model->gamma()) << "\n";
        os << "sigma = " << fmt_g(model->sigma()) << "\n";
        os << "lipschitz = " << fmt_g(model->lipschitz_L()) << "\n";
        const double mass = model->mass_integral();
        os << "mass_integral = " << fmt_g(mass) << "\n";
        // Uniform speed cap logged per medium (boundedness of any sweep).
        double fmax = 0.0;
        for (double th : {model->theta_min(), model->theta_max()})
            for (int q = 0; q <= 2000; ++q) {
                const double u = q / 2000.0;
                fmax = std::max(fmax, std::abs(model->f_theta(th, u)));
            }
        os << "speed_cap = " << fmt_g(2.0 * (fmax / model->gamma() + std::sqrt(model->lipschitz_L()) + 1.0))
           << "\n";
        log << "[stage medium] ok (mass integral " << fmt_g(mass) << ")\n";
    } catch (const std::exception& ex) {
        stage_fail("medium", ex);
        return 1;  // nothing else can run
    }

    const CylinderGrid grid = cfg.cylinder_grid();

    // ---- front ------------------------------------------------------------
    std::optional<PulsatingFront> front;
    if (stages.front) {
        try {
            Vec2 e{1.0, 0.0};
            if (cfg.dim == 2) {
                const double a = cfg.angle_deg * std::numbers::pi / 180.0;
                e = {std::cos(a), std::sin(a)};
            } else if (cfg.angle_deg != 0.0) {
                e = {-1.0, 0.0};
            }
            front = solve_front(model.value(), e, grid, std::nullopt, std::nullopt,
                                SolveOptions{cfg.tol, cfg.max_iters, true});
            for (const auto& w : front->warnings) log << "[stage front] warning: " << w << "\n";
            write_front_binary(out + "/front.pfr", *front, cfg.hash);
            std::vector<int> ys = {0};
            if (grid.slice_size() > 1) ys.push_back(grid.slice_size() / 2);
            write_profile_csv(out + "/front.csv", *front, ys, cfg.hash);
            log << "[stage front] ok (c = " << fmt_g(front->c) << ", " << front->newton_iters
                << " iterations)\n";
        } catch (const std::exception& ex) {
            stage_fail("front", ex);
        }
    }

    // ---- sweep (and derivative) --------------------------------------------
    std::optional<SpeedSweep> sweep;
    if (stages.sweep && cfg.dim == 2) {
        try {
            SweepOptions so;
            so.with_derivative = stages.derivative;
            so.solve = SolveOptions{cfg.tol, cfg.max_iters, true};
            so.threads = threads;
            sweep = sweep_directions(model.value(), grid, cfg.angles, so);
            write_sweep_csv(out + "/sweep.csv", *sweep, cfg.hash);
            for (std::size_t j = 0; j < sweep->profiles.size(); ++j) {
                PulsatingFront f;
                f.e = {std::cos(sweep->entries[j].angle), std::sin(sweep->entries[j].angle)};
                f.c = sweep->entries[j].c;
                f.profile = sweep->profiles[j];
                f.model_hash = sweep->model_hash;
                f.residual_norm = sweep->entries[j].residual_norm;
                char name[64];
                std::snprintf(name, sizeof name, "/front_%03zu.pfr", j);
                write_front_binary(out + name, f, cfg.hash);
            }
            if (stages.derivative) write_derivative_csv(out + "/derivative.csv", *sweep, cfg.hash);
            log << "[stage sweep] ok (" << cfg.angles << " angles, c in [" << fmt_g(sweep->c_min()) << ", "
                << fmt_g(sweep->c_max()) << "])\n";
        } catch (const std::exception& ex) {
            stage_fail("sweep", ex);
        }
    }

    // ---- spread -------------------------------------------------------------
    std::vector<InterfaceTrack> tracks;
    if (stages.spread) {
        for (std::size_t j = 0; j < cfg.experiments.size(); ++j) {
            const auto& ex = cfg.experiments[j];
            try {
                if (cfg.dim != 2) throw std::invalid_argument("spread experiments need dim 2");
                BoxGrid box;
                box.dim = 2;
                box.W = cfg.W;
                box.n_b = cfg.n_b;
                for (const auto& w : box.check(ex.R + 0.35 * ex.tmax))
                    log << "[stage spread] warning: " << w << "\n";
                CauchyState state = ex.kind == "vR" ? init_vR(box, model.value(), ex.R, ex.level)
                                                    : init_omegaR(box, model.value(), ex.R, ex.level);
                const double dt = cfg.dt > 0.0 ? cfg.dt : default_imex_dt(model.value());
                ImexStepper stepper(box, model.value(), dt);
                InterfaceTrack track;
                track.K = cfg.rays;
                track_interface(track, state);
                double next_record = ex.record_every;
                while (state.t < ex.tmax - 1e-9) {
                    stepper.step(state);
                    if (state.t >= next_record - 1e-9) {
                        track_interface(track, state);
                        next_record += ex.record_every;
                    }
                }
                char name[64];
                std::snprintf(name, sizeof name, "/trajectory_%zu.csv", j);
                write_trajectory_csv(out + name, track, cfg.hash);
                tracks.push_back(std::move(track));
                log << "[stage spread] experiment " << j << " ok (" << ex.kind << ", R = " << fmt_g(ex.R)
                    << ")\n";
            } catch (const std::exception& exn) {
                stage_fail("spread", exn);
            }
        }
    }

    // ---- verify ---------------------------------------------------------------
    if (stages.verify) {
        // Spreading-rate sandwich verdict against the sweep's speed band.
        if (cfg.sandwich) {
            try {
                if (!sweep) throw std::runtime_error("sandwich verdict needs a converged sweep");
                if (tracks.empty()) throw std::runtime_error("sandwich verdict needs a spread experiment");
                std::ofstream os(out + "/verdict.txt");
                os << "# config=" << std::hex << cfg.hash << std::dec << "\n";
                bool all_pass = true;
                for (std::size_t j = 0; j < tracks.size(); ++j) {
                    auto rep = estimate_speeds(tracks[j], cfg.window_t1, cfg.window_t2, sweep->c_min(),
                                               sweep->c_max(), 0.02);
                    os << "[experiment " << j << "]\n";
                    write_spread_report(os, rep);
                    all_pass = all_pass && rep.pass;
                }
                if (!all_pass) {
                    log << "[stage verify] sandwich verdict FAIL\n";
                    ++failures;
                } else {
                    log << "[stage verify] sandwich verdict PASS\n";
                }
            } catch (const std::exception& ex) {
                stage_fail("verify/sandwich", ex);
            }
        }

        // Pulsating space-time relation.
        if (cfg.verify_pulsating) {
            try {
                if (!front) throw std::runtime_error("pulsating check needs a converged front");
                PulsatingRelationOptions opt;
                opt.W = std::min(cfg.W, 24.0);
                const double defect = check_pulsating_relation(*front, model.value(), cfg.pulsating_k, opt);
                std::ofstream os(out + "/pulsating.txt");
                os << "# config=" << std::hex << cfg.hash << std::dec << "\n";
                os << "k = " << cfg.pulsating_k[0] << " " << cfg.pulsating_k[1] << "\n";
                os << "defect = " << fmt_g(defect) << "\n";
                os << "verdict = " << (defect <= 1e-2 ? "PASS" : "FAIL") << "\n";
                if (defect > 1e-2) ++failures;
                log << "[stage verify] pulsating relation defect " << fmt_g(defect) << "\n";
            } catch (const std::exception& ex) {
                stage_fail("verify/pulsating", ex);
            }
        }

        // Barrier certificates.
        if (cfg.barriers != "none") {
            try {
                std::ofstream os(out + "/certificates.txt");
                os << "# config=" << std::hex << cfg.hash << std::dec << "\n";
                const SpeedSweep* sw = sweep ? &*sweep : nullptr;
                SpeedSweep sw1;
                if (!sw && !cfg.sweep_dir.empty()) {
                    sw1 = read_sweep_dir(cfg.sweep_dir);
                    sw = &sw1;
                }
                if (!sw) {
                    if (cfg.dim != 1) throw std::runtime_error("barrier checks need a sweep for dim 2");
                    sw1 = two_direction_sweep(model.value(), grid);
                    sw = &sw1;
                }
                const double c_lo = sw->c_min();
                if (c_lo <= 0.0) throw std::runtime_error("barrier checks assume positive speeds");
                const double eps = cfg.barrier_eps > 0.0 ? cfg.barrier_eps : c_lo / 2.0;
                const double mu_front = sw->entries.front().mu_plus;
                const double dx = grid.h();
                const double tol = calibrate_tol_disc(model.value(), c_lo, mu_front, cfg.dim, dx, 1e-3);
                os << "tol_disc = " << fmt_g(tol) << "\n";
                bool all_pass = true;

                if (cfg.barriers == "tail" || cfg.barriers == "all") {
                    ExpTailField tail;
                    tail.dim = cfg.dim;
                    tail.e = {1.0, 0.0};
                    tail.c = c_lo;
                    tail.mu = std::sqrt(model->gamma());
                    tail.A1 = 0.0;
                    tail.amp = model->sigma();
                    CheckRegion reg;
                    reg.t0 = 0.0;
                    reg.t1 = 5.0;
                    reg.nt = 6;
                    reg.r0 = -10.0;
                    reg.r1 = 10.0;
                    reg.nr = 200;
                    reg.dx = dx;
                    auto chk = exp_tail_check(tail, model->gamma(), reg);
                    const bool ok = chk.max_abs_error <= 1e-6 && chk.min_functional >= -1e-9;
                    os << "[tail]\nmax_abs_error = " << fmt_g(chk.max_abs_error)
                       << "\nmin_functional = " << fmt_g(chk.min_functional) << "\nsamples = " << chk.samples
                       << "\nverdict = " << (ok ? "PASS" : "FAIL") << "\n";
                    all_pass = all_pass && ok;
                }
                if (cfg.barriers == "sub" || cfg.barriers == "super" || cfg.barriers == "all") {
                    auto spec = derive_constants(*sw, model.value(), eps);
                    if (cfg.barriers == "sub" || cfg.barriers == "all") {
                        BarrierField sub(*sw, spec, BarrierKind::Subsolution);
                        auto res = check_barrier_zones(sub, model.value(), spec.T, spec.T + 20.0, dx, tol);
                        os << "[sub]\nmax_violation = " << fmt_g(res.max_violation)
                           << "\nsamples = " << res.samples << "\nverdict = " << (res.pass ? "PASS" : "FAIL")
                           << "\n";
                        all_pass = all_pass && res.pass;
                    }
                    if (cfg.barriers == "super" || cfg.barriers == "all") {
                        BarrierField sup(*sw, spec, BarrierKind::Supersolution);
                        const double t1 = std::min(spec.tau_eps + 20.0, spec.t_end - 1.0);
                        auto res = check_barrier_zones(sup, model.value(), spec.tau_eps + 1e-3, t1, dx, tol);
                        os << "[super]\nmax_violation = " << fmt_g(res.max_violation)
                           << "\nsamples = " << res.samples << "\nverdict = " << (res.pass ? "PASS" : "FAIL")
                           << "\n";
                        all_pass = all_pass && res.pass;
                    }
                }
                if (!all_pass) ++failures;
                log << "[stage verify] barrier certificates " << (all_pass ? "PASS" : "FAIL") << "\n";
            } catch (const std::exception& ex) {
                stage_fail("verify/barriers", ex);
            }
        }
    }

    return failures == 0 ? 0 : 1;
}

}  // namespace pfront

#endif  // PFRONT_PIPELINE_HPP
