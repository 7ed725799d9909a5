// pfront: pulsating fronts and spreading speeds for periodic bistable media.
//
// Subcommands: medium, front, sweep, derivative, spread, verify, all.
// Each takes --config <file>; artifacts land in --out (default: the config's
// [output] dir).

#include <CLI11.hpp>
#include <fstream>
#include <sstream>

#include "pfront/pipeline.hpp"

namespace {

std::string slurp(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config file " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pulsating-front toolkit for spatially periodic bistable media"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    std::string config_path, out_dir;
    int threads = 1;
    unsigned long seed = 0;  // reserved; no stochastic components at present
    app.add_option("--config", config_path, "run configuration file")->required();
    app.add_option("--out", out_dir, "output directory (overrides [output] dir)");
    app.add_option("--threads", threads, "worker threads for independent solves")->default_val(1);
    app.add_option("--seed", seed, "reserved")->default_val(0);

    std::string barrier_kind, sweep_dir, medium_file;
    double barrier_eps = 0.0;
    double exp_R = 0.0, exp_alpha = 0.0, exp_beta = 0.0, exp_tmax = 0.0, exp_record = 0.0;
    int rays = 0;

    for (const char* name : {"medium", "front", "sweep", "derivative", "all"})
        app.add_subcommand(name);

    auto* spread = app.add_subcommand("spread");
    spread->add_option("--medium", medium_file, "config file supplying the [model] section");
    spread->add_option("--R", exp_R, "initial bubble radius");
    spread->add_option("--alpha", exp_alpha, "omega_R initial level (inside the ball)");
    spread->add_option("--beta", exp_beta, "v_R initial level (inside the ball)");
    spread->add_option("--tmax", exp_tmax, "integration horizon");
    spread->add_option("--record-every", exp_record, "interface recording cadence");
    spread->add_option("--rays", rays, "level-set rays");

    auto add_verify_opts = [&](CLI::App* cmd) {
        cmd->add_option("--kind", barrier_kind, "barrier kind: sub|super|tail|all");
        cmd->add_option("--eps", barrier_eps, "barrier speed offset epsilon");
        cmd->add_option("--sweep", sweep_dir, "directory with sweep.csv and front_XXX.pfr to reuse");
    };
    add_verify_opts(app.add_subcommand("verify"));
    add_verify_opts(app.add_subcommand("verify-barrier"));

    CLI11_PARSE(app, argc, argv);

    try {
        pfront::RunConfig cfg = pfront::parse_config(slurp(config_path));
        std::string cmd = app.get_subcommands().front()->get_name();
        if (cmd == "verify-barrier") {
            cmd = "verify";
            if (barrier_kind.empty()) barrier_kind = "all";
            cfg.sandwich = false;
            cfg.verify_pulsating = false;
        }
        if (!barrier_kind.empty()) {
            if (barrier_kind != "sub" && barrier_kind != "super" && barrier_kind != "tail" &&
                barrier_kind != "all")
                throw pfront::ConfigError("--kind must be sub|super|tail|all");
            cfg.barriers = barrier_kind;
        }
        if (barrier_eps > 0.0) cfg.barrier_eps = barrier_eps;
        cfg.sweep_dir = sweep_dir;

        if (cmd == "spread") {
            if (!medium_file.empty()) {
                // Take the medium (and its grid defaults) from another config.
                pfront::RunConfig mc = pfront::parse_config(slurp(medium_file));
                cfg.dim = mc.dim;
                cfg.theta0 = mc.theta0;
                cfg.modes = mc.modes;
            }
            if (rays > 0) cfg.rays = rays;
            if (exp_R > 0.0) {
                pfront::CauchyExperiment e;
                e.R = exp_R;
                if (exp_beta > 0.0) {
                    e.kind = "vR";
                    e.level = exp_beta;
                } else if (exp_alpha > 0.0) {
                    e.kind = "omegaR";
                    e.level = exp_alpha;
                } else {
                    throw pfront::ConfigError("--R needs --beta (v_R run) or --alpha (omega_R run)");
                }
                e.tmax = exp_tmax > 0.0 ? exp_tmax : 50.0;
                e.record_every = exp_record > 0.0 ? exp_record : 1.0;
                cfg.experiments = {e};
                cfg.sandwich = false;  // flag-built runs report trajectories only
            }
            if (cfg.experiments.empty())
                throw pfront::ConfigError("spread needs a [cauchy] experiment or --R with --alpha/--beta");
        }
        return pfront::run_pipeline(cfg, cmd, out_dir, threads, std::cout);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }
}
