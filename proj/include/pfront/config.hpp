#ifndef PFRONT_CONFIG_HPP
#define PFRONT_CONFIG_HPP

/// Line-oriented run configuration: [section] headers and key = value pairs.
/// Unknown sections or keys are errors, duplicate scalar keys are errors
/// naming both lines; `mode` and `experiment` are repeatable.

#include <map>
#include <optional>
#include <sstream>

#include "pfront/grid.hpp"
#include "pfront/reaction.hpp"

namespace pfront {

struct CauchyExperiment {
    std::string kind;  // "vR" or "omegaR"
    double R = 10.0;
    double level = 0.6;  // beta for vR, alpha for omegaR
    double tmax = 50.0;
    double record_every = 1.0;
};

struct RunConfig {
    // [model]
    int dim = 1;
    double theta0 = 0.3;
    std::vector<ThetaMode> modes;
    // [cylinder]
    double L = 40.0;
    int n_xi = 2048;
    std::array<int, 2> n_y{0, 0};  // 0 = derive from the medium
    // [solver]
    double tol = 1e-10;
    int max_iters = 50;
    // [front]
    double angle_deg = 0.0;
    // [sweep]
    int angles = 0;
    // [box]
    double W = 32.0;
    int n_b = 512;
    double dt = 0.0;  // 0 = default min(0.25, 0.5/L)
    int rays = 64;
    // [cauchy]
    std::vector<CauchyExperiment> experiments;
    // [verify]
    bool verify_pulsating = false;
    std::array<int, 2> pulsating_k{1, 0};
    std::string barriers = "none";  // none | tail | sub | super | all
    double barrier_eps = 0.0;       // 0 = half the minimal sweep speed
    bool sandwich = false;
    double window_t1 = 30.0, window_t2 = 60.0;
    // [output]
    std::string out_dir = "out";

    std::string raw_text;
    std::uint64_t hash = 0;
    std::string sweep_dir;  // CLI-only: reuse a persisted sweep for barrier checks

    ReactionModel model() const { return make_cubic_medium(dim, theta0, modes); }

    CylinderGrid cylinder_grid() const {
        CylinderGrid g;
        g.dim = dim;
        g.L = L;
        g.n_xi = n_xi;
        for (int d = 0; d < 2; ++d) {
            if (n_y[d] > 0) {
                g.n_y[d] = n_y[d];
            } else if (d < dim) {
                bool depends = false;
                for (const auto& m : modes)
                    if (m.k[d] != 0) depends = true;
                g.n_y[d] = depends ? 16 : 1;
            } else {
                g.n_y[d] = 1;
            }
        }
        g.validate();
        return g;
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

inline std::vector<double> parse_numbers(const std::string& v, int line_no) {
    std::vector<double> out;
    std::istringstream is(v);
    double x;
    while (is >> x) out.push_back(x);
    std::string rest;
    is.clear();
    if (is >> rest)
        throw ConfigError("line " + std::to_string(line_no) + ": expected numbers, got '" + v + "'");
    if (out.empty()) throw ConfigError("line " + std::to_string(line_no) + ": missing numeric value");
    return out;
}

}  // namespace detail

inline RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    cfg.raw_text = text;
    cfg.hash = fnv1a64(text);

    static const std::map<std::string, std::vector<std::string>> known = {
        {"model", {"dim", "theta0", "mode"}},
        {"cylinder", {"L", "n_xi", "n_y"}},
        {"solver", {"tol", "max_iters"}},
        {"front", {"angle"}},
        {"sweep", {"angles"}},
        {"box", {"W", "n_b", "dt", "rays"}},
        {"cauchy", {"experiment"}},
        {"verify", {"pulsating", "barriers", "eps", "sandwich", "window"}},
        {"output", {"dir"}},
    };
    static const std::vector<std::string> repeatable = {"mode", "experiment"};

    std::map<std::string, int> seen;  // "section.key" -> first line
    std::istringstream is(text);
    std::string line, section;
    bool theta0_seen = false;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        const auto hash_pos = line.find('#');
        if (hash_pos != std::string::npos) line = line.substr(0, hash_pos);
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(line_no) + ": malformed section header");
            section = detail::trim(line.substr(1, line.size() - 2));
            if (!known.count(section))
                throw ConfigError("line " + std::to_string(line_no) + ": unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string val = detail::trim(line.substr(eq + 1));
        if (section.empty())
            throw ConfigError("line " + std::to_string(line_no) + ": key outside any [section]");
        const auto& keys = known.at(section);
        if (std::find(keys.begin(), keys.end(), key) == keys.end())
            throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "' in [" +
                              section + "]");
        const std::string qual = section + "." + key;
        const bool rep = std::find(repeatable.begin(), repeatable.end(), key) != repeatable.end();
        if (!rep) {
            auto it = seen.find(qual);
            if (it != seen.end())
                throw ConfigError("duplicate key '" + key + "' in [" + section + "]: lines " +
                                  std::to_string(it->second) + " and " + std::to_string(line_no));
            seen[qual] = line_no;
        }

        auto nums = [&]() { return detail::parse_numbers(val, line_no); };
        if (section == "model") {
            if (key == "dim") {
                cfg.dim = int(nums()[0]);
                if (cfg.dim != 1 && cfg.dim != 2)
                    throw ConfigError("line " + std::to_string(line_no) + ": dim must be 1 or 2");
            } else if (key == "theta0") {
                cfg.theta0 = nums()[0];
                theta0_seen = true;
            } else {  // mode
                auto v = nums();
                ThetaMode m;
                if (v.size() == 3) {
                    m.k = {int(v[0]), 0};
                    m.amp = v[1];
                    m.phase = v[2];
                } else if (v.size() == 4) {
                    m.k = {int(v[0]), int(v[1])};
                    m.amp = v[2];
                    m.phase = v[3];
                } else {
                    throw ConfigError("line " + std::to_string(line_no) +
                                      ": mode needs 'k amp phase' (dim 1) or 'k1 k2 amp phase' (dim 2)");
                }
                cfg.modes.push_back(m);
            }
        } else if (section == "cylinder") {
            if (key == "L")
                cfg.L = nums()[0];
            else if (key == "n_xi")
                cfg.n_xi = int(nums()[0]);
            else {
                auto v = nums();
                cfg.n_y[0] = int(v[0]);
                cfg.n_y[1] = v.size() > 1 ? int(v[1]) : 0;
            }
        } else if (section == "solver") {
            if (key == "tol")
                cfg.tol = nums()[0];
            else
                cfg.max_iters = int(nums()[0]);
        } else if (section == "front") {
            cfg.angle_deg = nums()[0];
        } else if (section == "sweep") {
            cfg.angles = int(nums()[0]);
        } else if (section == "box") {
            if (key == "W")
                cfg.W = nums()[0];
            else if (key == "n_b")
                cfg.n_b = int(nums()[0]);
            else if (key == "dt")
                cfg.dt = nums()[0];
            else
                cfg.rays = int(nums()[0]);
        } else if (section == "cauchy") {
            std::istringstream es(val);
            CauchyExperiment e;
            if (!(es >> e.kind >> e.R >> e.level >> e.tmax))
                throw ConfigError("line " + std::to_string(line_no) +
                                  ": experiment needs 'vR|omegaR R level tmax [record_every]'");
            if (!(es >> e.record_every)) e.record_every = 1.0;
            if (e.kind != "vR" && e.kind != "omegaR")
                throw ConfigError("line " + std::to_string(line_no) + ": experiment kind must be vR or omegaR");
            cfg.experiments.push_back(e);
        } else if (section == "verify") {
            if (key == "pulsating") {
                auto v = nums();
                cfg.verify_pulsating = true;
                cfg.pulsating_k = {int(v[0]), v.size() > 1 ? int(v[1]) : 0};
            } else if (key == "barriers") {
                if (val != "none" && val != "tail" && val != "sub" && val != "super" && val != "all")
                    throw ConfigError("line " + std::to_string(line_no) +
                                      ": barriers must be none|tail|sub|super|all");
                cfg.barriers = val;
            } else if (key == "eps") {
                cfg.barrier_eps = nums()[0];
            } else if (key == "sandwich") {
                cfg.sandwich = (val == "on" || val == "true" || val == "1");
            } else {
                auto v = nums();
                if (v.size() != 2)
                    throw ConfigError("line " + std::to_string(line_no) + ": window needs 't1 t2'");
                cfg.window_t1 = v[0];
                cfg.window_t2 = v[1];
            }
        } else if (section == "output") {
            cfg.out_dir = val;
        }
    }
    if (!theta0_seen) throw ConfigError("missing required key theta0 in [model]");

    // Semantic validation against the medium.
    ReactionModel model = cfg.model();  // throws on inadmissible theta field
    for (const auto& e : cfg.experiments) {
        if (e.kind == "vR" && !(e.level > model.theta_max() && e.level < 1.0))
            throw ConfigError("experiment vR: beta must satisfy max theta_x < beta < 1 (violated: beta = " +
                              std::to_string(e.level) + ", max theta = " + std::to_string(model.theta_max()) +
                              ")");
        if (e.kind == "omegaR" && !(e.level > 0.0 && e.level < model.theta_min()))
            throw ConfigError(
                "experiment omegaR: alpha must satisfy 0 < alpha < inf theta_x (violated: alpha = " +
                std::to_string(e.level) + ", min theta = " + std::to_string(model.theta_min()) + ")");
        if (!(e.R > 0.0 && e.R <= cfg.W / 2.0)) throw ConfigError("experiment radius must satisfy 0 < R <= W/2");
    }
    if (cfg.sandwich && cfg.angles <= 0)
        throw ConfigError("[verify] sandwich needs a direction sweep: set [sweep] angles > 0");
    if (cfg.sandwich && cfg.experiments.empty())
        throw ConfigError("[verify] sandwich needs a [cauchy] experiment");
    if ((cfg.barriers == "sub" || cfg.barriers == "super" || cfg.barriers == "all") && cfg.angles <= 0 &&
        cfg.dim == 2)
        throw ConfigError("[verify] barriers need a direction sweep: set [sweep] angles > 0");
    if (cfg.verify_pulsating && cfg.dim == 2 && cfg.pulsating_k[0] == 0 && cfg.pulsating_k[1] == 0)
        throw ConfigError("[verify] pulsating needs a nonzero cell vector");
    cfg.cylinder_grid();  // validates grid invariants
    return cfg;
}

}  // namespace pfront

#endif  // PFRONT_CONFIG_HPP
