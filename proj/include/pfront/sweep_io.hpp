#ifndef PFRONT_SWEEP_IO_HPP
#define PFRONT_SWEEP_IO_HPP

/// Reload a persisted sweep (sweep.csv + front_XXX.pfr) from an output
/// directory, for barrier verification against previously computed fronts.

#include <filesystem>
#include <fstream>

#include "pfront/io.hpp"

namespace pfront {

inline SpeedSweep read_sweep_dir(const std::string& dir) {
    namespace fs = std::filesystem;
    const fs::path csv = fs::path(dir) / "sweep.csv";
    std::ifstream is(csv);
    if (!is) throw std::runtime_error("cannot open " + csv.string());
    SpeedSweep sweep;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("angle,", 0) == 0) continue;
        SweepEntry e;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf,%lf,%d", &e.angle, &e.c, &e.residual_norm,
                        &e.identity_residual, &e.mu_plus, &e.mu_minus, &e.newton_iters) != 7)
            throw std::runtime_error(csv.string() + ": malformed row '" + line + "'");
        sweep.entries.push_back(e);
    }
    if (sweep.entries.empty()) throw std::runtime_error(csv.string() + ": no entries");
    for (std::size_t j = 0; j < sweep.entries.size(); ++j) {
        char name[64];
        std::snprintf(name, sizeof name, "front_%03zu.pfr", j);
        PulsatingFront f = read_front_binary((fs::path(dir) / name).string());
        if (j == 0) sweep.grid = f.profile.grid;
        sweep.profiles.push_back(std::move(f.profile));
    }
    return sweep;
}

}  // namespace pfront

#endif  // PFRONT_SWEEP_IO_HPP
