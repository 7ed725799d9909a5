#ifndef PFRONT_IO_HPP
#define PFRONT_IO_HPP

/// Artifact persistence: the PFR1 front binary, CSV emitters with fixed
/// float formatting (9 significant digits), and flat-text reports. Every
/// artifact embeds the configuration hash.

#include <cstdio>
#include <cstring>
#include <fstream>

#include "pfront/interface_track.hpp"
#include "pfront/sweep.hpp"

namespace pfront {

inline std::string fmt_g(double v, int digits = 9) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

namespace detail {

template <class T>
void put(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}
template <class T>
void get(std::istream& is, T& v) {
    is.read(reinterpret_cast<char*>(&v), sizeof v);
}

}  // namespace detail

// Front binary: magic "PFR1", little-endian u32 dims (N, n_xi, n_y per dim),
// f64 L, f64 c, f64 e components, row-major f64 values; an 8-byte-tagged
// footer carries the configuration hash.
inline void write_front_binary(const std::string& path, const PulsatingFront& f, std::uint64_t config_hash) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    const auto& g = f.profile.grid;
    os.write("PFR1", 4);
    detail::put(os, std::uint32_t(g.dim));
    detail::put(os, std::uint32_t(g.n_xi));
    for (int d = 0; d < g.dim; ++d) detail::put(os, std::uint32_t(g.n_y[d]));
    detail::put(os, double(g.L));
    detail::put(os, double(f.c));
    for (int d = 0; d < g.dim; ++d) detail::put(os, double(f.e[d]));
    os.write(reinterpret_cast<const char*>(f.profile.values.data()),
             std::streamsize(f.profile.values.size() * sizeof(double)));
    os.write("CFGH", 4);
    detail::put(os, config_hash);
}

inline PulsatingFront read_front_binary(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    char magic[4];
    is.read(magic, 4);
    if (std::memcmp(magic, "PFR1", 4) != 0) throw std::runtime_error(path + ": bad magic");
    std::uint32_t dim = 0, n_xi = 0;
    detail::get(is, dim);
    detail::get(is, n_xi);
    CylinderGrid g;
    g.dim = int(dim);
    g.n_xi = int(n_xi);
    g.n_y = {1, 1};
    for (int d = 0; d < g.dim; ++d) {
        std::uint32_t ny = 0;
        detail::get(is, ny);
        g.n_y[d] = int(ny);
    }
    detail::get(is, g.L);
    PulsatingFront f;
    detail::get(is, f.c);
    f.e = {0.0, 0.0};
    for (int d = 0; d < g.dim; ++d) detail::get(is, f.e[d]);
    f.profile = ProfileField(g);
    is.read(reinterpret_cast<char*>(f.profile.values.data()),
            std::streamsize(f.profile.values.size() * sizeof(double)));
    if (!is) throw std::runtime_error(path + ": truncated front file");
    return f;
}

// Sweep table: angle, c, residual, identity_residual, mu_plus, mu_minus,
// newton_iters.
inline void write_sweep_csv(const std::string& path, const SpeedSweep& sweep, std::uint64_t config_hash) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    os << "# config=" << std::hex << config_hash << std::dec << "\n";
    os << "angle,c,residual,identity_residual,mu_plus,mu_minus,newton_iters\n";
    for (const auto& e : sweep.entries)
        os << fmt_g(e.angle) << ',' << fmt_g(e.c) << ',' << fmt_g(e.residual_norm) << ','
           << fmt_g(e.identity_residual) << ',' << fmt_g(e.mu_plus) << ',' << fmt_g(e.mu_minus) << ','
           << e.newton_iters << "\n";
}

inline void write_derivative_csv(const std::string& path, const SpeedSweep& sweep, std::uint64_t config_hash) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    os << "# config=" << std::hex << config_hash << std::dec << "\n";
    os << "angle,c,c_prime_adjoint,c_prime_fd\n";
    for (const auto& e : sweep.entries)
        os << fmt_g(e.angle) << ',' << fmt_g(e.c) << ',' << fmt_g(e.c_prime) << ',' << fmt_g(e.c_prime_fd)
           << "\n";
}

// xi-profiles at fixed y indices.
inline void write_profile_csv(const std::string& path, const PulsatingFront& f,
                              const std::vector<int>& y_indices, std::uint64_t config_hash) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    os << "# config=" << std::hex << config_hash << std::dec << "\n";
    os << "xi";
    for (int m : y_indices) os << ",u_y" << m;
    os << "\n";
    const auto& g = f.profile.grid;
    for (int i = 0; i < g.n_xi; ++i) {
        os << fmt_g(g.xi(i));
        for (int m : y_indices) os << ',' << fmt_g(f.profile.at(i, m));
        os << "\n";
    }
}

// Trajectory table: time, per-ray radii, width diagnostic.
inline void write_trajectory_csv(const std::string& path, const InterfaceTrack& track,
                                 std::uint64_t config_hash) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    os << "# config=" << std::hex << config_hash << std::dec << "\n";
    os << "time";
    for (int k = 0; k < track.K; ++k) os << ",r" << k;
    os << ",width\n";
    for (const auto& s : track.snaps) {
        os << fmt_g(s.t);
        for (double r : s.radii) os << ',' << (std::isfinite(r) ? fmt_g(r) : std::string("nan"));
        os << ',' << (std::isfinite(s.width) ? fmt_g(s.width) : std::string("nan")) << "\n";
    }
}

inline void write_spread_report(std::ostream& os, const SpreadReport& rep) {
    os << "rate_min = " << fmt_g(rep.rate_min()) << "\n";
    os << "rate_max = " << fmt_g(rep.rate_max()) << "\n";
    os << "min_pair_rate = " << fmt_g(rep.min_pair_rate) << "\n";
    os << "c_lo = " << fmt_g(rep.c_lo) << "\n";
    os << "c_hi = " << fmt_g(rep.c_hi) << "\n";
    os << "tol = " << fmt_g(rep.tol) << "\n";
    os << "verdict = " << (rep.pass ? "PASS" : "FAIL") << "\n";
}

}  // namespace pfront

#endif  // PFRONT_IO_HPP
