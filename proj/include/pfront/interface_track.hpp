#ifndef PFRONT_INTERFACE_TRACK_HPP
#define PFRONT_INTERFACE_TRACK_HPP

/// Level-set interface extraction along rays from the origin and the two
/// spreading-rate estimators: per-ray radial speeds and the min-pair
/// distance rate between interface snapshots.

#include "pfront/cauchy.hpp"

namespace pfront {

struct InterfaceSnapshot {
    double t = 0.0;
    std::vector<double> radii;  // per ray, NaN when the level is not crossed
    double width = std::numeric_limits<double>::quiet_NaN();  // measured interface width
};

struct InterfaceTrack {
    int K = 64;                 // rays, angles 2 pi k / K, anchored at the origin
    double level = 0.5;
    std::vector<InterfaceSnapshot> snaps;
};

namespace detail {

inline double bilinear(const CauchyState& s, double x, double y) {
    const auto& g = s.grid;
    const double h = g.h();
    double fx = (x + g.W) / h, fy = (y + g.W) / h;
    int i = std::clamp(int(std::floor(fx)), 0, g.n_b - 2);
    int j = std::clamp(int(std::floor(fy)), 0, g.n_b - 2);
    double tx = fx - i, ty = fy - j;
    return (1 - tx) * (1 - ty) * s.at(i, j) + tx * (1 - ty) * s.at(i + 1, j) +
           (1 - tx) * ty * s.at(i, j + 1) + tx * ty * s.at(i + 1, j + 1);
}

// Outermost radius where u crosses `level` along the ray (decreasing
// outward at the crossing); NaN if the ray never crosses.
inline double ray_crossing(const CauchyState& s, double cphi, double sphi, double level, double dr) {
    const double rmax = s.grid.W * 0.98;
    double prev_r = rmax;
    double prev_u = bilinear(s, rmax * cphi, rmax * sphi);
    for (double r = rmax - dr; r >= 0.0; r -= dr) {
        const double u = bilinear(s, r * cphi, r * sphi);
        if (u >= level && prev_u < level) {
            const double w = (level - u) / (prev_u - u);
            return r + w * (prev_r - r);
        }
        prev_r = r;
        prev_u = u;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace detail

// Extract the interface snapshot of one state.
inline InterfaceSnapshot extract_interface(const CauchyState& s, double level = 0.5, int K = 64) {
    if (s.grid.dim != 2) throw std::invalid_argument("interface tracking needs dim 2");
    InterfaceSnapshot snap;
    snap.t = s.t;
    snap.radii.resize(K);
    const double dr = s.grid.h() / 2.0;
    double width = 0.0;
    bool any_width = false;
    for (int k = 0; k < K; ++k) {
        const double phi = 2.0 * std::numbers::pi * k / K;
        const double c = std::cos(phi), q = std::sin(phi);
        snap.radii[k] = detail::ray_crossing(s, c, q, level, dr);
        const double r95 = detail::ray_crossing(s, c, q, 0.95, dr);
        const double r05 = detail::ray_crossing(s, c, q, 0.05, dr);
        if (std::isfinite(r95) && std::isfinite(r05)) {
            width = std::max(width, r05 - r95);
            any_width = true;
        }
    }
    if (any_width) snap.width = width;
    return snap;
}

inline void track_interface(InterfaceTrack& track, const CauchyState& s) {
    track.snaps.push_back(extract_interface(s, track.level, track.K));
}

struct SpreadReport {
    std::vector<double> ray_speeds;  // LSQ slope of r(t) per ray
    double min_pair_rate = 0.0;
    double c_lo = 0.0, c_hi = 0.0, tol = 0.02;
    bool pass = false;
    double rate_min() const {
        double v = min_pair_rate;
        for (double s : ray_speeds) v = std::min(v, s);
        return v;
    }
    double rate_max() const {
        double v = min_pair_rate;
        for (double s : ray_speeds) v = std::max(v, s);
        return v;
    }
};

// Radial speeds and the min-pair distance rate over the window [t1, t2],
// checked against the speed band [c_lo - tol, c_hi + tol].
inline SpreadReport estimate_speeds(const InterfaceTrack& track, double t1, double t2, double c_lo,
                                    double c_hi, double tol = 0.02) {
    std::vector<const InterfaceSnapshot*> win;
    for (const auto& s : track.snaps)
        if (s.t >= t1 - 1e-9 && s.t <= t2 + 1e-9) win.push_back(&s);
    if (win.size() < 10) throw InsufficientWindow("fewer than 10 recorded times in the window");
    const int K = int(win.front()->radii.size());
    for (const auto* s : win)
        for (double r : s->radii)
            if (!std::isfinite(r)) throw InsufficientWindow("missing ray crossing inside the window");

    SpreadReport rep;
    rep.c_lo = c_lo;
    rep.c_hi = c_hi;
    rep.tol = tol;
    rep.ray_speeds.resize(K);
    std::vector<double> ts(win.size());
    for (std::size_t i = 0; i < win.size(); ++i) ts[i] = win[i]->t;
    std::vector<double> rs(win.size());
    for (int k = 0; k < K; ++k) {
        for (std::size_t i = 0; i < win.size(); ++i) rs[i] = win[i]->radii[k];
        rep.ray_speeds[k] = fit_line(ts, rs).slope;
    }

    // Min-pair distances between snapshot point sets, over pairs separated
    // by at least half the window.
    std::vector<double> dts, ds;
    const double half = (t2 - t1) / 2.0;
    for (std::size_t a = 0; a < win.size(); ++a)
        for (std::size_t b = a + 1; b < win.size(); ++b) {
            const double dt = win[b]->t - win[a]->t;
            if (dt < half - 1e-9) continue;
            double dmin = 1e300;
            for (int i = 0; i < K; ++i) {
                const double pa = 2.0 * std::numbers::pi * i / K;
                const double xa = win[a]->radii[i] * std::cos(pa), ya = win[a]->radii[i] * std::sin(pa);
                for (int j = 0; j < K; ++j) {
                    const double pb = 2.0 * std::numbers::pi * j / K;
                    const double xb = win[b]->radii[j] * std::cos(pb), yb = win[b]->radii[j] * std::sin(pb);
                    dmin = std::min(dmin, std::hypot(xa - xb, ya - yb));
                }
            }
            dts.push_back(dt);
            ds.push_back(dmin);
        }
    if (dts.size() < 3) throw InsufficientWindow("not enough snapshot pairs for the min-pair rate");
    rep.min_pair_rate = fit_line(dts, ds).slope;

    bool ok = rep.min_pair_rate >= c_lo - tol && rep.min_pair_rate <= c_hi + tol;
    for (double s : rep.ray_speeds) ok = ok && s >= c_lo - tol && s <= c_hi + tol;
    rep.pass = ok;
    return rep;
}

}  // namespace pfront

#endif  // PFRONT_INTERFACE_TRACK_HPP
