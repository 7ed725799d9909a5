#ifndef PFRONT_COMMON_HPP
#define PFRONT_COMMON_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace pfront {

// Named failure modes of the solvers and verifiers.
struct NonConvergence : std::runtime_error {
    double last_residual;
    explicit NonConvergence(const std::string& what, double r)
        : std::runtime_error(what), last_residual(r) {}
};
struct NonMonotoneProfile : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct TargetUnreachable : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct WindowTooShort : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DecayBoundViolated : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct AdjointDegenerate : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConstantsInfeasible : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonFiniteField : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InsufficientWindow : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct RegionTouchesClamp : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Vec2 = std::array<double, 2>;

inline double sq(double x) { return x * x; }

inline double norm2(const Vec2& v, int dim) {
    double s = 0.0;
    for (int d = 0; d < dim; ++d) s += v[d] * v[d];
    return std::sqrt(s);
}

// Wrap a coordinate into the unit cell [0, 1).
inline double wrap01(double x) {
    double y = x - std::floor(x);
    if (y >= 1.0) y -= 1.0;
    return y;
}

// Quintic smoothstep on [0,1]: C2, s(0)=0, s(1)=1, zero first/second
// derivatives at both ends.
inline double smoothstep5(double s) {
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 1.0;
    return s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}
inline double smoothstep5_d1(double s) {
    if (s <= 0.0 || s >= 1.0) return 0.0;
    return 30.0 * s * s * (1.0 - s) * (1.0 - s);
}
inline double smoothstep5_d2(double s) {
    if (s <= 0.0 || s >= 1.0) return 0.0;
    return 60.0 * s * (1.0 - s) * (1.0 - 2.0 * s);
}

// FNV-1a, used to stamp artifact files with the configuration they came from.
inline std::uint64_t fnv1a64(const void* data, std::size_t n, std::uint64_t h = 0xcbf29ce484222325ull) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
    return h;
}
inline std::uint64_t fnv1a64(const std::string& s) { return fnv1a64(s.data(), s.size()); }

// Least-squares slope of y against x. Returns {slope, intercept, r2}.
struct LineFit {
    double slope = 0.0, intercept = 0.0, r2 = 0.0;
};
inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / double(n), my = sy / double(n);
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r2 = (syy > 0.0) ? (sxy * sxy) / (sxx * syy) : 1.0;
    return f;
}

}  // namespace pfront

#endif  // PFRONT_COMMON_HPP
