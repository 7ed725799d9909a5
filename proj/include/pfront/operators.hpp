#ifndef PFRONT_OPERATORS_HPP
#define PFRONT_OPERATORS_HPP

/// Discretization of the moving-frame profile operator on the cylinder:
///   c d_xi U + d_xixi U + 2 e . grad_y d_xi U + Lap_y U + f(y, U)
/// Second-order central differences in xi, trigonometric-spectral (or
/// 4th-order stencil) differentiation in y, Dirichlet closure U(-L)=1,
/// U(+L)=0 read from the stored boundary slices.

#include <Eigen/Dense>
#include <numbers>

#include "pfront/grid.hpp"
#include "pfront/reaction.hpp"

namespace pfront {

namespace detail {

inline bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// First/second derivative matrices for period-1 uniform grids. Spectral
// (exact for trigonometric polynomials) when n is a power of two, else
// 4th-order central stencils. n == 1 gives zero matrices.
inline void periodic_diff_matrices(int n, Eigen::MatrixXd& D1, Eigen::MatrixXd& D2) {
    D1 = Eigen::MatrixXd::Zero(n, n);
    D2 = Eigen::MatrixXd::Zero(n, n);
    if (n == 1) return;
    if (power_of_two(n) || n < 5) {
        // Differentiate the trigonometric interpolant of each delta column.
        // Real DFT modes k = 0..n/2; Nyquist: drop in D1, keep -(2 pi k)^2 in D2.
        for (int col = 0; col < n; ++col) {
            for (int k = 0; k <= n / 2; ++k) {
                const double w = 2.0 * std::numbers::pi * k;
                const double scale = (k == 0 || 2 * k == n) ? 1.0 / n : 2.0 / n;
                for (int row = 0; row < n; ++row) {
                    const double arg = 2.0 * std::numbers::pi * k * double(row - col) / n;
                    if (!(2 * k == n))
                        D1(row, col) += -scale * w * std::sin(arg);
                    D2(row, col) += -scale * w * w * std::cos(arg);
                }
            }
        }
    } else {
        const double h = 1.0 / n;
        auto idx = [n](int i) { return ((i % n) + n) % n; };
        for (int i = 0; i < n; ++i) {
            D1(i, idx(i - 2)) += 1.0 / (12.0 * h);
            D1(i, idx(i - 1)) += -8.0 / (12.0 * h);
            D1(i, idx(i + 1)) += 8.0 / (12.0 * h);
            D1(i, idx(i + 2)) += -1.0 / (12.0 * h);
            D2(i, idx(i - 2)) += -1.0 / (12.0 * h * h);
            D2(i, idx(i - 1)) += 16.0 / (12.0 * h * h);
            D2(i, idx(i)) += -30.0 / (12.0 * h * h);
            D2(i, idx(i + 1)) += 16.0 / (12.0 * h * h);
            D2(i, idx(i + 2)) += -1.0 / (12.0 * h * h);
        }
    }
}

}  // namespace detail

// y-direction differentiation for a grid, assembled as dense slice-size
// matrices (Kronecker products for dim 2).
struct YOperators {
    Eigen::MatrixXd Ly;                   // Lap_y, M x M
    std::array<Eigen::MatrixXd, 2> Dy;    // d/d y_d, M x M
    int M = 1;

    explicit YOperators(const CylinderGrid& g) {
        M = g.slice_size();
        Eigen::MatrixXd d1a, d2a, d1b, d2b;
        detail::periodic_diff_matrices(g.n_y[0], d1a, d2a);
        detail::periodic_diff_matrices(g.n_y[1], d1b, d2b);
        const Eigen::MatrixXd Ia = Eigen::MatrixXd::Identity(g.n_y[0], g.n_y[0]);
        const Eigen::MatrixXd Ib = Eigen::MatrixXd::Identity(g.n_y[1], g.n_y[1]);
        auto kron = [](const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
            Eigen::MatrixXd K(A.rows() * B.rows(), A.cols() * B.cols());
            for (int i = 0; i < A.rows(); ++i)
                for (int j = 0; j < A.cols(); ++j) K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
            return K;
        };
        if (g.dim == 1) {
            Ly = d2a;
            Dy[0] = d1a;
            Dy[1] = Eigen::MatrixXd::Zero(M, M);
        } else {
            Ly = kron(d2a, Ib) + kron(Ia, d2b);
            Dy[0] = kron(d1a, Ib);
            Dy[1] = kron(Ia, d1b);
        }
    }

    // e . grad_y as a dense matrix.
    Eigen::MatrixXd directional(const Vec2& e, int dim) const {
        Eigen::MatrixXd D = e[0] * Dy[0];
        if (dim > 1) D += e[1] * Dy[1];
        return D;
    }
};

// Precomputed per-node theta values on a grid's y-slice.
inline std::vector<double> slice_theta(const CylinderGrid& g, const ReactionModel& model) {
    std::vector<double> th(g.slice_size());
    for (int m = 0; m < g.slice_size(); ++m) th[m] = model.theta(g.y_of(m));
    return th;
}

// Pointwise residual of the discretized profile equation. Boundary rows are
// zero; the Dirichlet closure is read from the stored boundary slices.
inline ProfileField front_residual(const CylinderGrid& grid, const ReactionModel& model, const Vec2& e,
                                   double c, const ProfileField& U, const YOperators* yops = nullptr) {
    if (model.dim() != grid.dim) throw std::invalid_argument("model/grid dimension mismatch");
    if (std::abs(norm2(e, grid.dim) - 1.0) > 1e-12) throw std::invalid_argument("|e| must be 1");
    if (U.grid.n_xi != grid.n_xi || U.grid.slice_size() != grid.slice_size())
        throw std::invalid_argument("field/grid mismatch");

    const int M = grid.slice_size();
    const double h = grid.h();
    YOperators local(grid);
    const YOperators& Y = yops ? *yops : local;
    const Eigen::MatrixXd De = Y.directional(e, grid.dim);
    const auto th = slice_theta(grid, model);

    ProfileField R(grid, 0.0);
    Eigen::VectorXd um(M), u0(M), up(M), acc(M);
    for (int i = 1; i < grid.n_xi - 1; ++i) {
        for (int m = 0; m < M; ++m) {
            um[m] = U.at(i - 1, m);
            u0[m] = U.at(i, m);
            up[m] = U.at(i + 1, m);
        }
        acc = (um - 2.0 * u0 + up) / (h * h);           // d_xixi
        acc += (c / (2.0 * h)) * (up - um);             // c d_xi
        acc.noalias() += De * ((up - um) / h);          // 2 e . grad_y d_xi
        acc.noalias() += Y.Ly * u0;                     // Lap_y
        for (int m = 0; m < M; ++m) acc[m] += model.f_theta(th[m], u0[m]);
        for (int m = 0; m < M; ++m) R.at(i, m) = acc[m];
    }
    return R;
}

// Jacobian of front_residual in block-tridiagonal form, plus the speed
// column d(residual)/dc = d_xi U.
//   sub  block  B   = (1/h^2 - c/2h) I - (1/h) De
//   diag block  A_i = (-2/h^2) I + Ly + diag(f_u(y, U_i))
//   super block C   = (1/h^2 + c/2h) I + (1/h) De
struct FrontLinearization {
    CylinderGrid grid;
    double c = 0.0;
    Eigen::MatrixXd base_diag;   // Ly - (2/h^2) I
    Eigen::MatrixXd Dmix;        // (1/h) De
    double sub_scal = 0.0, super_scal = 0.0;
    std::vector<double> fu;      // diag entries, (n_xi) x M (interior rows used)
    ProfileField dc_column;      // central d_xi U (interior)

    int M() const { return grid.slice_size(); }
    int interior() const { return grid.n_xi - 2; }

    Eigen::MatrixXd diag_block(int i_interior) const {
        Eigen::MatrixXd A = base_diag;
        const int M_ = M();
        const int i = i_interior + 1;
        for (int m = 0; m < M_; ++m) A(m, m) += fu[std::size_t(i) * M_ + m];
        return A;
    }

    // Matvec w = H v on interior slices (v, w are (interior x M) flat arrays,
    // Dirichlet zero outside).
    void matvec(const std::vector<double>& v, std::vector<double>& w) const {
        const int n = interior(), M_ = M();
        w.assign(v.size(), 0.0);
        Eigen::Map<const Eigen::MatrixXd> V(v.data(), M_, n);
        Eigen::Map<Eigen::MatrixXd> W(w.data(), M_, n);
        for (int i = 0; i < n; ++i) {
            Eigen::VectorXd acc = base_diag * V.col(i);
            const int gi = i + 1;
            for (int m = 0; m < M_; ++m) acc[m] += fu[std::size_t(gi) * M_ + m] * V(m, i);
            if (i > 0) {
                acc += sub_scal * V.col(i - 1);
                acc.noalias() -= Dmix * V.col(i - 1);
            }
            if (i < n - 1) {
                acc += super_scal * V.col(i + 1);
                acc.noalias() += Dmix * V.col(i + 1);
            }
            W.col(i) = acc;
        }
    }
};

inline FrontLinearization assemble_linearization(const CylinderGrid& grid, const ReactionModel& model,
                                                 const Vec2& e, double c, const ProfileField& U,
                                                 const YOperators* yops = nullptr) {
    if (model.dim() != grid.dim) throw std::invalid_argument("model/grid dimension mismatch");
    if (std::abs(norm2(e, grid.dim) - 1.0) > 1e-12) throw std::invalid_argument("|e| must be 1");
    const int M = grid.slice_size();
    const double h = grid.h();
    YOperators local(grid);
    const YOperators& Y = yops ? *yops : local;

    FrontLinearization J;
    J.grid = grid;
    J.c = c;
    J.base_diag = Y.Ly - (2.0 / (h * h)) * Eigen::MatrixXd::Identity(M, M);
    J.Dmix = (1.0 / h) * Y.directional(e, grid.dim);
    J.sub_scal = 1.0 / (h * h) - c / (2.0 * h);
    J.super_scal = 1.0 / (h * h) + c / (2.0 * h);

    const auto th = slice_theta(grid, model);
    J.fu.assign(std::size_t(grid.n_xi) * M, 0.0);
    for (int i = 0; i < grid.n_xi; ++i)
        for (int m = 0; m < M; ++m) J.fu[std::size_t(i) * M + m] = model.fu_theta(th[m], U.at(i, m));

    J.dc_column = ProfileField(grid, 0.0);
    for (int i = 1; i < grid.n_xi - 1; ++i)
        for (int m = 0; m < M; ++m) J.dc_column.at(i, m) = (U.at(i + 1, m) - U.at(i - 1, m)) / (2.0 * h);
    return J;
}

// Central d_xi of a field (interior rows; boundary rows zero).
inline ProfileField dxi_field(const ProfileField& U) {
    ProfileField D(U.grid, 0.0);
    const double h = U.grid.h();
    const int M = U.grid.slice_size();
    for (int i = 1; i < U.grid.n_xi - 1; ++i)
        for (int m = 0; m < M; ++m) D.at(i, m) = (U.at(i + 1, m) - U.at(i - 1, m)) / (2.0 * h);
    return D;
}

// The e-direction derivative of the residual at fixed (U, c): the mixed term
// with De replaced by (tangent . grad_y); used by the speed-sensitivity route.
inline ProfileField residual_direction_derivative(const CylinderGrid& grid, const Vec2& tangent,
                                                  const ProfileField& U, const YOperators& Y) {
    const int M = grid.slice_size();
    const double h = grid.h();
    const Eigen::MatrixXd Dt = Y.directional(tangent, grid.dim);
    ProfileField R(grid, 0.0);
    Eigen::VectorXd diff(M);
    for (int i = 1; i < grid.n_xi - 1; ++i) {
        for (int m = 0; m < M; ++m) diff[m] = (U.at(i + 1, m) - U.at(i - 1, m)) / h;
        Eigen::VectorXd out = Dt * diff;
        for (int m = 0; m < M; ++m) R.at(i, m) = out[m];
    }
    return R;
}

}  // namespace pfront

#endif  // PFRONT_OPERATORS_HPP
