#ifndef PFRONT_BLOCK_TRIDIAG_HPP
#define PFRONT_BLOCK_TRIDIAG_HPP

/// Direct factorization of block-tridiagonal systems with constant off-
/// diagonal blocks and an optional scalar border (one dense row and one
/// dense column), as produced by the phase-pinned Newton systems:
///
///   [ T  b ] [x ]   [r ]        T = blocktridiag(B, A_i, C)
///   [ p' d ] [xc] = [rc]
///
/// The border is carried through the elimination and the scalar unknown is
/// pivoted last: T alone is near-singular along the front's translation
/// mode, so Schur-style "solve with T twice" bordering is avoided.
/// The factorization of T is also reusable for transpose solves
/// (T = L U in block form => T' x = r by sweeping U', L').

#include <Eigen/Dense>
#include <functional>

#include "pfront/common.hpp"

namespace pfront {

class BlockTridiagSolver {
  public:
    // diag(i) must return A_i for i in [0, n). B and C are shared by all
    // rows. border_row/border_col are flat n*M arrays (pass nullptr for an
    // unbordered factorization).
    void factor(int n, int M, const std::function<void(int, Eigen::MatrixXd&)>& diag,
                const Eigen::MatrixXd& B, const Eigen::MatrixXd& C,
                const double* border_row = nullptr, const double* border_col = nullptr,
                double border_diag = 0.0) {
        n_ = n;
        M_ = M;
        B_ = B;
        C_ = C;
        bordered_ = (border_row != nullptr);
        lu_.resize(n);
        S_.resize(n);  // keep allocations across refactorizations
        if (bordered_) {
            t_.resize(n);
            q_.resize(n);
        }
        Eigen::MatrixXd G(M, M);
        Eigen::VectorXd tprev(M), qcur(M);
        double delta = border_diag;
        for (int i = 0; i < n; ++i) {
            diag(i, G);
            if (i > 0) G.noalias() -= B_ * S_[i - 1];
            lu_[i].compute(G);
            if (i < n - 1) S_[i] = lu_[i].solve(C_);
            if (bordered_) {
                Eigen::Map<const Eigen::VectorXd> bi(border_col + std::size_t(i) * M, M);
                Eigen::VectorXd rhs = bi;
                if (i > 0) rhs.noalias() -= B_ * t_[i - 1];
                t_[i] = lu_[i].solve(rhs);
                Eigen::Map<const Eigen::VectorXd> pi(border_row + std::size_t(i) * M, M);
                if (i == 0)
                    qcur = pi;
                else
                    qcur = pi - S_[i - 1].transpose() * q_[i - 1];
                q_[i] = qcur;
                delta -= q_[i].dot(t_[i]);
            }
        }
        delta_ = delta;
    }

    int n() const { return n_; }
    int M() const { return M_; }
    double border_pivot() const { return delta_; }

    // Bordered solve; x is n*M, xc the scalar unknown.
    void solve(const double* r, double rc, double* x, double& xc) const {
        if (!bordered_) throw std::logic_error("factorization has no border");
        std::vector<Eigen::VectorXd> w(n_);
        double psi = rc;
        for (int i = 0; i < n_; ++i) {
            Eigen::Map<const Eigen::VectorXd> ri(r + std::size_t(i) * M_, M_);
            Eigen::VectorXd rhs = ri;
            if (i > 0) rhs.noalias() -= B_ * w[i - 1];
            w[i] = lu_[i].solve(rhs);
            psi -= q_[i].dot(w[i]);
        }
        xc = psi / delta_;
        Eigen::VectorXd xi = w[n_ - 1] - t_[n_ - 1] * xc;
        Eigen::Map<Eigen::VectorXd>(x + std::size_t(n_ - 1) * M_, M_) = xi;
        for (int i = n_ - 2; i >= 0; --i) {
            Eigen::VectorXd xn = w[i] - S_[i] * xi - t_[i] * xc;
            Eigen::Map<Eigen::VectorXd>(x + std::size_t(i) * M_, M_) = xn;
            xi.swap(xn);
        }
    }

    // Plain solve T x = r (border ignored).
    void solve_plain(const double* r, double* x) const {
        std::vector<Eigen::VectorXd> w(n_);
        for (int i = 0; i < n_; ++i) {
            Eigen::Map<const Eigen::VectorXd> ri(r + std::size_t(i) * M_, M_);
            Eigen::VectorXd rhs = ri;
            if (i > 0) rhs.noalias() -= B_ * w[i - 1];
            w[i] = lu_[i].solve(rhs);
        }
        Eigen::VectorXd xi = w[n_ - 1];
        Eigen::Map<Eigen::VectorXd>(x + std::size_t(n_ - 1) * M_, M_) = xi;
        for (int i = n_ - 2; i >= 0; --i) {
            Eigen::VectorXd xn = w[i] - S_[i] * xi;
            Eigen::Map<Eigen::VectorXd>(x + std::size_t(i) * M_, M_) = xn;
            xi.swap(xn);
        }
    }

    // Transpose solve T' x = r, from the block LU of T:
    // T = Lambda Upsilon with Lambda lower (G_i diag, B sub) and Upsilon
    // unit-upper (S_i super), so T' = Upsilon' Lambda'.
    void solve_transpose(const double* r, double* x) const {
        std::vector<Eigen::VectorXd> z(n_);
        for (int i = 0; i < n_; ++i) {
            Eigen::Map<const Eigen::VectorXd> ri(r + std::size_t(i) * M_, M_);
            z[i] = ri;
            if (i > 0) z[i].noalias() -= S_[i - 1].transpose() * z[i - 1];
        }
        Eigen::VectorXd xi = lu_[n_ - 1].transpose().solve(z[n_ - 1]);
        Eigen::Map<Eigen::VectorXd>(x + std::size_t(n_ - 1) * M_, M_) = xi;
        for (int i = n_ - 2; i >= 0; --i) {
            Eigen::VectorXd rhs = z[i];
            rhs.noalias() -= B_.transpose() * xi;
            Eigen::VectorXd xn = lu_[i].transpose().solve(rhs);
            Eigen::Map<Eigen::VectorXd>(x + std::size_t(i) * M_, M_) = xn;
            xi.swap(xn);
        }
    }

    void clear() {
        lu_.clear();
        S_.clear();
        t_.clear();
        q_.clear();
        n_ = M_ = 0;
    }

  private:
    int n_ = 0, M_ = 0;
    bool bordered_ = false;
    double delta_ = 0.0;
    Eigen::MatrixXd B_, C_;
    std::vector<Eigen::PartialPivLU<Eigen::MatrixXd>> lu_;
    std::vector<Eigen::MatrixXd> S_;
    std::vector<Eigen::VectorXd> t_, q_;
};

}  // namespace pfront

#endif  // PFRONT_BLOCK_TRIDIAG_HPP
