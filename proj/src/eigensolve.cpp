#include "kronschro/eigensolve.hpp"

#include <cmath>
#include <stdexcept>

namespace kronschro {

GeneralizedEigenDecomposition generalized_sym_eig(const Eigen::MatrixXd& L,
                                                  const Eigen::MatrixXd& M) {
    if (L.rows() != L.cols() || M.rows() != M.cols() || L.rows() != M.rows())
        throw std::invalid_argument("generalized_sym_eig: size mismatch");
    Eigen::LLT<Eigen::MatrixXd> llt(M);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("generalized_sym_eig: M is not positive definite");
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(L, M);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("generalized_sym_eig: eigensolver failed");
    GeneralizedEigenDecomposition d;
    d.U = es.eigenvectors();
    d.lambda = es.eigenvalues();
    // deterministic sign: largest-magnitude component positive
    for (int c = 0; c < d.U.cols(); ++c) {
        int imax = 0;
        d.U.col(c).cwiseAbs().maxCoeff(&imax);
        if (d.U(imax, c) < 0)
            d.U.col(c) = -d.U.col(c);
    }
    return d;
}

GeneralizedEigenDecomposition generalized_sym_eig(const BandedMatrix<double>& L,
                                                  const BandedMatrix<double>& M) {
    return generalized_sym_eig(L.to_dense(), M.to_dense());
}

double cond2_eigvec(const Eigen::MatrixXd& M) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("cond2_eigvec: eigensolver failed");
    const double lmin = es.eigenvalues().minCoeff();
    const double lmax = es.eigenvalues().maxCoeff();
    if (lmin <= 0)
        throw std::runtime_error("cond2_eigvec: matrix is not positive definite");
    return std::sqrt(lmax / lmin);
}

double cond2_eigvec(const BandedMatrix<double>& M) {
    return cond2_eigvec(M.to_dense());
}

Eigen::VectorXd dense_hermitian_geneig(const Eigen::MatrixXcd& A,
                                       const Eigen::MatrixXcd& B) {
    Eigen::LLT<Eigen::MatrixXcd> llt(B);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("dense_hermitian_geneig: B is not positive definite");
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXcd> es(
        A, B, Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("dense_hermitian_geneig: eigensolver failed");
    return es.eigenvalues();
}

namespace {

struct BandAccess {
    std::vector<cplx>& ab;
    int ldab;
    int shift; // kl + ku_orig
    cplx& operator()(int i, int j) const {
        return ab[static_cast<std::size_t>(shift + i - j) +
                  static_cast<std::size_t>(j) * ldab];
    }
};

} // namespace

BandedFactorization factor_banded(const BandedMatrix<cplx>& H) {
    const int n = H.rows();
    const int kl = H.bandwidth();
    const int ku0 = H.bandwidth();
    const int kuf = kl + ku0; // upper band after fill-in
    BandedFactorization F;
    F.n = n;
    F.kl = kl;
    F.ku = kuf;
    const int ldab = 2 * kl + ku0 + 1;
    F.ab.assign(static_cast<std::size_t>(ldab) * n, cplx(0));
    F.piv.resize(n);
    BandAccess a{F.ab, ldab, kuf};
    for (int j = 0; j < n; ++j)
        for (int i = std::max(0, j - ku0); i <= std::min(n - 1, j + kl); ++i)
            a(i, j) = H(i, j);

    for (int k = 0; k < n; ++k) {
        const int imax = std::min(n - 1, k + kl);
        int p = k;
        double best = std::abs(a(k, k));
        for (int i = k + 1; i <= imax; ++i) {
            if (std::abs(a(i, k)) > best) {
                best = std::abs(a(i, k));
                p = i;
            }
        }
        F.piv[k] = p;
        if (best == 0.0)
            throw std::runtime_error("factor_banded: numerically singular pivot");
        const int jmax = std::min(n - 1, k + kuf);
        if (p != k)
            for (int j = k; j <= jmax; ++j)
                std::swap(a(k, j), a(p, j));
        const cplx pivval = a(k, k);
        for (int i = k + 1; i <= imax; ++i) {
            const cplx m = a(i, k) / pivval;
            a(i, k) = m;
            if (m != cplx(0))
                for (int j = k + 1; j <= jmax; ++j)
                    a(i, j) -= m * a(k, j);
        }
    }
    return F;
}

void solve_banded(const BandedFactorization& F, cplx* x) {
    const int n = F.n, kl = F.kl, kuf = F.ku;
    const int ldab = kl + kuf + 1;
    BandAccess a{const_cast<std::vector<cplx>&>(F.ab), ldab, kuf};
    for (int k = 0; k < n; ++k) {
        if (F.piv[k] != k)
            std::swap(x[k], x[F.piv[k]]);
        const int imax = std::min(n - 1, k + kl);
        for (int i = k + 1; i <= imax; ++i)
            x[i] -= a(i, k) * x[k];
    }
    for (int k = n - 1; k >= 0; --k) {
        x[k] /= a(k, k);
        const int imin = std::max(0, k - kuf);
        for (int i = imin; i < k; ++i)
            x[i] -= a(i, k) * x[k];
    }
}

void solve_banded(const BandedFactorization& F, std::vector<cplx>& x) {
    if (static_cast<int>(x.size()) != F.n)
        throw std::invalid_argument("solve_banded: length mismatch");
    solve_banded(F, x.data());
}

void solve_banded_adjoint(const BandedFactorization& F, cplx* x) {
    const int n = F.n, kl = F.kl, kuf = F.ku;
    const int ldab = kl + kuf + 1;
    BandAccess a{const_cast<std::vector<cplx>&>(F.ab), ldab, kuf};
    // U^H z = y (forward substitution)
    for (int k = 0; k < n; ++k) {
        cplx s = x[k];
        const int imin = std::max(0, k - kuf);
        for (int i = imin; i < k; ++i)
            s -= std::conj(a(i, k)) * x[i];
        x[k] = s / std::conj(a(k, k));
    }
    // L^H w = z with interleaved row swaps, in reverse order
    for (int k = n - 1; k >= 0; --k) {
        const int imax = std::min(n - 1, k + kl);
        cplx s = x[k];
        for (int i = k + 1; i <= imax; ++i)
            s -= std::conj(a(i, k)) * x[i];
        x[k] = s;
        if (F.piv[k] != k)
            std::swap(x[k], x[F.piv[k]]);
    }
}

} // namespace kronschro
