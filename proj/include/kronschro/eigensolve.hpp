#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "kronschro/banded.hpp"

namespace kronschro {

using cplx = std::complex<double>;

/// M-orthonormal eigenvectors (columns of U) and ascending eigenvalues
/// of the SPD pencil L u = lambda M u.
struct GeneralizedEigenDecomposition {
    Eigen::MatrixXd U;
    Eigen::VectorXd lambda;
};

GeneralizedEigenDecomposition generalized_sym_eig(const Eigen::MatrixXd& L,
                                                  const Eigen::MatrixXd& M);
GeneralizedEigenDecomposition generalized_sym_eig(const BandedMatrix<double>& L,
                                                  const BandedMatrix<double>& M);

/// kappa_2(U) = sqrt(kappa_2(M)) for the M-orthonormal eigenvector matrix.
double cond2_eigvec(const Eigen::MatrixXd& M);
double cond2_eigvec(const BandedMatrix<double>& M);

/// Real ascending eigenvalues of the Hermitian pencil (A, B), B PD.
Eigen::VectorXd dense_hermitian_geneig(const Eigen::MatrixXcd& A,
                                       const Eigen::MatrixXcd& B);

/// Banded LU with partial pivoting (pivoting widens the upper band to
/// at most 2*bw).
struct BandedFactorization {
    int n = 0;
    int kl = 0;
    int ku = 0;                 // after fill-in: kl + original bw
    std::vector<cplx> ab;       // (2*kl + ku_orig + 1) x n, LAPACK gb layout
    std::vector<int> piv;
};

BandedFactorization factor_banded(const BandedMatrix<cplx>& H);
void solve_banded(const BandedFactorization& F, cplx* x);
void solve_banded(const BandedFactorization& F, std::vector<cplx>& x);
/// Solve H^H x = y with the factorization of H.
void solve_banded_adjoint(const BandedFactorization& F, cplx* x);

} // namespace kronschro
