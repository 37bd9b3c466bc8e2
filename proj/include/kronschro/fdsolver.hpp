#pragma once

#include <functional>
#include <vector>

#include "kronschro/assembly.hpp"
#include "kronschro/eigensolve.hpp"
#include "kronschro/tensorops.hpp"

namespace kronschro {

/// Joint eigenbasis of the spatial pencils (L_l, M_l): U_l M_l-orthonormal,
/// composite eigenvalues in vec order of the spatial axes.
struct SpatialEigenbasis {
    std::vector<GeneralizedEigenDecomposition> axes; // one per spatial axis
    std::vector<int> dims;                           // (n_t, n_s1, ..., n_sd)
    std::vector<double> lambda;                      // length N_s, all > 0

    /// x_hat = (U_s^T kron I_t) x and its inverse transform.
    CoeffTensor to_eigen(const CoeffTensor& X) const;
    CoeffTensor from_eigen(const CoeffTensor& X) const;
};

SpatialEigenbasis spatial_eigenbasis(const SpaceTimeProblem& prob,
                                     const UnivariateSet& u);

/// Solver for operators of the form
///   (U_s^-T kron I_t) blockdiag(H(lambda_i)) (U_s^-1 kron I_t),
/// with one banded time block per composite spatial eigenvalue. The
/// fast-diagonalization preconditioner and the exactly diagonalizable
/// Galerkin matrix both fit this shape.
class FastDiagSolver {
  public:
    using BlockBuilder = std::function<BandedMatrix<cplx>(double lambda)>;

    FastDiagSolver(SpatialEigenbasis basis, const BlockBuilder& build);

    const SpatialEigenbasis& basis() const { return basis_; }
    std::size_t vec_size() const { return CoeffTensor::total(basis_.dims); }

    /// y = Op^-1 r.
    void solve(const cplx* r, cplx* y) const;
    std::vector<cplx> solve(const std::vector<cplx>& r) const;
    /// y = Op^-H r.
    void solve_adjoint(const cplx* r, cplx* y) const;
    std::vector<cplx> solve_adjoint(const std::vector<cplx>& r) const;

  private:
    SpatialEigenbasis basis_;
    std::vector<BandedFactorization> blocks_; // one per composite eigenvalue
};

/// P = M_s x L_t + nu^2 (L_s M_s^-1 L_s) x M_t + nu L_s x (W + W^*):
/// the system operator with B_s replaced by its spectrally equivalent
/// square; blocks H_i = L_t + nu^2 lambda_i^2 M_t + nu lambda_i (W + W^*).
class FDPreconditioner {
  public:
    FDPreconditioner(const SpaceTimeProblem& prob, const UnivariateSet& u);
    explicit FDPreconditioner(const SpaceTimeProblem& prob);

    void apply(const cplx* r, cplx* z) const { solver_.solve(r, z); }
    std::vector<cplx> apply(const std::vector<cplx>& r) const;

    std::size_t vec_size() const { return solver_.vec_size(); }
    const std::vector<double>& eigenvalues() const {
        return solver_.basis().lambda;
    }
    /// Dense P for oracle comparisons (size-capped).
    Eigen::MatrixXcd to_dense(const SpaceTimeProblem& prob,
                              std::size_t cap = 20000) const;

  private:
    FastDiagSolver solver_;
};

/// Exact inverse of the Galerkin matrix M_s x W_t - nu sum_l (..G_l^T..) x M_t:
/// with C^1 Dirichlet spaces G = -L, so the blocks are W_t + nu lambda_i M_t.
FastDiagSolver galerkin_fast_solver(const SpaceTimeProblem& prob,
                                    const UnivariateSet& u);

} // namespace kronschro
