#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "kronschro/tensorops.hpp"

namespace kronschro {

using ApplyFn = std::function<void(const cplx* x, cplx* y)>;

struct PcgOptions {
    double tol = 1e-8;
    int maxit = 200;
    /// true: test the true residual ||b - A x||/||b|| every iteration
    /// (one extra matvec); false: recurrence residual, confirmed once
    /// at exit.
    bool strict_residual = false;
};

struct SolveReport {
    std::vector<cplx> x;
    int iterations = 0;
    std::vector<double> res_history; // relative residuals, one per iteration
    bool converged = false;
    bool breakdown = false;
    double setup_seconds = 0;   // filled by callers that time their setup
    double matvec_seconds = 0;
    double precond_seconds = 0;
    double solve_seconds = 0;
};

/// Preconditioned CG for Hermitian positive-definite operators in the
/// inner product <u,v> = sum conj(v_i) u_i; zero initial guess.
/// apply_p may be null (unpreconditioned).
SolveReport pcg(const ApplyFn& apply_a, const ApplyFn& apply_p,
                const std::vector<cplx>& b, const PcgOptions& opts = {});

/// Extreme eigenvalue of an operator T that is self-adjoint in the inner
/// product induced by the HPD operator B, by Lanczos with full
/// reorthogonalization; deterministic start from the given seed.
double lanczos_extreme_eigenvalue(const ApplyFn& apply_t, const ApplyFn& apply_b,
                                  std::size_t n, int steps, bool largest,
                                  std::uint64_t seed = 1234);

} // namespace kronschro
