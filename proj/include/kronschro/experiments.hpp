#pragma once

#include <string>
#include <utility>
#include <vector>

#include "kronschro/assembly.hpp"
#include "kronschro/fdsolver.hpp"
#include "kronschro/krylov.hpp"
#include "kronschro/problems.hpp"

namespace kronschro {

enum class Preconditioner { FastDiag, None };

struct ProblemSolution {
    SolveReport report;
    std::vector<cplx> full_coeffs; // boundary lift included
};

/// Assemble, lift nonhomogeneous data if needed, and solve with PCG.
ProblemSolution solve_problem(const SpaceTimeProblem& prob,
                              const ManufacturedSolution& exact,
                              Preconditioner prec = Preconditioner::FastDiag,
                              const PcgOptions& opts = {});

/// (L2(Q) error, V-norm error) of the spline function given by full-space
/// coefficients; V-norm^2 = L2^2 + ||f - S u_h||^2 with S = i d/dt - nu Lap.
std::pair<double, double> error_norms(const SpaceTimeProblem& prob,
                                      const std::vector<cplx>& full_coeffs,
                                      const ManufacturedSolution& exact);

struct ConvergenceRecord {
    double h = 0;
    long Ndof = 0;
    double errL2 = 0;
    double errV = 0;
    double order = 0; // vs previous level; 0 on the first
};

/// Default tolerance is tighter than the solver's so that algebraic
/// error stays below discretization error on the finest meshes.
std::vector<ConvergenceRecord> convergence_study(const ManufacturedSolution& exact,
                                                 int p,
                                                 const std::vector<int>& n_els,
                                                 const PcgOptions& opts = {1e-12, 400,
                                                                           false});

enum class InfSupMethod { Galerkin, LeastSquares };

/// Discrete inf-sup constant of the 1D model problem, via the extreme
/// eigenvalue of the associated pencil (matrix-free Lanczos).
double infsup_constant(InfSupMethod method, int p, int n_el, double T = 1.0,
                       double nu = 1.0);

/// Ascending eigenvalues of the 1D spatial pencil (B, L M^-1 L) on the
/// Dirichlet-restricted space.
std::vector<double> spectral_equivalence_space(int p, int n_el);
/// Eigenvalues of the time pencil (L_t, W^H M_t^-1 W) on the
/// initial-condition space.
std::vector<double> spectral_equivalence_time(int p, int n_el);

struct ConditionRecord {
    int p = 0;
    int n_el = 0;
    double kappa2 = 0; // kappa_2 of the M-orthonormal eigenvector matrix
};

std::vector<ConditionRecord> condition_table(const std::vector<int>& ps,
                                             const std::vector<int>& n_els);

struct PerfRecord {
    std::string problem;
    int p = 0;
    int n_el = 0;
    std::string prec;
    int iters = 0;
    double setup_s = 0;
    double solve_s = 0;
    bool converged = false;
};

PerfRecord performance_run(const ManufacturedSolution& exact, int p, int n_el,
                           Preconditioner prec, const PcgOptions& opts = {});

} // namespace kronschro
