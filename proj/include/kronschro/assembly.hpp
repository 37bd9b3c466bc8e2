#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "kronschro/bspline.hpp"
#include "kronschro/eigensolve.hpp"
#include "kronschro/tensorops.hpp"

namespace kronschro {

enum class MatKind { Mass, Stiffness, SecondCross, Bilaplacian, TimeDeriv };
enum class Restriction { None, DropFirst, DropLast, DropBoth };

/// Univariate Galerkin matrix by exact element-wise Gauss quadrature
/// (p+1 points per element); bandwidth p before restriction padding.
BandedMatrix<double> univariate_matrix_real(MatKind kind, const KnotVector& kv,
                                            Restriction r);
BandedMatrix<cplx> univariate_matrix(MatKind kind, const KnotVector& kv,
                                     Restriction r);

using SpaceTimeFn = std::function<cplx(double t, std::span<const double> x)>;
using SpaceFn = std::function<cplx(std::span<const double> x)>;

/// Discrete problem descriptor on Q = (0,T) x (0,1)^d with the
/// Schroedinger operator i d/dt - nu Laplacian.
struct SpaceTimeProblem {
    enum class TrialSpace { InitialCondition, FinalCondition };

    int d = 1;
    double T = 1.0;
    double nu = 1.0;
    TrialSpace trial = TrialSpace::InitialCondition;
    KnotVector time_kv;
    std::vector<KnotVector> space_kv;

    SpaceTimeProblem(int d, double T, double nu, KnotVector tkv,
                     std::vector<KnotVector> skv,
                     TrialSpace trial = TrialSpace::InitialCondition);

    /// Uniform meshes, p_t = p_s = p, n_el elements per spatial
    /// direction and n_el_time in time.
    static SpaceTimeProblem uniform(int d, int p, int n_el, int n_el_time,
                                    double T, double nu,
                                    TrialSpace trial = TrialSpace::InitialCondition);
    /// Same mesh size in space and time: n_el_time = round(n_el * T).
    static SpaceTimeProblem matched(int d, int p, int n_el, double T, double nu,
                                    TrialSpace trial = TrialSpace::InitialCondition);

    int p_t() const { return time_kv.degree(); }
    int n_t() const { return time_kv.dim() - 1; }
    int n_s(int l) const { return space_kv[l].dim() - 2; }
    long N_s() const;
    long N_dof() const { return N_s() * n_t(); }
    std::vector<int> reduced_dims() const; // (n_t, n_s1, ..., n_sd)
    std::vector<int> full_dims() const;    // (m_t, m_1, ..., m_d)
    Restriction time_restriction() const {
        return trial == TrialSpace::InitialCondition ? Restriction::DropFirst
                                                     : Restriction::DropLast;
    }
};

/// Restricted univariate factors of the system and preconditioner.
struct UnivariateSet {
    BandedMatrix<double> Lt, Mt;
    BandedMatrix<cplx> Wt;
    std::vector<BandedMatrix<double>> M, L, G, V; // per spatial direction
};
UnivariateSet build_univariate(const SpaceTimeProblem& prob);

/// A = M_s x L_t + nu^2 B_s x M_t + nu L_s x (W_t + W_t^*), Hermitian PD.
KroneckerOperator assemble_system_operator(const SpaceTimeProblem& prob);
/// Same structure on the unrestricted tensor spaces (used for lifting).
KroneckerOperator assemble_system_operator_full(const SpaceTimeProblem& prob);
/// Space-time mass M_s x M_t on the restricted spaces.
KroneckerOperator assemble_spacetime_mass(const SpaceTimeProblem& prob);
/// Galerkin matrix [(S B_j, B_i)] = M_s x W_t - nu sum_l (...G_l^T...) x M_t.
KroneckerOperator assemble_galerkin_operator(const SpaceTimeProblem& prob);

/// Load vector [f]_i = (f, S B_i) on the restricted space.
std::vector<cplx> assemble_rhs(const SpaceTimeProblem& prob, const SpaceTimeFn& f);

/// Lifting of nonhomogeneous initial/boundary data by Greville
/// interpolation on the full tensor grid.
struct Lifting {
    std::vector<cplx> boundary_coeffs; // full-space length, interior zeroed
    std::vector<cplx> corrected_rhs;   // reduced length
};
Lifting lift_nonhomogeneous(const SpaceTimeProblem& prob, const SpaceTimeFn& g,
                            const SpaceTimeFn& f);

/// Ultraweak variant on the final-condition space; rhs gains the
/// initial-datum term i (u0, B_i(.,0))_{L2}.
std::pair<KroneckerOperator, std::vector<cplx>>
assemble_ultraweak(const SpaceTimeProblem& prob, const SpaceTimeFn& f,
                   const SpaceFn& u0);

// --- index plumbing between full and restricted spaces ---

bool is_constrained(const SpaceTimeProblem& prob, std::span<const int> full_idx);
std::vector<cplx> restrict_to_interior(const SpaceTimeProblem& prob,
                                       const std::vector<cplx>& full);
/// boundary may be empty (treated as zero).
std::vector<cplx> extend_with_boundary(const SpaceTimeProblem& prob,
                                       const std::vector<cplx>& reduced,
                                       const std::vector<cplx>& boundary);

/// Rows evaluate the order-th derivative of every basis function of kv
/// at the given points.
SparseRowMatrix basis_eval_matrix(const KnotVector& kv, std::span<const double> pts,
                                  int order);

/// Solve the banded system along one tensor axis, fiber by fiber.
CoeffTensor mode_solve(const CoeffTensor& X, const BandedFactorization& F,
                       int axis);

} // namespace kronschro
