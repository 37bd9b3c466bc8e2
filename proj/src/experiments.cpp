#include "kronschro/experiments.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace kronschro {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

void check_compatible(const SpaceTimeProblem& prob,
                      const ManufacturedSolution& exact) {
    if (prob.d != exact.d || prob.T != exact.T || prob.nu != exact.nu)
        throw std::invalid_argument(
            "problem and manufactured solution disagree on d, T or nu");
}

} // namespace

ProblemSolution solve_problem(const SpaceTimeProblem& prob,
                              const ManufacturedSolution& exact,
                              Preconditioner prec, const PcgOptions& opts) {
    check_compatible(prob, exact);
    const auto t0 = std::chrono::steady_clock::now();
    const UnivariateSet u = build_univariate(prob);
    const KroneckerOperator A = assemble_system_operator(prob);
    std::optional<FDPreconditioner> P;
    if (prec == Preconditioner::FastDiag)
        P.emplace(prob, u);

    std::vector<cplx> rhs, boundary;
    if (exact.homogeneous) {
        rhs = assemble_rhs(prob, exact.f);
    } else {
        Lifting lift = lift_nonhomogeneous(prob, exact.u, exact.f);
        rhs = std::move(lift.corrected_rhs);
        boundary = std::move(lift.boundary_coeffs);
    }
    const double setup = seconds_since(t0);

    ApplyFn apply_a = [&A](const cplx* x, cplx* y) { A.apply(x, y); };
    ApplyFn apply_p;
    if (P)
        apply_p = [&P](const cplx* x, cplx* y) { P->apply(x, y); };

    ProblemSolution sol;
    sol.report = pcg(apply_a, apply_p, rhs, opts);
    sol.report.setup_seconds = setup;
    sol.full_coeffs = extend_with_boundary(prob, sol.report.x, boundary);
    return sol;
}

namespace {

SparseRowMatrix row_chunk(const SparseRowMatrix& E, int r0, int r1) {
    SparseRowMatrix c;
    c.rows = r1 - r0;
    c.cols = E.cols;
    c.nnz = E.nnz;
    c.offset.assign(E.offset.begin() + r0, E.offset.begin() + r1);
    c.vals.assign(E.vals.begin() + static_cast<std::size_t>(r0) * E.nnz,
                  E.vals.begin() + static_cast<std::size_t>(r1) * E.nnz);
    return c;
}

} // namespace

std::pair<double, double> error_norms(const SpaceTimeProblem& prob,
                                      const std::vector<cplx>& full_coeffs,
                                      const ManufacturedSolution& exact) {
    check_compatible(prob, exact);
    const int d = prob.d;
    if (full_coeffs.size() != CoeffTensor::total(prob.full_dims()))
        throw std::invalid_argument("error_norms: expected full-space coefficients");

    std::vector<QuadratureRule> rules;
    std::vector<std::vector<SparseRowMatrix>> eval; // [axis][order]
    auto add_axis = [&](const KnotVector& kv, int maxo) {
        rules.push_back(element_quadrature(kv, kv.degree() + 1));
        std::vector<SparseRowMatrix> e;
        for (int o = 0; o <= maxo; ++o)
            e.push_back(basis_eval_matrix(kv, rules.back().nodes, o));
        eval.push_back(std::move(e));
    };
    add_axis(prob.time_kv, 1);
    for (const auto& kv : prob.space_kv)
        add_axis(kv, 2);

    CoeffTensor C(prob.full_dims());
    C.v = full_coeffs;

    const int last = d;
    const int npts_last = rules[last].npts_per_element;
    const int q_last = static_cast<int>(rules[last].nodes.size());

    // evaluate the coefficient tensor on the grid chunk, one derivative
    // order per axis (outermost axis restricted to rows [r0, r1))
    auto eval_chunk = [&](const std::vector<int>& orders, int r0, int r1) {
        CoeffTensor T = mode_product(C, row_chunk(eval[last][orders[last]], r0, r1),
                                     last);
        for (int a = 0; a < last; ++a)
            T = mode_product(T, eval[a][orders[a]], a);
        return T;
    };

    double l2 = 0, res = 0;
    std::vector<double> x(d);
    for (int r0 = 0; r0 < q_last; r0 += npts_last) {
        const int r1 = std::min(q_last, r0 + npts_last);
        std::vector<int> o0(d + 1, 0);
        const CoeffTensor U0 = eval_chunk(o0, r0, r1);
        std::vector<int> ot(d + 1, 0);
        ot[0] = 1;
        const CoeffTensor Ut = eval_chunk(ot, r0, r1);
        std::vector<CoeffTensor> Uxx;
        for (int l = 0; l < d; ++l) {
            std::vector<int> ox(d + 1, 0);
            ox[l + 1] = 2;
            Uxx.push_back(eval_chunk(ox, r0, r1));
        }
        std::vector<int> idx(d + 1, 0);
        for (std::size_t flat = 0; flat < U0.size(); ++flat) {
            const double t = rules[0].nodes[idx[0]];
            double w = rules[0].weights[idx[0]];
            for (int l = 1; l < d; ++l) {
                x[l - 1] = rules[l].nodes[idx[l]];
                w *= rules[l].weights[idx[l]];
            }
            x[d - 1] = rules[last].nodes[r0 + idx[last]];
            w *= rules[last].weights[r0 + idx[last]];

            const cplx e = exact.u(t, std::span<const double>(x)) - U0.v[flat];
            l2 += w * std::norm(e);
            cplx su = cplx(0, 1) * Ut.v[flat];
            for (int l = 0; l < d; ++l)
                su -= prob.nu * Uxx[l].v[flat];
            const cplx r = exact.f(t, std::span<const double>(x)) - su;
            res += w * std::norm(r);

            for (int a = 0; a <= last; ++a) {
                if (++idx[a] < U0.dims[a])
                    break;
                idx[a] = 0;
            }
        }
    }
    return {std::sqrt(l2), std::sqrt(l2 + res)};
}

std::vector<ConvergenceRecord> convergence_study(const ManufacturedSolution& exact,
                                                 int p,
                                                 const std::vector<int>& n_els,
                                                 const PcgOptions& opts) {
    std::vector<ConvergenceRecord> out;
    for (int n_el : n_els) {
        const SpaceTimeProblem prob =
            SpaceTimeProblem::matched(exact.d, p, n_el, exact.T, exact.nu);
        const ProblemSolution sol = solve_problem(prob, exact,
                                                  Preconditioner::FastDiag, opts);
        // a residual floored above a very tight tol is still far below
        // discretization error; only genuine stagnation is fatal
        const double final_res =
            sol.report.res_history.empty() ? 1.0 : sol.report.res_history.back();
        if (!sol.report.converged && final_res > 1e-8)
            throw std::runtime_error("convergence_study: solver did not converge");
        const auto [eL2, eV] = error_norms(prob, sol.full_coeffs, exact);
        ConvergenceRecord rec;
        rec.h = prob.space_kv[0].mesh_size();
        rec.Ndof = prob.N_dof();
        rec.errL2 = eL2;
        rec.errV = eV;
        if (!out.empty() && rec.errV > 0 && out.back().errV > 0)
            rec.order = std::log(out.back().errV / rec.errV) /
                        std::log(out.back().h / rec.h);
        out.push_back(rec);
    }
    return out;
}

double infsup_constant(InfSupMethod method, int p, int n_el, double T, double nu) {
    const SpaceTimeProblem prob = SpaceTimeProblem::matched(1, p, n_el, T, nu);
    const UnivariateSet u = build_univariate(prob);
    const KroneckerOperator A = assemble_system_operator(prob);
    const KroneckerOperator MQ = assemble_spacetime_mass(prob);
    const std::size_t n = static_cast<std::size_t>(prob.N_dof());
    const int steps = std::min<int>(static_cast<int>(n), 60);

    if (method == InfSupMethod::LeastSquares) {
        // alpha^2 = lambda_min(A, MQ + A) = 1 / (1 + lambda_max(MQ, A))
        const FDPreconditioner P(prob, u);
        ApplyFn apply_t = [&](const cplx* xin, cplx* yout) {
            std::vector<cplx> b(n);
            MQ.apply(xin, b.data());
            PcgOptions inner;
            inner.tol = 1e-12;
            inner.maxit = 400;
            const SolveReport r = pcg(
                [&A](const cplx* x, cplx* y) { A.apply(x, y); },
                [&P](const cplx* x, cplx* y) { P.apply(x, y); }, b, inner);
            std::copy(r.x.begin(), r.x.end(), yout);
        };
        ApplyFn apply_b = [&MQ](const cplx* x, cplx* y) { MQ.apply(x, y); };
        const double lmax =
            lanczos_extreme_eigenvalue(apply_t, apply_b, n, steps, true);
        return 1.0 / std::sqrt(1.0 + lmax);
    }

    // alpha^2 = lambda_min(Ag^H MQ^-1 Ag, MQ + A)
    //         = 1 / lambda_max(Ag^-1 MQ Ag^-H (MQ + A))
    const FastDiagSolver G = galerkin_fast_solver(prob, u);
    ApplyFn apply_gv = [&](const cplx* x, cplx* y) {
        MQ.apply(x, y);
        std::vector<cplx> t(n);
        A.apply(x, t.data());
        for (std::size_t i = 0; i < n; ++i)
            y[i] += t[i];
    };
    ApplyFn apply_t = [&](const cplx* x, cplx* y) {
        std::vector<cplx> a(n), b(n);
        apply_gv(x, a.data());
        G.solve_adjoint(a.data(), b.data());
        MQ.apply(b.data(), a.data());
        G.solve(a.data(), y);
    };
    const double lmax = lanczos_extreme_eigenvalue(apply_t, apply_gv, n, steps, true);
    return 1.0 / std::sqrt(lmax);
}

std::vector<double> spectral_equivalence_space(int p, int n_el) {
    const KnotVector kv = KnotVector::open_uniform(p, n_el, 0.0, 1.0);
    const Eigen::MatrixXd M =
        univariate_matrix_real(MatKind::Mass, kv, Restriction::DropBoth).to_dense();
    const Eigen::MatrixXd L =
        univariate_matrix_real(MatKind::Stiffness, kv, Restriction::DropBoth)
            .to_dense();
    const Eigen::MatrixXd B =
        univariate_matrix_real(MatKind::Bilaplacian, kv, Restriction::DropBoth)
            .to_dense();
    const Eigen::MatrixXd S = L * M.llt().solve(L);
    const GeneralizedEigenDecomposition d = generalized_sym_eig(B, S);
    return std::vector<double>(d.lambda.data(), d.lambda.data() + d.lambda.size());
}

std::vector<double> spectral_equivalence_time(int p, int n_el) {
    const KnotVector kv = KnotVector::open_uniform(p, n_el, 0.0, 1.0);
    const Eigen::MatrixXcd L =
        univariate_matrix(MatKind::Stiffness, kv, Restriction::DropFirst).to_dense();
    const Eigen::MatrixXcd M =
        univariate_matrix(MatKind::Mass, kv, Restriction::DropFirst).to_dense();
    const Eigen::MatrixXcd W =
        univariate_matrix(MatKind::TimeDeriv, kv, Restriction::DropFirst).to_dense();
    const Eigen::MatrixXcd B = W.adjoint() * M.llt().solve(W);
    const Eigen::VectorXd lam = dense_hermitian_geneig(L, B);
    return std::vector<double>(lam.data(), lam.data() + lam.size());
}

std::vector<ConditionRecord> condition_table(const std::vector<int>& ps,
                                             const std::vector<int>& n_els) {
    std::vector<ConditionRecord> out;
    for (int p : ps)
        for (int n_el : n_els) {
            const KnotVector kv = KnotVector::open_uniform(p, n_el, 0.0, 1.0);
            const BandedMatrix<double> M =
                univariate_matrix_real(MatKind::Mass, kv, Restriction::DropBoth);
            out.push_back({p, n_el, cond2_eigvec(M)});
        }
    return out;
}

PerfRecord performance_run(const ManufacturedSolution& exact, int p, int n_el,
                           Preconditioner prec, const PcgOptions& opts) {
    const SpaceTimeProblem prob =
        SpaceTimeProblem::matched(exact.d, p, n_el, exact.T, exact.nu);
    const ProblemSolution sol = solve_problem(prob, exact, prec, opts);
    PerfRecord rec;
    rec.problem = exact.name;
    rec.p = p;
    rec.n_el = n_el;
    rec.prec = prec == Preconditioner::FastDiag ? "fd" : "none";
    rec.iters = sol.report.iterations;
    rec.setup_s = sol.report.setup_seconds;
    rec.solve_s = sol.report.solve_seconds;
    rec.converged = sol.report.converged;
    return rec;
}

} // namespace kronschro
