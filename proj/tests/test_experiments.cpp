#include <doctest.h>

#include <cmath>

#include <Eigen/Dense>

#include "kronschro/experiments.hpp"

using namespace kronschro;

namespace {

ManufacturedSolution linear_solution() {
    ManufacturedSolution s;
    s.name = "linear";
    s.d = 1;
    s.T = 1.0;
    s.nu = 1.0;
    s.homogeneous = false;
    s.u = [](double t, std::span<const double> x) { return cplx(t + x[0], 0); };
    s.f = [](double, std::span<const double>) { return cplx(0, 1); };
    return s;
}

} // namespace

TEST_CASE("error norms against a closed-form integral") {
    // u = t x, f = i x; with u_h = 0 the errors are
    // ||u|| = sqrt(1/9) and sqrt(||u||^2 + ||f||^2) = sqrt(1/9 + 1/3) = 2/3
    ManufacturedSolution s;
    s.d = 1;
    s.T = 1.0;
    s.nu = 1.0;
    s.u = [](double t, std::span<const double> x) { return cplx(t * x[0], 0); };
    s.f = [](double, std::span<const double> x) { return cplx(0, x[0]); };
    const SpaceTimeProblem prob = SpaceTimeProblem::uniform(1, 2, 4, 4, 1.0, 1.0);
    const std::vector<cplx> zero(CoeffTensor::total(prob.full_dims()));
    const auto [eL2, eV] = error_norms(prob, zero, s);
    CHECK(eL2 == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(eV == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("a solution inside the trial space is reproduced") {
    const ManufacturedSolution s = linear_solution();
    const SpaceTimeProblem prob = SpaceTimeProblem::matched(1, 2, 6, s.T, s.nu);
    const ProblemSolution sol =
        solve_problem(prob, s, Preconditioner::FastDiag, {1e-12, 200});
    CHECK(sol.report.converged);
    const auto [eL2, eV] = error_norms(prob, sol.full_coeffs, s);
    CHECK(eL2 < 1e-9);
    CHECK(eV < 1e-9);
}

TEST_CASE("V-norm error dominates the L2 error") {
    const ManufacturedSolution s = gaussian_1d();
    const SpaceTimeProblem prob = SpaceTimeProblem::matched(1, 2, 8, s.T, s.nu);
    const ProblemSolution sol = solve_problem(prob, s);
    const auto [eL2, eV] = error_norms(prob, sol.full_coeffs, s);
    CHECK(eV >= eL2);
    CHECK(eL2 > 0);
}

TEST_CASE("convergence study bookkeeping and first-order rate at p = 2") {
    const std::vector<ConvergenceRecord> recs =
        convergence_study(gaussian_1d(), 2, {8, 16});
    REQUIRE(recs.size() == 2);
    CHECK(recs[0].order == 0);
    CHECK(recs[0].h == doctest::Approx(2 * recs[1].h));
    CHECK(recs[1].Ndof > recs[0].Ndof);
    CHECK(recs[1].errV < recs[0].errV);
    CHECK(recs[1].order > 0.5);
    CHECK(recs[1].order < 1.6);
}

TEST_CASE("least-squares inf-sup constant matches a dense eigensolve") {
    const int p = 2, n_el = 4;
    const double alpha = infsup_constant(InfSupMethod::LeastSquares, p, n_el);
    const SpaceTimeProblem prob = SpaceTimeProblem::matched(1, p, n_el, 1.0, 1.0);
    const Eigen::MatrixXcd A = assemble_system_operator(prob).to_dense();
    const Eigen::MatrixXcd MQ = assemble_spacetime_mass(prob).to_dense();
    const Eigen::VectorXd lam = dense_hermitian_geneig(MQ, A);
    const double dense = 1.0 / std::sqrt(1.0 + lam.maxCoeff());
    CHECK(alpha == doctest::Approx(dense).epsilon(1e-6));
    // equivalent route: smallest eigenvalue of (A, MQ + A)
    const Eigen::VectorXd lam2 = dense_hermitian_geneig(A, MQ + A);
    CHECK(alpha == doctest::Approx(std::sqrt(lam2.minCoeff())).epsilon(1e-6));
    CHECK(alpha > 0);
    CHECK(alpha < 1);
}

TEST_CASE("galerkin inf-sup constant matches a dense eigensolve") {
    const int p = 2, n_el = 4;
    const double alpha = infsup_constant(InfSupMethod::Galerkin, p, n_el);
    const SpaceTimeProblem prob = SpaceTimeProblem::matched(1, p, n_el, 1.0, 1.0);
    const Eigen::MatrixXcd A = assemble_system_operator(prob).to_dense();
    const Eigen::MatrixXcd MQ = assemble_spacetime_mass(prob).to_dense();
    const Eigen::MatrixXcd Ag = assemble_galerkin_operator(prob).to_dense();
    const Eigen::MatrixXcd GV = MQ + A;
    // lambda_max of Ag^-1 MQ Ag^-H GV = lambda_max of the hermitian
    // pencil (MQ, Ag GV^-1 Ag^H)
    const Eigen::MatrixXcd B = Ag * GV.fullPivLu().solve(Ag.adjoint());
    const Eigen::VectorXd lam = dense_hermitian_geneig(MQ, 0.5 * (B + B.adjoint()));
    CHECK(alpha == doctest::Approx(1.0 / std::sqrt(lam.maxCoeff())).epsilon(1e-6));
}

TEST_CASE("spatial spectral-equivalence eigenvalues") {
    for (int n_el : {6, 12}) {
        const std::vector<double> lam = spectral_equivalence_space(3, n_el);
        CHECK(lam.size() == static_cast<std::size_t>(n_el + 3 - 2));
        for (std::size_t i = 0; i < lam.size(); ++i) {
            CHECK(lam[i] > 0);
            if (i > 0)
                CHECK(lam[i] >= lam[i - 1]);
        }
        // B majorizes L M^-1 L with equivalence constants near 1: the
        // smallest eigenvalue hugs 1 from above, the largest stays O(1)
        CHECK(lam.front() >= 1.0 - 1e-9);
        CHECK(lam.front() < 1.05);
        CHECK(lam.back() > 1.2);
        CHECK(lam.back() < 10.0);
    }
}

TEST_CASE("time pencil spread grows under refinement") {
    const auto spread = [](const std::vector<double>& lam) {
        return lam.back() / lam.front();
    };
    const std::vector<double> coarse = spectral_equivalence_time(2, 8);
    const std::vector<double> fine = spectral_equivalence_time(2, 32);
    CHECK(spread(fine) > 2 * spread(coarse));
}

TEST_CASE("condition table is mesh independent") {
    const std::vector<ConditionRecord> recs = condition_table({2, 3}, {8, 16});
    REQUIRE(recs.size() == 4);
    for (const ConditionRecord& r : recs)
        CHECK(r.kappa2 >= 1.0);
    CHECK(recs[0].kappa2 ==
          doctest::Approx(recs[1].kappa2).epsilon(0.05)); // p = 2, both meshes
    CHECK(recs[2].kappa2 == doctest::Approx(recs[3].kappa2).epsilon(0.05));
    CHECK(recs[2].kappa2 > recs[0].kappa2); // grows with the degree
}

TEST_CASE("preconditioning pays off in the performance record") {
    const ManufacturedSolution s = gaussian_1d();
    const PerfRecord fd =
        performance_run(s, 2, 8, Preconditioner::FastDiag, {1e-8, 1000});
    const PerfRecord none =
        performance_run(s, 2, 8, Preconditioner::None, {1e-8, 1000});
    CHECK(fd.converged);
    CHECK(none.converged);
    CHECK(fd.prec == "fd");
    CHECK(none.prec == "none");
    CHECK(none.iters > fd.iters);
    CHECK(fd.iters < 20);
}

TEST_CASE("mismatched problem descriptors are rejected") {
    const SpaceTimeProblem prob = SpaceTimeProblem::matched(1, 2, 4, 1.0, 1.0);
    CHECK_THROWS(solve_problem(prob, gaussian_1d())); // T differs
}
