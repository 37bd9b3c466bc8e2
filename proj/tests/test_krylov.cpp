#include <doctest.h>

#include <random>

#include <Eigen/Dense>

#include "kronschro/experiments.hpp"
#include "kronschro/krylov.hpp"

using namespace kronschro;

namespace {

std::mt19937_64 gen(31);

std::vector<cplx> random_vec(std::size_t n) {
    std::normal_distribution<double> dist;
    std::vector<cplx> r(n);
    for (auto& v : r)
        v = cplx(dist(gen), dist(gen));
    return r;
}

Eigen::MatrixXcd random_hpd(int n) {
    std::normal_distribution<double> dist;
    Eigen::MatrixXcd B(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            B(i, j) = cplx(dist(gen), dist(gen));
    return B.adjoint() * B + Eigen::MatrixXcd::Identity(n, n);
}

ApplyFn dense_apply(const Eigen::MatrixXcd& A) {
    return [A](const cplx* x, cplx* y) {
        Eigen::Map<Eigen::VectorXcd>(y, A.rows()) =
            A * Eigen::Map<const Eigen::VectorXcd>(x, A.cols());
    };
}

} // namespace

TEST_CASE("zero right-hand side returns immediately") {
    const Eigen::MatrixXcd A = random_hpd(6);
    const SolveReport rep = pcg(dense_apply(A), nullptr, std::vector<cplx>(6));
    CHECK(rep.converged);
    CHECK(rep.iterations == 0);
    for (const cplx& v : rep.x)
        CHECK(v == cplx(0));
}

TEST_CASE("exact-inverse preconditioner converges in one iteration") {
    const int n = 12;
    const Eigen::MatrixXcd A = random_hpd(n);
    const Eigen::MatrixXcd Ainv = A.inverse();
    const std::vector<cplx> b = random_vec(n);
    const SolveReport rep = pcg(dense_apply(A), dense_apply(Ainv), b, {1e-10, 50});
    CHECK(rep.converged);
    CHECK(rep.iterations == 1);
    const Eigen::VectorXcd x =
        A.fullPivLu().solve(Eigen::Map<const Eigen::VectorXcd>(b.data(), n));
    for (int i = 0; i < n; ++i)
        CHECK(std::abs(rep.x[i] - x(i)) < 1e-9);
}

TEST_CASE("unpreconditioned pcg solves and the error decreases monotonically") {
    const int n = 20;
    const Eigen::MatrixXcd A = random_hpd(n);
    const std::vector<cplx> b = random_vec(n);
    SolveReport last;
    double prev_err = -1;
    const Eigen::VectorXcd xs =
        A.fullPivLu().solve(Eigen::Map<const Eigen::VectorXcd>(b.data(), n));
    for (int maxit = 1; maxit <= 100; ++maxit) {
        const SolveReport rep = pcg(dense_apply(A), nullptr, b, {1e-10, maxit});
        Eigen::VectorXcd e =
            Eigen::Map<const Eigen::VectorXcd>(rep.x.data(), n) - xs;
        const double err = std::sqrt(std::abs((e.adjoint() * A * e)(0, 0)));
        if (prev_err >= 0)
            CHECK(err <= prev_err * (1 + 1e-12) + 1e-14);
        prev_err = err;
        last = rep;
        if (rep.converged)
            break;
    }
    CHECK(last.converged);
    CHECK(prev_err < 1e-7);
}

TEST_CASE("breakdown is flagged on an indefinite operator") {
    const Eigen::MatrixXcd A = -Eigen::MatrixXcd::Identity(5, 5);
    const SolveReport rep = pcg(dense_apply(A), nullptr, random_vec(5));
    CHECK(rep.breakdown);
    CHECK_FALSE(rep.converged);
}

TEST_CASE("residual history is relative and decreasing at exit") {
    const Eigen::MatrixXcd A = random_hpd(15);
    const std::vector<cplx> b = random_vec(15);
    const SolveReport rep = pcg(dense_apply(A), nullptr, b, {1e-10, 100, true});
    CHECK(rep.converged);
    REQUIRE(!rep.res_history.empty());
    CHECK(rep.res_history.back() <= 1e-10);
}

TEST_CASE("fast-diagonalization preconditioning beats none") {
    const SpaceTimeProblem prob = SpaceTimeProblem::matched(1, 3, 16, 1.0, 1.0);
    const KroneckerOperator A = assemble_system_operator(prob);
    const FDPreconditioner fdp(prob);
    const std::vector<cplx> b = random_vec(A.vec_size());
    const ApplyFn apply_a = [&](const cplx* x, cplx* y) { A.apply(x, y); };
    const ApplyFn apply_p = [&](const cplx* x, cplx* y) { fdp.apply(x, y); };
    const SolveReport with = pcg(apply_a, apply_p, b, {1e-8, 300});
    const SolveReport without = pcg(apply_a, nullptr, b, {1e-8, 300});
    CHECK(with.converged);
    CHECK(with.iterations < 20);
    CHECK(without.iterations > 2 * with.iterations);
}

TEST_CASE("solving the preconditioner with itself takes one iteration") {
    const SpaceTimeProblem prob = SpaceTimeProblem::matched(1, 2, 8, 1.0, 1.0);
    const FDPreconditioner fdp(prob);
    const KroneckerOperator A = assemble_system_operator(prob);
    // apply P via dense, precondition with the fast solver
    const Eigen::MatrixXcd P = fdp.to_dense(prob);
    const ApplyFn apply_p = [&](const cplx* x, cplx* y) { fdp.apply(x, y); };
    const SolveReport rep =
        pcg(dense_apply(P), apply_p, random_vec(fdp.vec_size()), {1e-8, 10});
    CHECK(rep.converged);
    CHECK(rep.iterations == 1);
    (void)A;
}

TEST_CASE("lanczos extremes of a diagonal operator") {
    const int n = 40;
    Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        T(i, i) = 1.0 + i;
    const ApplyFn id = [n](const cplx* x, cplx* y) {
        std::copy(x, x + n, y);
    };
    CHECK(lanczos_extreme_eigenvalue(dense_apply(T), id, n, n, true) ==
          doctest::Approx(40.0).epsilon(1e-8));
    CHECK(lanczos_extreme_eigenvalue(dense_apply(T), id, n, n, false) ==
          doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("lanczos in a weighted inner product") {
    // T = B^-1 C with B, C HPD is self-adjoint in <.,.>_B; its extreme
    // eigenvalues are those of the pencil (C, B)
    const int n = 10;
    const Eigen::MatrixXcd B = random_hpd(n);
    const Eigen::MatrixXcd C = random_hpd(n);
    const Eigen::MatrixXcd T = B.fullPivLu().solve(C);
    const double lam = lanczos_extreme_eigenvalue(dense_apply(T), dense_apply(B),
                                                  n, n, true);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXcd> es(C, B);
    CHECK(lam == doctest::Approx(es.eigenvalues().maxCoeff()).epsilon(1e-8));
}
