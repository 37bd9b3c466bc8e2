#include <doctest.h>

#include <random>

#include <Eigen/Dense>

#include "kronschro/fdsolver.hpp"

using namespace kronschro;

namespace {

std::mt19937_64 gen(23);

std::vector<cplx> random_vec(std::size_t n) {
    std::normal_distribution<double> dist;
    std::vector<cplx> r(n);
    for (auto& v : r)
        v = cplx(dist(gen), dist(gen));
    return r;
}

cplx dotc(const std::vector<cplx>& x, const std::vector<cplx>& y) {
    cplx s(0);
    for (std::size_t i = 0; i < x.size(); ++i)
        s += x[i] * std::conj(y[i]);
    return s;
}

} // namespace

TEST_CASE("eigenbasis transforms invert through the mass matrix") {
    // U is M-orthonormal, so (U^T x I)(M_s x I)(U x I) = I:
    // to_eigen(M_s from_eigen(x)) recovers x
    const SpaceTimeProblem prob = SpaceTimeProblem::uniform(2, 3, 3, 4, 1.0, 0.7);
    const UnivariateSet u = build_univariate(prob);
    const SpatialEigenbasis basis = spatial_eigenbasis(prob, u);
    CHECK(basis.lambda.size() == static_cast<std::size_t>(prob.N_s()));
    for (double l : basis.lambda)
        CHECK(l > 0);
    CoeffTensor x(prob.reduced_dims());
    x.v = random_vec(x.size());
    CoeffTensor y = basis.from_eigen(x);
    for (int l = 0; l < prob.d; ++l)
        y = mode_product(y, Eigen::MatrixXd(u.M[l].to_dense()), l + 1);
    const CoeffTensor back = basis.to_eigen(y);
    for (std::size_t i = 0; i < x.size(); ++i)
        CHECK(std::abs(back.v[i] - x.v[i]) < 1e-11);
}

TEST_CASE("fast-diagonalization apply inverts the dense preconditioner") {
    for (int d : {1, 2}) {
        const SpaceTimeProblem prob =
            SpaceTimeProblem::uniform(d, 2, d == 1 ? 5 : 3, 4, 1.0, 1.0);
        const FDPreconditioner fdp(prob);
        const Eigen::MatrixXcd P = fdp.to_dense(prob);
        CHECK((P - P.adjoint()).cwiseAbs().maxCoeff() < 1e-11);
        for (int trial = 0; trial < 20; ++trial) {
            const std::vector<cplx> r = random_vec(fdp.vec_size());
            const std::vector<cplx> z = fdp.apply(r);
            const Eigen::VectorXcd res =
                P * Eigen::Map<const Eigen::VectorXcd>(z.data(), z.size()) -
                Eigen::Map<const Eigen::VectorXcd>(r.data(), r.size());
            const double scale =
                Eigen::Map<const Eigen::VectorXcd>(r.data(), r.size()).norm();
            CHECK(res.norm() <= 1e-10 * scale);
        }
    }
}

TEST_CASE("preconditioner apply is self-adjoint and positive") {
    const SpaceTimeProblem prob = SpaceTimeProblem::uniform(1, 3, 6, 6, 2.0, 1.0);
    const FDPreconditioner fdp(prob);
    for (int trial = 0; trial < 5; ++trial) {
        const std::vector<cplx> u = random_vec(fdp.vec_size());
        const std::vector<cplx> v = random_vec(fdp.vec_size());
        const cplx a = dotc(fdp.apply(u), v);
        const cplx b = dotc(fdp.apply(v), u);
        CHECK(std::abs(a - std::conj(b)) < 1e-11 * (1.0 + std::abs(a)));
        const cplx q = dotc(fdp.apply(u), u);
        CHECK(std::abs(q.imag()) < 1e-11 * q.real());
        CHECK(q.real() > 0);
    }
}

TEST_CASE("preconditioner blocks are hermitian positive definite") {
    const SpaceTimeProblem prob = SpaceTimeProblem::uniform(1, 3, 8, 8, 1.0, 1.0);
    const UnivariateSet u = build_univariate(prob);
    const SpatialEigenbasis basis = spatial_eigenbasis(prob, u);
    const Eigen::MatrixXcd Lt = u.Lt.to_dense().cast<cplx>();
    const Eigen::MatrixXcd Mt = u.Mt.to_dense().cast<cplx>();
    const Eigen::MatrixXcd Wsym = u.Wt.to_dense() + u.Wt.to_dense().adjoint();
    for (double lam : basis.lambda) {
        const Eigen::MatrixXcd H =
            Lt + prob.nu * prob.nu * lam * lam * Mt + prob.nu * lam * Wsym;
        CHECK((H - H.adjoint()).cwiseAbs().maxCoeff() < 1e-11);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
        CHECK(es.eigenvalues().minCoeff() > 0);
    }
}

TEST_CASE("fast solver scales linearly") {
    const SpaceTimeProblem prob = SpaceTimeProblem::uniform(1, 2, 4, 4, 1.0, 1.0);
    const FDPreconditioner fdp(prob);
    const std::vector<cplx> r = random_vec(fdp.vec_size());
    std::vector<cplx> r2 = r;
    const cplx alpha(2.0, -3.0);
    for (auto& v : r2)
        v *= alpha;
    const std::vector<cplx> z = fdp.apply(r);
    const std::vector<cplx> z2 = fdp.apply(r2);
    for (std::size_t i = 0; i < z.size(); ++i)
        CHECK(std::abs(z2[i] - alpha * z[i]) < 1e-12);
}

TEST_CASE("galerkin fast solver inverts the galerkin matrix exactly") {
    const SpaceTimeProblem prob = SpaceTimeProblem::uniform(1, 3, 6, 5, 1.0, 1.0);
    const KroneckerOperator G = assemble_galerkin_operator(prob);
    const FastDiagSolver solver = galerkin_fast_solver(prob, build_univariate(prob));
    const std::vector<cplx> r = random_vec(solver.vec_size());

    const std::vector<cplx> z = solver.solve(r);
    const std::vector<cplx> gz = G.apply(z);
    double scale = 0, worst = 0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        scale = std::max(scale, std::abs(r[i]));
        worst = std::max(worst, std::abs(gz[i] - r[i]));
    }
    CHECK(worst <= 1e-10 * scale);

    const std::vector<cplx> za = solver.solve_adjoint(r);
    const std::vector<cplx> gza = G.conjugate_transpose().apply(za);
    worst = 0;
    for (std::size_t i = 0; i < r.size(); ++i)
        worst = std::max(worst, std::abs(gza[i] - r[i]));
    CHECK(worst <= 1e-10 * scale);
}

TEST_CASE("single-element mesh is handled") {
    const SpaceTimeProblem prob = SpaceTimeProblem::uniform(1, 2, 1, 1, 1.0, 1.0);
    CHECK(prob.N_dof() == 2); // one spatial dof, two time dofs
    const FDPreconditioner fdp(prob);
    const Eigen::MatrixXcd P = fdp.to_dense(prob);
    const std::vector<cplx> r = random_vec(fdp.vec_size());
    const std::vector<cplx> z = fdp.apply(r);
    const Eigen::VectorXcd res =
        P * Eigen::Map<const Eigen::VectorXcd>(z.data(), z.size()) -
        Eigen::Map<const Eigen::VectorXcd>(r.data(), r.size());
    CHECK(res.norm() < 1e-11);
}
