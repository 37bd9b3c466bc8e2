#include <doctest.h>

#include <random>

#include <Eigen/Dense>

#include "kronschro/tensorops.hpp"

using namespace kronschro;

namespace {

std::mt19937_64 gen(42);

BandedMatrix<cplx> random_banded(int n, int bw) {
    std::normal_distribution<double> dist;
    BandedMatrix<cplx> a(n, bw);
    for (int i = 0; i < n; ++i)
        for (int j = std::max(0, i - bw); j <= std::min(n - 1, i + bw); ++j)
            a.ref(i, j) = cplx(dist(gen), dist(gen));
    return a;
}

CoeffTensor random_tensor(std::vector<int> dims) {
    std::normal_distribution<double> dist;
    CoeffTensor t(std::move(dims));
    for (auto& v : t.v)
        v = cplx(dist(gen), dist(gen));
    return t;
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& C, const Eigen::MatrixXcd& D) {
    Eigen::MatrixXcd K(C.rows() * D.rows(), C.cols() * D.cols());
    for (int i = 0; i < C.rows(); ++i)
        for (int j = 0; j < C.cols(); ++j)
            K.block(i * D.rows(), j * D.cols(), D.rows(), D.cols()) = C(i, j) * D;
    return K;
}

} // namespace

TEST_CASE("banded matvec and restriction against dense") {
    const BandedMatrix<cplx> a = random_banded(9, 2);
    const Eigen::MatrixXcd ad = a.to_dense();
    CoeffTensor x = random_tensor({9});
    std::vector<cplx> y(9);
    a.matvec(x.v.data(), y.data());
    const Eigen::VectorXcd yd =
        ad * Eigen::Map<const Eigen::VectorXcd>(x.v.data(), 9);
    for (int i = 0; i < 9; ++i)
        CHECK(std::abs(y[i] - yd(i)) < 1e-13);

    const BandedMatrix<cplx> r = a.restricted(1, 8);
    const Eigen::MatrixXcd rd = r.to_dense();
    CHECK((rd - ad.block(1, 1, 7, 7)).cwiseAbs().maxCoeff() < 1e-15);

    const Eigen::MatrixXcd hd = a.conjugate_transpose().to_dense();
    CHECK((hd - ad.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("mode products against dense contraction") {
    const CoeffTensor x = random_tensor({4, 3, 5});
    for (int axis : {0, 1, 2}) {
        const int n = x.dims[axis];
        const BandedMatrix<cplx> j = random_banded(n, 1);
        const CoeffTensor y = mode_product(x, j, axis);
        const Eigen::MatrixXcd jd = j.to_dense();
        // brute-force contraction
        std::vector<int> idx(3, 0);
        for (std::size_t f = 0; f < y.size(); ++f) {
            cplx acc(0);
            for (int k = 0; k < n; ++k) {
                std::vector<int> src = idx;
                src[axis] = k;
                const std::size_t sf =
                    src[0] + x.dims[0] * (src[1] + std::size_t(x.dims[1]) * src[2]);
                acc += jd(idx[axis], k) * x.v[sf];
            }
            CHECK(std::abs(acc - y.v[f]) < 1e-12);
            for (int a = 0; a < 3; ++a) {
                if (++idx[a] < y.dims[a])
                    break;
                idx[a] = 0;
            }
        }
    }
}

TEST_CASE("sparse-row mode product matches its transpose") {
    SparseRowMatrix e;
    e.rows = 6;
    e.cols = 4;
    e.nnz = 2;
    std::normal_distribution<double> dist;
    for (int i = 0; i < e.rows; ++i) {
        e.offset.push_back(std::min(i / 2, e.cols - e.nnz));
        e.vals.push_back(dist(gen));
        e.vals.push_back(dist(gen));
    }
    const CoeffTensor x = random_tensor({3, 4});
    const CoeffTensor y = mode_product(x, e, 1); // (3, 6)
    const CoeffTensor xt = random_tensor({3, 6});
    const CoeffTensor z = mode_product_transpose(xt, e, 1); // (3, 4)
    // <E x, w> == <x, E^T w> for the axis-1 contraction
    cplx lhs(0), rhs(0);
    for (std::size_t i = 0; i < y.size(); ++i)
        lhs += y.v[i] * xt.v[i];
    for (std::size_t i = 0; i < z.size(); ++i)
        rhs += x.v[i] * z.v[i];
    CHECK(std::abs(lhs - rhs) < 1e-12);
}

TEST_CASE("kronecker operator equals its dense expansion") {
    const std::vector<int> dims{3, 4, 2};
    KroneckerOperator K(dims);
    K.add_term(cplx(1.5, -0.5),
               {random_banded(3, 1), random_banded(4, 2), random_banded(2, 0)});
    K.add_term(cplx(0, 2.0), {std::nullopt, random_banded(4, 1), std::nullopt});
    K.add_term(cplx(-1, 0), {random_banded(3, 0), std::nullopt, random_banded(2, 1)});

    const Eigen::MatrixXcd kd = K.to_dense();
    const CoeffTensor x = random_tensor(dims);
    const std::vector<cplx> y = K.apply(x.v);
    const Eigen::VectorXcd yd =
        kd * Eigen::Map<const Eigen::VectorXcd>(x.v.data(), x.size());
    double scale = yd.cwiseAbs().maxCoeff();
    for (std::size_t i = 0; i < y.size(); ++i)
        CHECK(std::abs(y[i] - yd(i)) <= 1e-12 * scale);

    const Eigen::MatrixXcd khd = K.conjugate_transpose().to_dense();
    CHECK((khd - kd.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("kron factor ordering: axis 0 is the fastest") {
    // dims (2, 3): matrix must be kron(J_1, J_0)
    KroneckerOperator K({2, 3});
    const BandedMatrix<cplx> j0 = random_banded(2, 1);
    const BandedMatrix<cplx> j1 = random_banded(3, 2);
    K.add_term(cplx(1, 0), {j0, j1});
    const Eigen::MatrixXcd expect = kron(j1.to_dense(), j0.to_dense());
    CHECK((K.to_dense() - expect).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("size guards") {
    KroneckerOperator K({2, 2});
    CHECK_THROWS(K.add_term(cplx(1, 0), {random_banded(3, 1), std::nullopt}));
    K.add_term(cplx(1, 0), {std::nullopt, std::nullopt});
    CHECK_THROWS(K.apply(std::vector<cplx>(5)));
    CHECK_THROWS(CoeffTensor({2, 0}));
}
