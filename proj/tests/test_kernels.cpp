#include <doctest.h>

#include <random>
#include <vector>

#include "kronschro/kernels.hpp"

using namespace kronschro;
using kernels::cplx;

TEST_CASE("dotc and norm2sq against hand values") {
    const std::vector<cplx> x{{1, 2}, {3, -1}};
    const std::vector<cplx> y{{2, -1}, {1, 1}};
    const cplx d = kernels::scalar_backend().dotc(x.data(), y.data(), 2);
    CHECK(d.real() == doctest::Approx(2.0));
    CHECK(d.imag() == doctest::Approx(-1.0));
    CHECK(kernels::scalar_backend().norm2sq(x.data(), 2) == doctest::Approx(15.0));
}

TEST_CASE("axpy variants") {
    std::vector<cplx> x{{1, 1}, {2, 0}, {0, -3}};
    std::vector<cplx> y{{1, 0}, {0, 1}, {1, 1}};
    kernels::scalar_backend().axpy_real(2.0, x.data(), y.data(), 3);
    CHECK(y[0] == cplx(3, 2));
    CHECK(y[2] == cplx(1, -5));
    kernels::scalar_backend().axpy(cplx(0, 1), x.data(), y.data(), 3);
    // i*(1+i) = -1+i added to (3,2)
    CHECK(y[0].real() == doctest::Approx(2.0));
    CHECK(y[0].imag() == doctest::Approx(3.0));
}

TEST_CASE("avx2 backend agrees with scalar") {
    const kernels::Backend* v = kernels::avx2_backend();
    if (!v)
        return; // not supported on this host
    std::mt19937_64 gen(99);
    std::normal_distribution<double> dist;
    for (std::size_t n : {0, 1, 2, 3, 4, 5, 7, 8, 15, 64, 97, 1000}) {
        std::vector<cplx> x(n), y0(n), y1(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = cplx(dist(gen), dist(gen));
            y0[i] = cplx(dist(gen), dist(gen));
        }
        y1 = y0;
        const cplx a(dist(gen), dist(gen));
        kernels::scalar_backend().axpy(a, x.data(), y0.data(), n);
        v->axpy(a, x.data(), y1.data(), n);
        for (std::size_t i = 0; i < n; ++i)
            CHECK(std::abs(y0[i] - y1[i]) < 1e-12);

        y1 = y0;
        kernels::scalar_backend().axpy_real(a.real(), x.data(), y0.data(), n);
        v->axpy_real(a.real(), x.data(), y1.data(), n);
        for (std::size_t i = 0; i < n; ++i)
            CHECK(std::abs(y0[i] - y1[i]) < 1e-12);

        const cplx d0 = kernels::scalar_backend().dotc(x.data(), y0.data(), n);
        const cplx d1 = v->dotc(x.data(), y0.data(), n);
        CHECK(std::abs(d0 - d1) <= 1e-12 * (1.0 + std::abs(d0)));
        CHECK(kernels::scalar_backend().norm2sq(x.data(), n) ==
              doctest::Approx(v->norm2sq(x.data(), n)).epsilon(1e-12));
    }
}

TEST_CASE("backend selection") {
    CHECK_THROWS(kernels::force_backend("no-such-backend"));
    kernels::force_backend("scalar");
    CHECK(std::string(kernels::active().name) == "scalar");
    kernels::force_backend("auto");
    if (kernels::avx2_backend())
        CHECK(std::string(kernels::active().name) == "avx2");
}
