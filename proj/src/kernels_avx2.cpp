#include "kronschro/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>

namespace kronschro::kernels {

namespace {

// Complex doubles are interleaved (re, im); one __m256d holds two of them.

__attribute__((target("avx2,fma")))
void axpy_real_avx2(double a, const cplx* x, cplx* y, std::size_t n) {
    const double* xd = reinterpret_cast<const double*>(x);
    double* yd = reinterpret_cast<double*>(y);
    const std::size_t nd = 2 * n;
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= nd; i += 4) {
        __m256d vy = _mm256_loadu_pd(yd + i);
        __m256d vx = _mm256_loadu_pd(xd + i);
        vy = _mm256_fmadd_pd(va, vx, vy);
        _mm256_storeu_pd(yd + i, vy);
    }
    for (; i < nd; ++i)
        yd[i] += a * xd[i];
}

__attribute__((target("avx2,fma")))
void axpy_avx2(cplx a, const cplx* x, cplx* y, std::size_t n) {
    const double* xd = reinterpret_cast<const double*>(x);
    double* yd = reinterpret_cast<double*>(y);
    const __m256d var = _mm256_set1_pd(a.real());
    const __m256d vai = _mm256_set1_pd(a.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d vx = _mm256_loadu_pd(xd + 2 * i);
        __m256d vy = _mm256_loadu_pd(yd + 2 * i);
        __m256d vxs = _mm256_permute_pd(vx, 0x5); // (xi, xr) per lane pair
        // (ar*xr - ai*xi, ar*xi + ai*xr)
        __m256d prod = _mm256_addsub_pd(_mm256_mul_pd(var, vx),
                                        _mm256_mul_pd(vai, vxs));
        _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(vy, prod));
    }
    for (; i < n; ++i)
        y[i] += a * x[i];
}

__attribute__((target("avx2,fma")))
cplx dotc_avx2(const cplx* x, const cplx* y, std::size_t n) {
    const double* xd = reinterpret_cast<const double*>(x);
    const double* yd = reinterpret_cast<const double*>(y);
    __m256d acc_re = _mm256_setzero_pd(); // xr*yr, xi*yi pairs
    __m256d acc_im = _mm256_setzero_pd(); // xr*yi, xi*yr pairs
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d vx = _mm256_loadu_pd(xd + 2 * i);
        __m256d vy = _mm256_loadu_pd(yd + 2 * i);
        __m256d vys = _mm256_permute_pd(vy, 0x5);
        acc_re = _mm256_fmadd_pd(vx, vy, acc_re);
        acc_im = _mm256_fmadd_pd(vx, vys, acc_im);
    }
    alignas(32) double re4[4], im4[4];
    _mm256_store_pd(re4, acc_re);
    _mm256_store_pd(im4, acc_im);
    double re = re4[0] + re4[1] + re4[2] + re4[3];
    double im = (im4[0] - im4[1]) + (im4[2] - im4[3]);
    for (; i < n; ++i) {
        re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
        im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
    }
    return {re, im};
}

__attribute__((target("avx2,fma")))
double norm2sq_avx2(const cplx* x, std::size_t n) {
    const double* xd = reinterpret_cast<const double*>(x);
    const std::size_t nd = 2 * n;
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= nd; i += 4) {
        __m256d vx = _mm256_loadu_pd(xd + i);
        acc = _mm256_fmadd_pd(vx, vx, acc);
    }
    alignas(32) double s4[4];
    _mm256_store_pd(s4, acc);
    double s = s4[0] + s4[1] + s4[2] + s4[3];
    for (; i < nd; ++i)
        s += xd[i] * xd[i];
    return s;
}

const Backend avx2_impl{
    "avx2", axpy_real_avx2, axpy_avx2, dotc_avx2, norm2sq_avx2};

} // namespace

const Backend* avx2_backend() {
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
        return &avx2_impl;
    return nullptr;
}

} // namespace kronschro::kernels

#else

namespace kronschro::kernels {
const Backend* avx2_backend() { return nullptr; }
} // namespace kronschro::kernels

#endif
