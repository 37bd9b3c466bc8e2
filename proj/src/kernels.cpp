#include "kronschro/kernels.hpp"

#include <stdexcept>
#include <string>

namespace kronschro::kernels {

namespace {

void axpy_real_scalar(double a, const cplx* x, cplx* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        y[i] += a * x[i];
}

void axpy_scalar(cplx a, const cplx* x, cplx* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        y[i] += a * x[i];
}

cplx dotc_scalar(const cplx* x, const cplx* y, std::size_t n) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
        im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
    }
    return {re, im};
}

double norm2sq_scalar(const cplx* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
    return s;
}

const Backend scalar_impl{
    "scalar", axpy_real_scalar, axpy_scalar, dotc_scalar, norm2sq_scalar};

const Backend* select_default() {
    if (const Backend* b = avx2_backend())
        return b;
    return &scalar_impl;
}

const Backend* g_active = nullptr;

} // namespace

const Backend& scalar_backend() { return scalar_impl; }

const Backend& active() {
    if (!g_active)
        g_active = select_default();
    return *g_active;
}

void force_backend(std::string_view name) {
    if (name == "auto") {
        g_active = select_default();
    } else if (name == "scalar") {
        g_active = &scalar_impl;
    } else if (name == "avx2") {
        const Backend* b = avx2_backend();
        if (!b)
            throw std::runtime_error("avx2 backend not supported on this CPU");
        g_active = b;
    } else {
        throw std::invalid_argument("unknown kernel backend: " + std::string(name));
    }
}

} // namespace kronschro::kernels
