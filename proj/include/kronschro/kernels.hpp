#pragma once

#include <complex>
#include <cstddef>
#include <string_view>

namespace kronschro::kernels {

using cplx = std::complex<double>;

/// A set of complex vector kernels. `scalar` is the reference
/// implementation; other backends must agree with it up to rounding.
struct Backend {
    const char* name;
    // y += a*x, real scalar
    void (*axpy_real)(double a, const cplx* x, cplx* y, std::size_t n);
    // y += a*x, complex scalar
    void (*axpy)(cplx a, const cplx* x, cplx* y, std::size_t n);
    // sum conj(x_i)*y_i
    cplx (*dotc)(const cplx* x, const cplx* y, std::size_t n);
    // sum |x_i|^2
    double (*norm2sq)(const cplx* x, std::size_t n);
};

const Backend& scalar_backend();

/// AVX2+FMA backend, or nullptr when the CPU does not support it.
const Backend* avx2_backend();

/// Backend selected at startup (best supported), unless overridden.
const Backend& active();

/// Force a backend by name ("scalar", "avx2", "auto"). Throws on an
/// unknown name or an unsupported backend.
void force_backend(std::string_view name);

inline void axpy(double a, const cplx* x, cplx* y, std::size_t n) {
    active().axpy_real(a, x, y, n);
}
inline void axpy(cplx a, const cplx* x, cplx* y, std::size_t n) {
    active().axpy(a, x, y, n);
}
inline cplx dotc(const cplx* x, const cplx* y, std::size_t n) {
    return active().dotc(x, y, n);
}
inline double norm2sq(const cplx* x, std::size_t n) {
    return active().norm2sq(x, n);
}

} // namespace kronschro::kernels
