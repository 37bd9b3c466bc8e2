#pragma once

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "kronschro/banded.hpp"

namespace kronschro {

using cplx = std::complex<double>;

/// Dense complex tensor; linearization has axis 0 (time) fastest:
/// vec index = i_0 + i_1*n_0 + i_2*n_0*n_1 + ...
struct CoeffTensor {
    std::vector<int> dims;
    std::vector<cplx> v;

    CoeffTensor() = default;
    explicit CoeffTensor(std::vector<int> d);

    std::size_t size() const { return v.size(); }
    std::size_t stride(int axis) const;
    static std::size_t total(const std::vector<int>& dims);
};

/// Rectangular real matrix with a fixed number of contiguous nonzeros
/// per row (B-spline evaluation rows: p+1 entries starting at offset).
struct SparseRowMatrix {
    int rows = 0;
    int cols = 0;
    int nnz = 0;                // nonzeros per row
    std::vector<int> offset;    // first column per row
    std::vector<double> vals;   // rows x nnz, row-major

    double operator()(int i, int j) const {
        const int k = j - offset[i];
        return (k >= 0 && k < nnz) ? vals[static_cast<std::size_t>(i) * nnz + k] : 0.0;
    }

    /// Drop `left` leading and `right` trailing columns.
    SparseRowMatrix restricted_cols(int left, int right) const;
};

// m-mode products: contract axis `axis` of X with the matrix.
CoeffTensor mode_product(const CoeffTensor& X, const BandedMatrix<cplx>& J, int axis);
CoeffTensor mode_product(const CoeffTensor& X, const Eigen::MatrixXd& J, int axis);
CoeffTensor mode_product(const CoeffTensor& X, const SparseRowMatrix& J, int axis);
/// Contract with J^T (cols x rows result on that axis).
CoeffTensor mode_product_transpose(const CoeffTensor& X, const SparseRowMatrix& J, int axis);

/// Sum of scalar-weighted Kronecker products of banded univariate
/// factors; factor k acts on tensor axis k (axis 0 = time), so the
/// induced matrix is sum_t c_t (J_d x ... x J_1 x J_0).
class KroneckerOperator {
  public:
    struct Term {
        cplx coeff{1.0, 0.0};
        // one entry per axis; nullopt marks the identity
        std::vector<std::optional<BandedMatrix<cplx>>> factors;
    };

    explicit KroneckerOperator(std::vector<int> dims) : dims_(std::move(dims)) {}

    const std::vector<int>& dims() const { return dims_; }
    std::size_t vec_size() const { return CoeffTensor::total(dims_); }
    const std::vector<Term>& terms() const { return terms_; }

    void add_term(Term t);
    /// Convenience: coeff * kron of per-axis factors (nullopt = identity).
    void add_term(cplx coeff, std::vector<std::optional<BandedMatrix<cplx>>> factors);

    /// y = K x; terms are accumulated in declaration order.
    void apply(const cplx* x, cplx* y) const;
    std::vector<cplx> apply(const std::vector<cplx>& x) const;

    KroneckerOperator conjugate_transpose() const;

    /// Explicit dense matrix; guarded by a size cap.
    Eigen::MatrixXcd to_dense(std::size_t cap = 20000) const;

  private:
    std::vector<int> dims_;
    std::vector<Term> terms_;
};

} // namespace kronschro
