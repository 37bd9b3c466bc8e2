#include "kronschro/tensorops.hpp"

#include <cstring>
#include <stdexcept>

#include "kronschro/kernels.hpp"

namespace kronschro {

CoeffTensor::CoeffTensor(std::vector<int> d) : dims(std::move(d)) {
    v.assign(total(dims), cplx(0));
}

std::size_t CoeffTensor::total(const std::vector<int>& dims) {
    std::size_t n = 1;
    for (int d : dims) {
        if (d < 1)
            throw std::invalid_argument("CoeffTensor: dims must be positive");
        n *= static_cast<std::size_t>(d);
    }
    return n;
}

std::size_t CoeffTensor::stride(int axis) const {
    std::size_t s = 1;
    for (int k = 0; k < axis; ++k)
        s *= static_cast<std::size_t>(dims[k]);
    return s;
}

SparseRowMatrix SparseRowMatrix::restricted_cols(int left, int right) const {
    SparseRowMatrix r;
    r.rows = rows;
    r.cols = cols - left - right;
    r.nnz = nnz;
    r.offset.resize(rows);
    r.vals.assign(static_cast<std::size_t>(rows) * nnz, 0.0);
    for (int i = 0; i < rows; ++i) {
        r.offset[i] = offset[i] - left;
        for (int k = 0; k < nnz; ++k) {
            const int j = offset[i] + k - left;
            if (j >= 0 && j < r.cols)
                r.vals[static_cast<std::size_t>(i) * nnz + k] =
                    vals[static_cast<std::size_t>(i) * nnz + k];
        }
        // clamp offsets so column indices stay in range; zeroed entries
        // outside the kept block are harmless
        if (r.offset[i] < 0) {
            const int shift = -r.offset[i];
            for (int k = 0; k < r.nnz - shift; ++k)
                r.vals[static_cast<std::size_t>(i) * nnz + k] =
                    r.vals[static_cast<std::size_t>(i) * nnz + k + shift];
            for (int k = std::max(0, r.nnz - shift); k < r.nnz; ++k)
                r.vals[static_cast<std::size_t>(i) * nnz + k] = 0.0;
            r.offset[i] = 0;
        }
        if (r.offset[i] + r.nnz > r.cols)
            r.offset[i] = std::max(0, r.cols - r.nnz);
    }
    return r;
}

namespace {

struct AxisGeom {
    std::size_t stride;   // product of dims before axis
    int nm;               // size along axis
    std::size_t outer;    // product of dims after axis
};

AxisGeom geom(const CoeffTensor& X, int axis) {
    if (axis < 0 || axis >= static_cast<int>(X.dims.size()))
        throw std::invalid_argument("mode_product: axis out of range");
    AxisGeom g;
    g.stride = X.stride(axis);
    g.nm = X.dims[axis];
    g.outer = X.size() / (g.stride * static_cast<std::size_t>(g.nm));
    return g;
}

CoeffTensor make_output(const CoeffTensor& X, int axis, int new_dim) {
    std::vector<int> d = X.dims;
    d[axis] = new_dim;
    return CoeffTensor(std::move(d));
}

} // namespace

CoeffTensor mode_product(const CoeffTensor& X, const BandedMatrix<cplx>& J, int axis) {
    const AxisGeom g = geom(X, axis);
    if (J.cols() != g.nm)
        throw std::invalid_argument("mode_product: dimension mismatch");
    CoeffTensor Y = make_output(X, axis, J.rows());
    const int bw = J.bandwidth();
    const std::size_t s = g.stride;
    if (s == 1) {
        for (std::size_t o = 0; o < g.outer; ++o)
            J.matvec(X.v.data() + o * g.nm, Y.v.data() + o * J.rows());
        return Y;
    }
    const std::size_t slab_in = s * static_cast<std::size_t>(g.nm);
    const std::size_t slab_out = s * static_cast<std::size_t>(J.rows());
    for (std::size_t o = 0; o < g.outer; ++o) {
        const cplx* xin = X.v.data() + o * slab_in;
        cplx* yout = Y.v.data() + o * slab_out;
        for (int r = 0; r < J.rows(); ++r) {
            cplx* ycol = yout + static_cast<std::size_t>(r) * s;
            const int j0 = std::max(0, r - bw);
            const int j1 = std::min(g.nm - 1, r + bw);
            for (int j = j0; j <= j1; ++j) {
                const cplx a = J(r, j);
                if (a == cplx(0))
                    continue;
                const cplx* xcol = xin + static_cast<std::size_t>(j) * s;
                if (a.imag() == 0.0)
                    kernels::axpy(a.real(), xcol, ycol, s);
                else
                    kernels::axpy(a, xcol, ycol, s);
            }
        }
    }
    return Y;
}

CoeffTensor mode_product(const CoeffTensor& X, const Eigen::MatrixXd& J, int axis) {
    const AxisGeom g = geom(X, axis);
    if (J.cols() != g.nm)
        throw std::invalid_argument("mode_product: dimension mismatch");
    const int l = static_cast<int>(J.rows());
    CoeffTensor Y = make_output(X, axis, l);
    const std::size_t s = g.stride;
    const std::size_t slab_in = s * static_cast<std::size_t>(g.nm);
    const std::size_t slab_out = s * static_cast<std::size_t>(l);
    for (std::size_t o = 0; o < g.outer; ++o) {
        const cplx* xin = X.v.data() + o * slab_in;
        cplx* yout = Y.v.data() + o * slab_out;
        if (s == 1) {
            for (int r = 0; r < l; ++r) {
                cplx acc(0);
                for (int j = 0; j < g.nm; ++j)
                    acc += J(r, j) * xin[j];
                yout[r] = acc;
            }
        } else {
            for (int r = 0; r < l; ++r) {
                cplx* ycol = yout + static_cast<std::size_t>(r) * s;
                for (int j = 0; j < g.nm; ++j) {
                    const double a = J(r, j);
                    if (a != 0.0)
                        kernels::axpy(a, xin + static_cast<std::size_t>(j) * s, ycol, s);
                }
            }
        }
    }
    return Y;
}

CoeffTensor mode_product(const CoeffTensor& X, const SparseRowMatrix& J, int axis) {
    const AxisGeom g = geom(X, axis);
    if (J.cols != g.nm)
        throw std::invalid_argument("mode_product: dimension mismatch");
    CoeffTensor Y = make_output(X, axis, J.rows);
    const std::size_t s = g.stride;
    const std::size_t slab_in = s * static_cast<std::size_t>(g.nm);
    const std::size_t slab_out = s * static_cast<std::size_t>(J.rows);
    for (std::size_t o = 0; o < g.outer; ++o) {
        const cplx* xin = X.v.data() + o * slab_in;
        cplx* yout = Y.v.data() + o * slab_out;
        for (int r = 0; r < J.rows; ++r) {
            const double* row = J.vals.data() + static_cast<std::size_t>(r) * J.nnz;
            const int c0 = J.offset[r];
            if (s == 1) {
                cplx acc(0);
                for (int k = 0; k < J.nnz; ++k)
                    acc += row[k] * xin[c0 + k];
                yout[r] = acc;
            } else {
                cplx* ycol = yout + static_cast<std::size_t>(r) * s;
                for (int k = 0; k < J.nnz; ++k)
                    if (row[k] != 0.0)
                        kernels::axpy(row[k],
                                      xin + static_cast<std::size_t>(c0 + k) * s,
                                      ycol, s);
            }
        }
    }
    return Y;
}

CoeffTensor mode_product_transpose(const CoeffTensor& X, const SparseRowMatrix& J, int axis) {
    const AxisGeom g = geom(X, axis);
    if (J.rows != g.nm)
        throw std::invalid_argument("mode_product_transpose: dimension mismatch");
    CoeffTensor Y = make_output(X, axis, J.cols);
    const std::size_t s = g.stride;
    const std::size_t slab_in = s * static_cast<std::size_t>(g.nm);
    const std::size_t slab_out = s * static_cast<std::size_t>(J.cols);
    for (std::size_t o = 0; o < g.outer; ++o) {
        const cplx* xin = X.v.data() + o * slab_in;
        cplx* yout = Y.v.data() + o * slab_out;
        for (int i = 0; i < J.rows; ++i) {
            const double* row = J.vals.data() + static_cast<std::size_t>(i) * J.nnz;
            const int c0 = J.offset[i];
            if (s == 1) {
                for (int k = 0; k < J.nnz; ++k)
                    yout[c0 + k] += row[k] * xin[i];
            } else {
                const cplx* xcol = xin + static_cast<std::size_t>(i) * s;
                for (int k = 0; k < J.nnz; ++k)
                    if (row[k] != 0.0)
                        kernels::axpy(row[k], xcol,
                                      yout + static_cast<std::size_t>(c0 + k) * s, s);
            }
        }
    }
    return Y;
}

void KroneckerOperator::add_term(Term t) {
    if (t.factors.size() != dims_.size())
        throw std::invalid_argument("KroneckerOperator: wrong factor count");
    for (std::size_t k = 0; k < t.factors.size(); ++k)
        if (t.factors[k] && (t.factors[k]->rows() != dims_[k]))
            throw std::invalid_argument("KroneckerOperator: factor size mismatch");
    terms_.push_back(std::move(t));
}

void KroneckerOperator::add_term(cplx coeff,
                                 std::vector<std::optional<BandedMatrix<cplx>>> factors) {
    Term t;
    t.coeff = coeff;
    t.factors = std::move(factors);
    add_term(std::move(t));
}

void KroneckerOperator::apply(const cplx* x, cplx* y) const {
    const std::size_t n = vec_size();
    std::fill(y, y + n, cplx(0));
    CoeffTensor work;
    for (const Term& t : terms_) {
        const cplx* src = x;
        for (std::size_t k = 0; k < t.factors.size(); ++k) {
            if (!t.factors[k])
                continue;
            CoeffTensor in;
            in.dims = dims_;
            in.v.assign(src, src + n);
            // factors are square, so dims are unchanged along the chain
            work = mode_product(in, *t.factors[k], static_cast<int>(k));
            src = work.v.data();
        }
        kernels::axpy(t.coeff, src, y, n);
    }
}

std::vector<cplx> KroneckerOperator::apply(const std::vector<cplx>& x) const {
    if (x.size() != vec_size())
        throw std::invalid_argument("KroneckerOperator: vector length mismatch");
    std::vector<cplx> y(x.size());
    apply(x.data(), y.data());
    return y;
}

KroneckerOperator KroneckerOperator::conjugate_transpose() const {
    KroneckerOperator K(dims_);
    for (const Term& t : terms_) {
        Term s;
        s.coeff = std::conj(t.coeff);
        for (const auto& f : t.factors)
            s.factors.push_back(f ? std::optional(f->conjugate_transpose())
                                  : std::nullopt);
        K.add_term(std::move(s));
    }
    return K;
}

Eigen::MatrixXcd KroneckerOperator::to_dense(std::size_t cap) const {
    const std::size_t n = vec_size();
    if (n > cap)
        throw std::length_error("KroneckerOperator::to_dense: size cap exceeded");
    auto dense_factor = [&](const Term& t, std::size_t k) -> Eigen::MatrixXcd {
        if (t.factors[k])
            return t.factors[k]->to_dense();
        return Eigen::MatrixXcd::Identity(dims_[k], dims_[k]);
    };
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(n, n);
    for (const Term& t : terms_) {
        Eigen::MatrixXcd acc = dense_factor(t, 0);
        for (std::size_t k = 1; k < dims_.size(); ++k) {
            const Eigen::MatrixXcd C = dense_factor(t, k);
            Eigen::MatrixXcd kronCD(C.rows() * acc.rows(), C.cols() * acc.cols());
            for (int i = 0; i < C.rows(); ++i)
                for (int j = 0; j < C.cols(); ++j)
                    kronCD.block(i * acc.rows(), j * acc.cols(),
                                 acc.rows(), acc.cols()) = C(i, j) * acc;
            acc = std::move(kronCD);
        }
        A += t.coeff * acc;
    }
    return A;
}

} // namespace kronschro
