#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

namespace kronschro {

/// Square banded matrix, LAPACK-style band storage: entry (i, j) with
/// |i - j| <= bw lives at data[bw + i - j + j*ld], ld = 2*bw + 1.
template <typename T>
class BandedMatrix {
  public:
    BandedMatrix() = default;
    BandedMatrix(int n, int bw)
        : n_(n), bw_(bw), data_(static_cast<std::size_t>(2 * bw + 1) * n, T(0)) {
        if (n < 1 || bw < 0)
            throw std::invalid_argument("BandedMatrix: invalid dimensions");
    }

    int rows() const { return n_; }
    int cols() const { return n_; }
    int bandwidth() const { return bw_; }

    bool in_band(int i, int j) const {
        return i >= 0 && j >= 0 && i < n_ && j < n_ && std::abs(i - j) <= bw_;
    }

    T operator()(int i, int j) const {
        return in_band(i, j) ? data_[idx(i, j)] : T(0);
    }
    T& ref(int i, int j) {
        if (!in_band(i, j))
            throw std::out_of_range("BandedMatrix: entry outside band");
        return data_[idx(i, j)];
    }
    void add(int i, int j, T v) { ref(i, j) += v; }

    /// y = A x over contiguous vectors.
    void matvec(const T* x, T* y) const {
        for (int i = 0; i < n_; ++i) {
            T s(0);
            const int j0 = std::max(0, i - bw_);
            const int j1 = std::min(n_ - 1, i + bw_);
            for (int j = j0; j <= j1; ++j)
                s += data_[idx(i, j)] * x[j];
            y[i] = s;
        }
    }

    BandedMatrix transpose() const {
        BandedMatrix t(n_, bw_);
        for (int i = 0; i < n_; ++i)
            for (int j = std::max(0, i - bw_); j <= std::min(n_ - 1, i + bw_); ++j)
                t.ref(j, i) = (*this)(i, j);
        return t;
    }

    BandedMatrix conjugate_transpose() const {
        BandedMatrix t = transpose();
        if constexpr (std::is_same_v<T, std::complex<double>>) {
            for (auto& v : t.data_)
                v = std::conj(v);
        }
        return t;
    }

    /// Keep rows/cols [r0, r1) only.
    BandedMatrix restricted(int r0, int r1) const {
        if (r0 < 0 || r1 > n_ || r1 <= r0)
            throw std::invalid_argument("BandedMatrix: bad restriction range");
        BandedMatrix r(r1 - r0, bw_);
        for (int i = r0; i < r1; ++i)
            for (int j = std::max(r0, i - bw_); j <= std::min(r1 - 1, i + bw_); ++j)
                r.ref(i - r0, j - r0) = (*this)(i, j);
        return r;
    }

    Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> to_dense() const {
        Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> d =
            Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>::Zero(n_, n_);
        for (int i = 0; i < n_; ++i)
            for (int j = std::max(0, i - bw_); j <= std::min(n_ - 1, i + bw_); ++j)
                d(i, j) = (*this)(i, j);
        return d;
    }

  private:
    std::size_t idx(int i, int j) const {
        return static_cast<std::size_t>(bw_ + i - j) +
               static_cast<std::size_t>(j) * (2 * bw_ + 1);
    }

    int n_ = 0;
    int bw_ = 0;
    std::vector<T> data_;
};

inline BandedMatrix<std::complex<double>> to_complex(const BandedMatrix<double>& a) {
    BandedMatrix<std::complex<double>> c(a.rows(), a.bandwidth());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = std::max(0, i - a.bandwidth());
             j <= std::min(a.cols() - 1, i + a.bandwidth()); ++j)
            c.ref(i, j) = a(i, j);
    return c;
}

} // namespace kronschro
