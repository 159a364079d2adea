#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "errors.hpp"

namespace viscowave::fem {

/// Symmetric (not Hermitian) band matrix, lower band stored row-wise:
/// entry (i, i - d) for d = 0..half_bandwidth.
template <class T>
class SymBandMatrix {
public:
    SymBandMatrix() = default;
    SymBandMatrix(std::size_t n, std::size_t half_bandwidth)
        : n_(n), b_(half_bandwidth), band_(n * (half_bandwidth + 1), T{}) {}

    std::size_t size() const { return n_; }
    std::size_t half_bandwidth() const { return b_; }

    T operator()(std::size_t i, std::size_t j) const {
        if (i < j) std::swap(i, j);
        if (i - j > b_) return T{};
        return band_[i * (b_ + 1) + (i - j)];
    }

    void add(std::size_t i, std::size_t j, T value) {
        if (i < j) std::swap(i, j);
        if (i >= n_ || i - j > b_) throw std::out_of_range("SymBandMatrix::add outside band");
        band_[i * (b_ + 1) + (i - j)] += value;
    }

    /// this += alpha * other (same shape).
    void axpy(T alpha, const SymBandMatrix& other) {
        if (other.n_ != n_ || other.b_ != b_) throw std::invalid_argument("SymBandMatrix::axpy shape mismatch");
        for (std::size_t k = 0; k < band_.size(); ++k) band_[k] += alpha * other.band_[k];
    }

    template <class U = T>
    SymBandMatrix<U> cast_scaled(U alpha) const {
        SymBandMatrix<U> out(n_, b_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t d = 0; d <= std::min(b_, i); ++d) out.add(i, i - d, alpha * U((*this)(i, i - d)));
        return out;
    }

    /// y = A x
    template <class X, class Y>
    void multiply(std::span<const X> x, std::span<Y> y) const {
        if (x.size() != n_ || y.size() != n_) throw std::invalid_argument("SymBandMatrix::multiply size mismatch");
        std::fill(y.begin(), y.end(), Y{});
        for (std::size_t i = 0; i < n_; ++i) {
            const T* row = &band_[i * (b_ + 1)];
            Y acc = Y(row[0]) * Y(x[i]);
            const std::size_t dmax = std::min(b_, i);
            for (std::size_t d = 1; d <= dmax; ++d) {
                const std::size_t j = i - d;
                acc += Y(row[d]) * Y(x[j]);
                y[j] += Y(row[d]) * Y(x[i]);
            }
            y[i] += acc;
        }
    }

    /// Trailing principal submatrix starting at row/column `first`.
    SymBandMatrix tail(std::size_t first) const {
        SymBandMatrix out(n_ - first, b_);
        for (std::size_t i = first; i < n_; ++i)
            for (std::size_t d = 0; d <= std::min(b_, i - first); ++d)
                out.band_[(i - first) * (b_ + 1) + d] = band_[i * (b_ + 1) + d];
        return out;
    }

    bool is_symmetric() const { return true; }

private:
    template <class>
    friend class BandLDLT;

    std::size_t n_ = 0;
    std::size_t b_ = 0;
    std::vector<T> band_;
};

/// Unpivoted LDL^T of a symmetric band matrix. Stable for the real SPD time
/// stepping matrices and for complex symmetric matrices whose Hermitian part
/// is definite after a unimodular rotation (the Laplace-domain operators).
template <class T>
class BandLDLT {
public:
    BandLDLT() = default;

    explicit BandLDLT(const SymBandMatrix<T>& a, bool require_positive = std::is_floating_point_v<T>)
        : n_(a.n_), b_(a.b_), l_(a.band_) {
        const std::size_t w = b_ + 1;
        for (std::size_t j = 0; j < n_; ++j) {
            const std::size_t k0 = j > b_ ? j - b_ : 0;
            T d = l_[j * w];
            for (std::size_t k = k0; k < j; ++k) {
                const T ljk = l_[j * w + (j - k)];
                d -= ljk * ljk * l_[k * w];
            }
            bool bad = !std::isfinite(std::abs(d)) || std::abs(d) == 0.0;
            if constexpr (std::is_floating_point_v<T>) bad = bad || (require_positive && d <= 0.0);
            if (bad) throw NumericalError("band LDL^T: non-admissible pivot at row " + std::to_string(j));
            l_[j * w] = d;
            const std::size_t imax = std::min(n_ - 1, j + b_);
            for (std::size_t i = j + 1; i <= imax; ++i) {
                T v = l_[i * w + (i - j)];
                const std::size_t kk0 = i > b_ ? i - b_ : 0;
                for (std::size_t k = std::max(kk0, k0); k < j; ++k)
                    v -= l_[i * w + (i - k)] * l_[j * w + (j - k)] * l_[k * w];
                l_[i * w + (i - j)] = v / d;
            }
        }
    }

    std::size_t size() const { return n_; }

    /// Solves A x = rhs in place.
    void solve(std::span<T> x) const {
        if (x.size() != n_) throw std::invalid_argument("BandLDLT::solve size mismatch");
        const std::size_t w = b_ + 1;
        for (std::size_t i = 0; i < n_; ++i) {
            const std::size_t k0 = i > b_ ? i - b_ : 0;
            T v = x[i];
            for (std::size_t k = k0; k < i; ++k) v -= l_[i * w + (i - k)] * x[k];
            x[i] = v;
        }
        for (std::size_t i = 0; i < n_; ++i) x[i] /= l_[i * w];
        for (std::size_t ii = n_; ii-- > 0;) {
            const std::size_t kmax = std::min(n_ - 1, ii + b_);
            T v = x[ii];
            for (std::size_t k = ii + 1; k <= kmax; ++k) v -= l_[k * w + (k - ii)] * x[k];
            x[ii] = v;
        }
    }

private:
    std::size_t n_ = 0;
    std::size_t b_ = 0;
    std::vector<T> l_;
};

}  // namespace viscowave::fem
