#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "gkplab/errors.hpp"
#include "gkplab/exact.hpp"

namespace gkp {

template <class T>
using Vec = std::vector<T>;

/// Minimal dense row-major matrix over an arbitrary field scalar.  Everything
/// in the displacement layer is a small (<= ~16x16) symmetric matrix, so a
/// straightforward Gauss-Jordan implementation is entirely adequate and keeps
/// the exact-arithmetic instantiation trivial.
template <class T>
class Mat {
  public:
    Mat() = default;
    Mat(std::size_t r, std::size_t c) : r_(r), c_(c), a_(r * c, ScalarTraits<T>::zero()) {}

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = ScalarTraits<T>::one();
        return m;
    }

    std::size_t rows() const { return r_; }
    std::size_t cols() const { return c_; }

    T& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }

    friend Mat operator*(const Mat& x, const Mat& y) {
        if (x.c_ != y.r_) throw ContractViolation("Mat: product dimension mismatch");
        Mat z(x.r_, y.c_);
        for (std::size_t i = 0; i < x.r_; ++i)
            for (std::size_t k = 0; k < x.c_; ++k) {
                const T& v = x(i, k);
                if (ScalarTraits<T>::is_zero(v)) continue;
                for (std::size_t j = 0; j < y.c_; ++j) z(i, j) += v * y(k, j);
            }
        return z;
    }
    friend Mat operator+(Mat x, const Mat& y) {
        if (x.r_ != y.r_ || x.c_ != y.c_) throw ContractViolation("Mat: sum dimension mismatch");
        for (std::size_t i = 0; i < x.a_.size(); ++i) x.a_[i] += y.a_[i];
        return x;
    }
    friend Mat operator-(Mat x, const Mat& y) {
        if (x.r_ != y.r_ || x.c_ != y.c_) throw ContractViolation("Mat: diff dimension mismatch");
        for (std::size_t i = 0; i < x.a_.size(); ++i) x.a_[i] -= y.a_[i];
        return x;
    }
    friend bool operator==(const Mat& x, const Mat& y) {
        return x.r_ == y.r_ && x.c_ == y.c_ && x.a_ == y.a_;
    }

    Mat transposed() const {
        Mat t(c_, r_);
        for (std::size_t i = 0; i < r_; ++i)
            for (std::size_t j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    Vec<T> apply(const Vec<T>& v) const {
        if (v.size() != c_) throw ContractViolation("Mat: apply dimension mismatch");
        Vec<T> out(r_, ScalarTraits<T>::zero());
        for (std::size_t i = 0; i < r_; ++i)
            for (std::size_t j = 0; j < c_; ++j) out[i] += (*this)(i, j) * v[j];
        return out;
    }

    Mat submatrix(const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) const {
        Mat s(rows.size(), cols.size());
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t j = 0; j < cols.size(); ++j) s(i, j) = (*this)(rows[i], cols[j]);
        return s;
    }

    void symmetrize() {
        if (r_ != c_) throw ContractViolation("Mat: symmetrize requires square");
        const T half = ScalarTraits<T>::from_ratio(1, 2);
        for (std::size_t i = 0; i < r_; ++i)
            for (std::size_t j = i + 1; j < c_; ++j) {
                T m = ((*this)(i, j) + (*this)(j, i)) * half;
                (*this)(i, j) = m;
                (*this)(j, i) = m;
            }
    }

    /// Gauss-Jordan inverse with partial pivoting (pivot chosen by largest
    /// double magnitude; with exact scalars any nonzero pivot is exact).
    Mat inverse() const {
        if (r_ != c_) throw ContractViolation("Mat: inverse requires square");
        std::size_t n = r_;
        Mat a(*this);
        Mat inv = identity(n);
        for (std::size_t col = 0; col < n; ++col) {
            std::size_t piv = col;
            double best = std::fabs(ScalarTraits<T>::to_d(a(col, col)));
            for (std::size_t i = col + 1; i < n; ++i) {
                double m = std::fabs(ScalarTraits<T>::to_d(a(i, col)));
                if (m > best) { best = m; piv = i; }
            }
            if (ScalarTraits<T>::is_zero(a(piv, col))) {
                // the double estimate can underflow for exact scalars; rescan exactly
                piv = n;
                for (std::size_t i = col; i < n; ++i)
                    if (!ScalarTraits<T>::is_zero(a(i, col))) { piv = i; break; }
                if (piv == n) throw DegenerateConditioning("Mat: singular matrix in inverse");
            }
            if (piv != col) {
                for (std::size_t j = 0; j < n; ++j) {
                    std::swap(a(piv, j), a(col, j));
                    std::swap(inv(piv, j), inv(col, j));
                }
            }
            T d = a(col, col);
            for (std::size_t j = 0; j < n; ++j) {
                a(col, j) = a(col, j) / d;
                inv(col, j) = inv(col, j) / d;
            }
            for (std::size_t i = 0; i < n; ++i) {
                if (i == col) continue;
                T f = a(i, col);
                if (ScalarTraits<T>::is_zero(f)) continue;
                for (std::size_t j = 0; j < n; ++j) {
                    a(i, j) -= f * a(col, j);
                    inv(i, j) -= f * inv(col, j);
                }
            }
        }
        return inv;
    }

    /// Solve A x = b for a single right-hand side.
    Vec<T> solve(const Vec<T>& b) const {
        Mat binv = inverse();
        return binv.apply(b);
    }

  private:
    std::size_t r_ = 0, c_ = 0;
    std::vector<T> a_;
};

template <class T>
T dot(const Vec<T>& x, const Vec<T>& y) {
    if (x.size() != y.size()) throw ContractViolation("dot: dimension mismatch");
    T s = ScalarTraits<T>::zero();
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

template <class T>
Mat<double> to_double_mat(const Mat<T>& m) {
    Mat<double> d(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) d(i, j) = ScalarTraits<T>::to_d(m(i, j));
    return d;
}

inline double max_abs_diff(const Mat<double>& x, const Mat<double>& y) {
    double m = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j)
            m = std::max(m, std::fabs(x(i, j) - y(i, j)));
    return m;
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations (double only);
/// used for positive-semidefiniteness checks in invariant tests.
std::vector<double> symmetric_eigenvalues(Mat<double> a);

}  // namespace gkp
