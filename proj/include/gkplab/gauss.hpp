#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "gkplab/errors.hpp"
#include "gkplab/la.hpp"

namespace gkp::gauss {

/// Fixed variable ordering for n modes: (s_1..s_n, t_1..t_n) — all
/// q-displacement variables first, then all p-displacement variables.
/// Matrices are 2n x 2n in this ordering for the lifetime of a state.
struct QuadratureOrder {
    std::size_t n_modes = 0;
    std::size_t dim() const { return 2 * n_modes; }
    std::size_t q_index(std::size_t mode) const { return mode; }
    std::size_t p_index(std::size_t mode) const { return n_modes + mode; }
};

/// Mean vector and symmetric covariance of the displacement variables.
/// Covariance entries are dimensionless multiples of a reference variance
/// (sigma^2); callers supply the physical scale where densities are needed.
template <class T>
struct Moments {
    Vec<T> mean;
    Mat<T> cov;

    std::size_t dim() const { return mean.size(); }
};

/// Affine map x -> S x + d on the displacement variables.
template <class T>
struct AffineMap {
    Mat<T> linear;
    Vec<T> shift;
};

/// Standard symplectic form Omega in the (s.., t..) ordering:
/// Omega = [[0, I], [-I, 0]].
template <class T>
Mat<T> symplectic_form(std::size_t n_modes) {
    Mat<T> w(2 * n_modes, 2 * n_modes);
    for (std::size_t i = 0; i < n_modes; ++i) {
        w(i, n_modes + i) = ScalarTraits<T>::one();
        w(n_modes + i, i) = -ScalarTraits<T>::one();
    }
    return w;
}

/// Max-norm deviation of S Omega S^T from Omega (doubles; exact path converts).
template <class T>
double symplectic_defect(const Mat<T>& s) {
    std::size_t n = s.rows() / 2;
    Mat<T> w = symplectic_form<T>(n);
    Mat<T> lhs = s * w * s.transposed();
    return max_abs_diff(to_double_mat(lhs), to_double_mat(w));
}

template <class T>
Moments<T> apply_affine(const Moments<T>& m, const AffineMap<T>& f) {
    if (f.linear.cols() != m.dim() || f.shift.size() != f.linear.rows())
        throw ContractViolation("apply_affine: dimension mismatch");
    Moments<T> out;
    out.mean = f.linear.apply(m.mean);
    for (std::size_t i = 0; i < out.mean.size(); ++i) out.mean[i] += f.shift[i];
    out.cov = f.linear * m.cov * f.linear.transposed();
    out.cov.symmetrize();
    return out;
}

template <class T>
Moments<T> marginalize(const Moments<T>& m, const std::vector<std::size_t>& keep) {
    if (keep.empty()) throw ContractViolation("marginalize: empty keep set");
    for (auto k : keep)
        if (k >= m.dim()) throw ContractViolation("marginalize: index out of range");
    Moments<T> out;
    out.mean.reserve(keep.size());
    for (auto k : keep) out.mean.push_back(m.mean[k]);
    out.cov = m.cov.submatrix(keep, keep);
    return out;
}

inline double normal_density(double x, double mean, double variance) {
    if (variance <= 0) throw DegenerateConditioning("normal_density: nonpositive variance");
    double z = x - mean;
    return std::exp(-0.5 * z * z / variance) / std::sqrt(2.0 * 3.14159265358979323846 * variance);
}

/// Result of conditioning on one displacement variable: the Schur-complement
/// moments on the remaining variables plus the Gaussian density ("weight") of
/// the observed value under the variable's marginal.
template <class T>
struct Conditioned {
    Moments<T> moments;   // remaining variables, original order minus `index`
    double weight = 0.0;  // density of `value` under N(mean_a, V_aa)
    Vec<T> regression;    // K = V_{rest,a} / V_aa (gain of the mean update)
};

template <class T>
Conditioned<T> condition_on_linear(const Moments<T>& m, std::size_t index, const T& value) {
    if (index >= m.dim()) throw ContractViolation("condition_on_linear: index out of range");
    const T vaa = m.cov(index, index);
    if (ScalarTraits<T>::to_d(vaa) <= 0.0 || ScalarTraits<T>::is_zero(vaa))
        throw DegenerateConditioning("condition_on_linear: zero-variance variable");

    Conditioned<T> out;
    std::vector<std::size_t> rest;
    rest.reserve(m.dim() - 1);
    for (std::size_t i = 0; i < m.dim(); ++i)
        if (i != index) rest.push_back(i);

    out.regression.reserve(rest.size());
    for (auto r : rest) out.regression.push_back(m.cov(r, index) / vaa);

    const T innovation = value - m.mean[index];
    out.moments.mean.reserve(rest.size());
    for (std::size_t i = 0; i < rest.size(); ++i)
        out.moments.mean.push_back(m.mean[rest[i]] + out.regression[i] * innovation);

    out.moments.cov = Mat<T>(rest.size(), rest.size());
    for (std::size_t i = 0; i < rest.size(); ++i)
        for (std::size_t j = 0; j < rest.size(); ++j)
            out.moments.cov(i, j) =
                m.cov(rest[i], rest[j]) - out.regression[i] * m.cov(index, rest[j]);
    out.moments.cov.symmetrize();

    out.weight = normal_density(ScalarTraits<T>::to_d(value), ScalarTraits<T>::to_d(m.mean[index]),
                                ScalarTraits<T>::to_d(vaa));
    return out;
}

/// Conditional variance of variable `index` given all other variables:
/// 1 / (V^{-1})_{index,index}.  This is the width parameter controlling the
/// comb-weight suppression of the variable conjugate to a measured one.
template <class T>
T conditional_variance_given_rest(const Mat<T>& cov, std::size_t index) {
    Mat<T> prec = cov.inverse();
    return ScalarTraits<T>::one() / prec(index, index);
}

/// Minimum eigenvalue of a covariance (double view), for PSD checks.
template <class T>
double min_eigenvalue(const Mat<T>& cov) {
    auto ev = symmetric_eigenvalues(to_double_mat(cov));
    return ev.empty() ? 0.0 : ev.front();
}

}  // namespace gkp::gauss
