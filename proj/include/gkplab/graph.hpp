#pragma once
// Graph engine: the central state container.  A state is a coherent
// superposition of Gaussian-displaced copies of one ideal comb/graph layer:
//   - a shared 2n x 2n displacement covariance (in units of sigma^2),
//   - per-branch mean displacement vectors (in units of sqrt(pi)),
//   - per-branch phase gradients g (phase contribution pi * g . x, with x in
//     sqrt(pi) units) and complex amplitudes,
//   - an ideal-layer graph (adjacency + per-vertex labels + correction flags).
// Variable ordering is (s_0..s_{n-1}, t_0..t_{n-1}): s = q-type displacement,
// t = p-type displacement of each mode.

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gkplab/constants.hpp"
#include "gkplab/errors.hpp"
#include "gkplab/exact.hpp"
#include "gkplab/la.hpp"
#include "gkplab/rng.hpp"
#include "gkplab/states.hpp"

namespace gkp::graph {

using states::IdealLogical;
using states::Quadrature;

using Adjacency = std::vector<std::vector<std::uint8_t>>;

template <class T>
struct Branch {
    std::complex<double> amp{1.0, 0.0};
    Vec<T> mean;            // length 2n, sqrt(pi) units
    Vec<T> grad;            // length 2n, phase = pi * grad . x
    std::vector<int> tags;  // comb-parity record, one entry per measurement
};

template <class T>
struct VertexEnv {
    IdealLogical label = IdealLogical::XPlus;
    T l;     // q-displacement variance weight (times sigma^2)
    T m;     // p-displacement variance weight (times sigma^2)
    T mu_q;  // mean q displacement, sqrt(pi) units
    T mu_p;  // mean p displacement, sqrt(pi) units
};

template <class T>
VertexEnv<T> plus_env(T l, T m) {
    return VertexEnv<T>{IdealLogical::XPlus, std::move(l), std::move(m), ScalarTraits<T>::zero(),
                        ScalarTraits<T>::zero()};
}

template <class T>
VertexEnv<T> zero_env(T l, T m) {
    return VertexEnv<T>{IdealLogical::Z0, std::move(l), std::move(m), ScalarTraits<T>::zero(),
                        ScalarTraits<T>::zero()};
}

template <class T>
class GkpGraphState {
  public:
    double sigma2 = 0.1;
    std::vector<int> ids;              // stable external vertex ids
    std::vector<IdealLogical> labels;  // per-vertex ideal label
    Adjacency adjacency;               // 0/1 symmetric, zero diagonal
    std::vector<std::uint8_t> z_flag, x_flag;  // ideal-layer local corrections
    Mat<T> cov;                        // 2n x 2n, sigma^2 units
    std::vector<Branch<T>> branches;
    double dropped_weight = 0.0;
    // True when `adjacency` describes the ideal layer exactly.  Non-C_Z gates
    // leave the ideal layer to the protocol step that completes them (those
    // intermediate states are consumed immediately by a homodyne), so they
    // clear this flag; protocol operations restore it.
    bool graph_form = true;

    std::size_t n() const { return ids.size(); }
    std::size_t s_index(std::size_t mode) const { return mode; }
    std::size_t t_index(std::size_t mode) const { return n() + mode; }

    std::size_t index_of(int id) const {
        for (std::size_t k = 0; k < ids.size(); ++k)
            if (ids[k] == id) return k;
        throw ContractViolation("unknown vertex id " + std::to_string(id));
    }

    double total_weight() const {
        double s = 0.0;
        for (const auto& b : branches) s += std::norm(b.amp);
        return s;
    }
};

// ---------------------------------------------------------------------------
// Construction

template <class T>
GkpGraphState<T> build_graph_state(const std::vector<VertexEnv<T>>& envs,
                                   const Adjacency& adjacency, double sigma2) {
    using S = ScalarTraits<T>;
    const std::size_t n = envs.size();
    if (adjacency.size() != n)
        throw ContractViolation("adjacency size does not match vertex count");
    for (std::size_t i = 0; i < n; ++i) {
        if (adjacency[i].size() != n) throw ContractViolation("adjacency matrix is not square");
        if (adjacency[i][i] != 0) throw ContractViolation("adjacency diagonal must be zero");
        for (std::size_t j = 0; j < n; ++j) {
            if (adjacency[i][j] != adjacency[j][i])
                throw ContractViolation("adjacency must be symmetric");
            if (adjacency[i][j] > 1) throw ContractViolation("adjacency entries must be 0/1");
        }
    }
    for (const auto& e : envs)
        if (!(S::to_d(e.l) > 0.0) || !(S::to_d(e.m) > 0.0))
            throw ContractViolation("vertex envelope variances must be positive");

    GkpGraphState<T> st;
    st.sigma2 = sigma2;
    st.adjacency = adjacency;
    st.cov = Mat<T>(2 * n, 2 * n);
    Branch<T> b;
    b.mean.assign(2 * n, S::zero());
    b.grad.assign(2 * n, S::zero());
    for (std::size_t i = 0; i < n; ++i) {
        st.ids.push_back(static_cast<int>(i));
        st.labels.push_back(envs[i].label);
        st.cov(i, i) = envs[i].l;
        // covariance of the entangled envelope: blocks L, R = -L A, P = M + A L A^T
        T p = envs[i].m;
        for (std::size_t j = 0; j < n; ++j) {
            if (!adjacency[i][j]) continue;
            p += envs[j].l;
            st.cov(n + i, j) -= envs[j].l;
            st.cov(j, n + i) = st.cov(n + i, j);
        }
        st.cov(n + i, n + i) = p;
        for (std::size_t j = 0; j < i; ++j) {
            T c = S::zero();
            for (std::size_t k = 0; k < n; ++k)
                if (adjacency[i][k] && adjacency[j][k]) c += envs[k].l;
            st.cov(n + i, n + j) = c;
            st.cov(n + j, n + i) = c;
        }
        b.mean[i] = envs[i].mu_q;
        T mp = envs[i].mu_p;
        for (std::size_t j = 0; j < n; ++j)
            if (adjacency[i][j]) mp -= envs[j].mu_q;
        b.mean[n + i] = mp;
    }
    st.z_flag.assign(n, 0);
    st.x_flag.assign(n, 0);
    st.branches.push_back(std::move(b));
    return st;
}

/// Appends a fresh unentangled vertex (isolated in the ideal layer).
template <class T>
void add_vertex(GkpGraphState<T>& st, const VertexEnv<T>& env, int id) {
    using S = ScalarTraits<T>;
    if (!(S::to_d(env.l) > 0.0) || !(S::to_d(env.m) > 0.0))
        throw ContractViolation("vertex envelope variances must be positive");
    for (int existing : st.ids)
        if (existing == id) throw ContractViolation("duplicate vertex id");
    const std::size_t n = st.n();
    // old index a -> (a < n ? a : a + 1); new s at n, new t at 2n+1
    auto remap = [n](std::size_t a) { return a < n ? a : a + 1; };
    Mat<T> cov(2 * n + 2, 2 * n + 2);
    for (std::size_t a = 0; a < 2 * n; ++a)
        for (std::size_t b = 0; b < 2 * n; ++b) cov(remap(a), remap(b)) = st.cov(a, b);
    cov(n, n) = env.l;
    cov(2 * n + 1, 2 * n + 1) = env.m;
    st.cov = std::move(cov);
    for (auto& br : st.branches) {
        Vec<T> mean(2 * n + 2, S::zero()), grad(2 * n + 2, S::zero());
        for (std::size_t a = 0; a < 2 * n; ++a) {
            mean[remap(a)] = br.mean[a];
            grad[remap(a)] = br.grad[a];
        }
        mean[n] = env.mu_q;
        mean[2 * n + 1] = env.mu_p;
        br.mean = std::move(mean);
        br.grad = std::move(grad);
    }
    st.ids.push_back(id);
    st.labels.push_back(env.label);
    for (auto& row : st.adjacency) row.push_back(0);
    st.adjacency.emplace_back(n + 1, 0);
    st.z_flag.push_back(0);
    st.x_flag.push_back(0);
}

// ---------------------------------------------------------------------------
// Symplectic gates.  Every gate supplies its map together with the exact
// inverse so branch phase gradients transform by S^{-T} without a numeric
// inversion.

template <class T>
void apply_symplectic(GkpGraphState<T>& st, const Mat<T>& s, const Mat<T>& s_inv) {
    st.cov = s * st.cov * s.transposed();
    st.cov.symmetrize();
    const Mat<T> s_inv_t = s_inv.transposed();
    for (auto& b : st.branches) {
        b.mean = s.apply(b.mean);
        b.grad = s_inv_t.apply(b.grad);
    }
}

template <class T>
void apply_cz(GkpGraphState<T>& st, std::size_t i, std::size_t j) {
    if (i == j) throw ContractViolation("apply_cz requires two distinct modes");
    if (i >= st.n() || j >= st.n()) throw ContractViolation("apply_cz: mode out of range");
    const std::size_t n = st.n();
    using S = ScalarTraits<T>;
    Mat<T> s = Mat<T>::identity(2 * n), si = Mat<T>::identity(2 * n);
    // t_i -> t_i - s_j, t_j -> t_j - s_i
    s(n + i, j) -= S::one();
    s(n + j, i) -= S::one();
    si(n + i, j) += S::one();
    si(n + j, i) += S::one();
    apply_symplectic(st, s, si);
    if (st.graph_form) {
        st.adjacency[i][j] ^= 1;
        st.adjacency[j][i] ^= 1;
    }
}

template <class T>
void apply_cx(GkpGraphState<T>& st, std::size_t control, std::size_t target, int sign = 1) {
    if (control == target) throw ContractViolation("apply_cx requires distinct modes");
    if (control >= st.n() || target >= st.n())
        throw ContractViolation("apply_cx: mode out of range");
    if (sign != 1 && sign != -1) throw ContractViolation("apply_cx: sign must be +-1");
    const std::size_t n = st.n();
    using S = ScalarTraits<T>;
    const T g = sign == 1 ? S::one() : -S::one();
    Mat<T> s = Mat<T>::identity(2 * n), si = Mat<T>::identity(2 * n);
    // s_T -> s_T + g s_C, t_C -> t_C - g t_T
    s(target, control) = g;
    s(n + control, n + target) = -g;
    si(target, control) = -g;
    si(n + control, n + target) = g;
    apply_symplectic(st, s, si);
    st.graph_form = false;
}

template <class T>
void apply_fourier(GkpGraphState<T>& st, std::size_t i, int sign = 1) {
    if (i >= st.n()) throw ContractViolation("apply_fourier: mode out of range");
    if (sign != 1 && sign != -1) throw ContractViolation("apply_fourier: sign must be +-1");
    const std::size_t n = st.n();
    using S = ScalarTraits<T>;
    const T g = sign == 1 ? S::one() : -S::one();
    Mat<T> s = Mat<T>::identity(2 * n), si = Mat<T>::identity(2 * n);
    // sign=+1: q -> p, p -> -q on the displacement variables
    s(i, i) = S::zero();
    s(i, n + i) = g;
    s(n + i, n + i) = S::zero();
    s(n + i, i) = -g;
    si(i, i) = S::zero();
    si(i, n + i) = -g;
    si(n + i, n + i) = S::zero();
    si(n + i, i) = g;
    apply_symplectic(st, s, si);
    st.graph_form = false;
}

/// Balanced beamsplitter: out_i = (x_i + x_j)/sqrt2, out_j = (-x_i + x_j)/sqrt2
/// for both quadratures.  Exact in the sqrt2-rational scalar type.
template <class T>
void apply_beamsplitter(GkpGraphState<T>& st, std::size_t i, std::size_t j) {
    if (i == j) throw ContractViolation("apply_beamsplitter requires distinct modes");
    if (i >= st.n() || j >= st.n())
        throw ContractViolation("apply_beamsplitter: mode out of range");
    const std::size_t n = st.n();
    using S = ScalarTraits<T>;
    const T h = S::inv_sqrt2();
    Mat<T> s = Mat<T>::identity(2 * n);
    for (std::size_t block : {std::size_t{0}, n}) {
        s(block + i, block + i) = h;
        s(block + i, block + j) = h;
        s(block + j, block + i) = -h;
        s(block + j, block + j) = h;
    }
    // rotation: the inverse is the transpose
    apply_symplectic(st, s, s.transposed());
    st.graph_form = false;
}

/// General-transmissivity beamsplitter (floating-point scalar only):
/// out_i = sqrt(T) x_i + sqrt(1-T) x_j, out_j = -sqrt(1-T) x_i + sqrt(T) x_j.
inline void apply_beamsplitter_t(GkpGraphState<double>& st, std::size_t i, std::size_t j,
                                 double transmissivity) {
    if (!(transmissivity > 0.0 && transmissivity < 1.0))
        throw ContractViolation("beamsplitter transmissivity must lie in (0,1)");
    if (i == j) throw ContractViolation("apply_beamsplitter requires distinct modes");
    if (i >= st.n() || j >= st.n())
        throw ContractViolation("apply_beamsplitter: mode out of range");
    const std::size_t n = st.n();
    const double c = std::sqrt(transmissivity), r = std::sqrt(1.0 - transmissivity);
    Mat<double> s = Mat<double>::identity(2 * n);
    for (std::size_t block : {std::size_t{0}, n}) {
        s(block + i, block + i) = c;
        s(block + i, block + j) = r;
        s(block + j, block + i) = -r;
        s(block + j, block + j) = c;
    }
    apply_symplectic(st, s, s.transposed());
    st.graph_form = false;
}

/// Single-mode squeezer: q_i *= scale, p_i /= scale.
template <class T>
void apply_squeezer(GkpGraphState<T>& st, std::size_t i, const T& scale) {
    if (i >= st.n()) throw ContractViolation("apply_squeezer: mode out of range");
    using S = ScalarTraits<T>;
    if (S::is_zero(scale)) throw ContractViolation("apply_squeezer: zero scale");
    const std::size_t n = st.n();
    Mat<T> s = Mat<T>::identity(2 * n), si = Mat<T>::identity(2 * n);
    s(i, i) = scale;
    s(n + i, n + i) = S::one() / scale;
    si(i, i) = S::one() / scale;
    si(n + i, n + i) = scale;
    apply_symplectic(st, s, si);
    st.graph_form = false;
}

// ---------------------------------------------------------------------------
// Displacements.  D(u,v) = e^{i u v / 2} X(u) Z(v) acting on the displacement
// layer: means shift, gradients gain (v/2, -u/2), and each branch picks up the
// scalar phase -pi * (grad_old . d) from re-anchoring its stored gradient.

template <class T>
void apply_displacement(GkpGraphState<T>& st, std::size_t mode, const T& du, const T& dv,
                        std::optional<std::size_t> only_branch = std::nullopt) {
    if (mode >= st.n()) throw ContractViolation("apply_displacement: mode out of range");
    if (only_branch && *only_branch >= st.branches.size())
        throw ContractViolation("apply_displacement: branch out of range");
    using S = ScalarTraits<T>;
    const std::size_t a = st.s_index(mode), c = st.t_index(mode);
    const T half = S::from_ratio(1, 2);
    for (std::size_t bi = 0; bi < st.branches.size(); ++bi) {
        if (only_branch && *only_branch != bi) continue;
        auto& b = st.branches[bi];
        const double phase =
            -kPi * (S::to_d(b.grad[a]) * S::to_d(du) + S::to_d(b.grad[c]) * S::to_d(dv));
        b.amp *= std::polar(1.0, phase);
        b.mean[a] += du;
        b.mean[c] += dv;
        b.grad[a] += half * dv;
        b.grad[c] -= half * du;
    }
}

// ---------------------------------------------------------------------------
// Normalization and pruning

template <class T>
void normalize_branches(GkpGraphState<T>& st) {
    double s = st.total_weight();
    if (!(s > 0.0)) throw InternalConsistencyError("branch weights sum to zero");
    const double inv = 1.0 / std::sqrt(s);
    for (auto& b : st.branches) b.amp *= inv;
}

template <class T>
void prune_branches(GkpGraphState<T>& st, double eps = kBranchPruneEpsilon) {
    normalize_branches(st);
    if (eps <= 0.0) return;
    std::vector<Branch<T>> kept;
    kept.reserve(st.branches.size());
    double dropped = 0.0;
    for (auto& b : st.branches) {
        if (std::norm(b.amp) < eps)
            dropped += std::norm(b.amp);
        else
            kept.push_back(std::move(b));
    }
    if (kept.empty()) throw InternalConsistencyError("pruning removed every branch");
    st.branches = std::move(kept);
    st.dropped_weight += dropped;
    normalize_branches(st);
}

// ---------------------------------------------------------------------------
// Homodyne measurement

template <class T>
struct HomodyneRecord {
    int mode_id = -1;  // external id of the measured vertex
    Quadrature quad = Quadrature::Q;
    T y{};             // outcome, sqrt(pi) units
    T spacing{};       // comb cell size, sqrt(pi) units
    long long cell = 0;     // z with y = z*spacing + residue
    T residue{};            // centered residue in [-spacing/2, spacing/2)
    double v_mm = 0.0;      // marginal variance of the measured var (sigma^2 units)
    double cond_conj = 0.0; // conditional variance of its conjugate given the
                            // rest (sigma^2 units); controls comb tooth weights
    Vec<T> feedback_gain;   // regression column on the kept variables
    std::vector<int> kept_ids;  // external ids of surviving vertices
    bool postselect_rejected = false;
};

namespace detail {

/// Centered reduction y = z*spacing + r with r in [-spacing/2, spacing/2);
/// boundary ties bin upward (r = -spacing/2 belongs to the upper cell).
template <class T>
std::pair<long long, T> centered_cell(const T& y, const T& spacing) {
    using S = ScalarTraits<T>;
    const long long z = S::floor_ll(y / spacing + S::from_ratio(1, 2));
    return {z, y - S::from_int(z) * spacing};
}

}  // namespace detail

/// Homodyne of one mode at a forced outcome.  Splits every branch over the two
/// comb teeth bracketing the outcome, conditions the shared covariance on the
/// measured displacement variable, integrates out its conjugate (updating the
/// surviving phase gradients by the conjugate's regression row), and removes
/// the mode.  Branch magnitudes follow the factorized comb-weight model
/// c_k = P_N[k] * P_Q(y - k*spacing - mean); phases follow the exact algebra.
template <class T>
HomodyneRecord<T> measure_homodyne(GkpGraphState<T>& st, std::size_t mode, Quadrature quad,
                                   const T& y, const T& spacing,
                                   double prune_eps = kBranchPruneEpsilon) {
    using S = ScalarTraits<T>;
    const std::size_t n = st.n();
    if (mode >= n) throw ContractViolation("measure_homodyne: mode out of range");
    if (n < 2) throw ContractViolation("measure_homodyne: cannot remove the last mode");
    if (!(S::to_d(spacing) > 0.0))
        throw ContractViolation("measure_homodyne: spacing must be positive");

    const std::size_t a = quad == Quadrature::Q ? st.s_index(mode) : st.t_index(mode);
    const std::size_t c = quad == Quadrature::Q ? st.t_index(mode) : st.s_index(mode);

    const T v_mm = st.cov(a, a);
    if (!(S::to_d(v_mm) > 0.0))
        throw DegenerateConditioning("measured variable has nonpositive variance");

    // conditional variance of the conjugate displacement given everything else
    const Mat<T> v_inv = st.cov.inverse();
    const T cond_conj = S::one() / v_inv(c, c);

    // regression of every variable on the measured one
    Vec<T> k_full(2 * n, S::zero());
    for (std::size_t r = 0; r < 2 * n; ++r) k_full[r] = st.cov(r, a) / v_mm;

    // covariance conditioned on the measured variable
    Mat<T> v_cond(2 * n, 2 * n);
    for (std::size_t r = 0; r < 2 * n; ++r)
        for (std::size_t s2 = 0; s2 < 2 * n; ++s2)
            v_cond(r, s2) = st.cov(r, s2) - st.cov(r, a) * st.cov(s2, a) / v_mm;
    v_cond.symmetrize();

    // kept variable indices (drop both variables of the measured mode)
    std::vector<std::size_t> keep;
    keep.reserve(2 * n - 2);
    for (std::size_t r = 0; r < 2 * n; ++r)
        if (r != st.s_index(mode) && r != st.t_index(mode)) keep.push_back(r);

    // regression row of the conjugate variable on the kept ones (within v_cond)
    Vec<T> b_row(keep.size(), S::zero());
    {
        const Mat<T> v_kk = v_cond.submatrix(keep, keep);
        Vec<T> rhs(keep.size(), S::zero());
        for (std::size_t r = 0; r < keep.size(); ++r) rhs[r] = v_cond(keep[r], c);
        b_row = v_kk.solve(rhs);
    }

    const double sig2 = st.sigma2;
    const double v_mm_d = S::to_d(v_mm);
    const double cond_d = S::to_d(cond_conj);
    const double sp_d = S::to_d(spacing);
    const double y_d = S::to_d(y);

    std::vector<Branch<T>> out;
    out.reserve(2 * st.branches.size());
    for (const auto& br : st.branches) {
        const T mu_m = br.mean[a];
        const long long k0 = S::floor_ll((y - mu_m) / spacing);
        for (long long k : {k0, k0 + 1}) {
            Branch<T> nb;
            nb.tags = br.tags;
            nb.tags.push_back(static_cast<int>(((k % 2) + 2) % 2));
            const T tooth = S::from_int(k) * spacing;
            // magnitude: sqrt(c_k), c_k = P_N[k] * P_Q(y - tooth - mean)
            const double res = y_d - static_cast<double>(k) * sp_d - S::to_d(mu_m);
            const double log_ck = -kPi * sig2 * cond_d * static_cast<double>(k * k) * sp_d * sp_d -
                                  kPi * res * res / (v_mm_d * sig2);
            // phases: slice of the measured variable at u* = y - tooth, then
            // the conjugate integrated against e^{i pi phi x} with
            // phi = grad_conj + (y + tooth)/2 for q, minus for p.
            const T u_star = y - tooth;
            const T half_sum = S::from_ratio(1, 2) * (y + tooth);
            const T phi = quad == Quadrature::Q ? br.grad[c] + half_sum : br.grad[c] - half_sum;
            // conditional means after the slice
            Vec<T> mean_c(2 * n, S::zero());
            const T shift = u_star - mu_m;
            for (std::size_t r = 0; r < 2 * n; ++r) mean_c[r] = br.mean[r] + k_full[r] * shift;
            // scalar phase: pi*(grad_a u* + phi*(mean_c[conj] - b_row . mean_c[kept]))
            double lin = S::to_d(mean_c[c]);
            for (std::size_t r = 0; r < keep.size(); ++r)
                lin -= S::to_d(b_row[r]) * S::to_d(mean_c[keep[r]]);
            const double phase =
                kPi * (S::to_d(br.grad[a]) * S::to_d(u_star) + S::to_d(phi) * lin);
            nb.amp = br.amp * std::exp(0.5 * log_ck) * std::polar(1.0, phase);
            nb.mean.resize(keep.size());
            nb.grad.resize(keep.size());
            for (std::size_t r = 0; r < keep.size(); ++r) {
                nb.mean[r] = mean_c[keep[r]];
                nb.grad[r] = br.grad[keep[r]] + phi * b_row[r];
            }
            out.push_back(std::move(nb));
        }
    }

    HomodyneRecord<T> rec;
    rec.mode_id = st.ids[mode];
    rec.quad = quad;
    rec.y = y;
    rec.spacing = spacing;
    auto [cell, residue] = detail::centered_cell(y, spacing);
    rec.cell = cell;
    rec.residue = residue;
    rec.v_mm = v_mm_d;
    rec.cond_conj = cond_d;
    rec.feedback_gain.assign(keep.size(), S::zero());
    for (std::size_t r = 0; r < keep.size(); ++r) rec.feedback_gain[r] = k_full[keep[r]];

    // shrink the state
    st.cov = v_cond.submatrix(keep, keep);
    st.branches = std::move(out);
    st.ids.erase(st.ids.begin() + static_cast<std::ptrdiff_t>(mode));
    st.labels.erase(st.labels.begin() + static_cast<std::ptrdiff_t>(mode));
    st.z_flag.erase(st.z_flag.begin() + static_cast<std::ptrdiff_t>(mode));
    st.x_flag.erase(st.x_flag.begin() + static_cast<std::ptrdiff_t>(mode));
    st.adjacency.erase(st.adjacency.begin() + static_cast<std::ptrdiff_t>(mode));
    for (auto& row : st.adjacency) row.erase(row.begin() + static_cast<std::ptrdiff_t>(mode));
    rec.kept_ids = st.ids;
    prune_branches(st, prune_eps);
    return rec;
}

/// Mixture pdf of a homodyne outcome (sqrt(pi) units):
/// sum_b |amp_b|^2 sum_k P_N[k] N(y; k*spacing + mu_b, v_mm sigma^2 / (2 pi)).
template <class T>
double homodyne_outcome_density(const GkpGraphState<T>& st, std::size_t mode, Quadrature quad,
                                double y, const T& spacing) {
    using S = ScalarTraits<T>;
    const std::size_t n = st.n();
    if (mode >= n) throw ContractViolation("homodyne_outcome_density: mode out of range");
    const std::size_t a = quad == Quadrature::Q ? mode : n + mode;
    const std::size_t c = quad == Quadrature::Q ? n + mode : mode;
    const double v_mm = S::to_d(st.cov(a, a));
    if (!(v_mm > 0.0)) throw DegenerateConditioning("measured variable has nonpositive variance");
    const Mat<T> v_inv = st.cov.inverse();
    const double cond = S::to_d(S::one() / v_inv(c, c));
    const double sp = S::to_d(spacing);
    const double sig2 = st.sigma2;
    // tooth weights P_N[k] = exp(-alpha k^2)/Z; residue variance in sqrt(pi)
    // units is v_mm sigma^2 / (2 pi)
    const double alpha = kPi * sig2 * cond * sp * sp;
    const double res_var = v_mm * sig2 / (2.0 * kPi);
    const long long kmax = static_cast<long long>(std::ceil(std::sqrt(34.6 / alpha))) + 1;
    double z_n = 0.0;
    for (long long k = -kmax; k <= kmax; ++k) z_n += std::exp(-alpha * static_cast<double>(k * k));
    double pdf = 0.0;
    for (const auto& br : st.branches) {
        const double mu = S::to_d(br.mean[a]);
        double p = 0.0;
        for (long long k = -kmax; k <= kmax; ++k) {
            const double d = y - (static_cast<double>(k) * sp + mu);
            p += std::exp(-alpha * static_cast<double>(k * k)) / z_n *
                 std::exp(-d * d / (2.0 * res_var)) / std::sqrt(2.0 * kPi * res_var);
        }
        pdf += std::norm(br.amp) * p;
    }
    return pdf;
}

/// Draws an outcome (sqrt(pi) units) from the homodyne mixture distribution.
template <class T>
double sample_homodyne_outcome(const GkpGraphState<T>& st, std::size_t mode, Quadrature quad,
                               const T& spacing, Rng& gen) {
    using S = ScalarTraits<T>;
    const std::size_t n = st.n();
    if (mode >= n) throw ContractViolation("sample_homodyne_outcome: mode out of range");
    const std::size_t a = quad == Quadrature::Q ? mode : n + mode;
    const std::size_t c = quad == Quadrature::Q ? n + mode : mode;
    const double v_mm = S::to_d(st.cov(a, a));
    if (!(v_mm > 0.0)) throw DegenerateConditioning("measured variable has nonpositive variance");
    const Mat<T> v_inv = st.cov.inverse();
    const double cond = S::to_d(S::one() / v_inv(c, c));
    const double sp = S::to_d(spacing);
    const double sig2 = st.sigma2;
    // branch ~ |amp|^2
    std::vector<double> w;
    w.reserve(st.branches.size());
    for (const auto& br : st.branches) w.push_back(std::norm(br.amp));
    const std::size_t bi = gen.categorical(w);
    const double mu = S::to_d(st.branches[bi].mean[a]);
    // tooth ~ discrete Gaussian with P_N[k] = exp(-pi sig2 cond (k sp)^2)/Z
    const double s2 = 1.0 / (2.0 * kPi * sig2 * cond * sp * sp);
    const long long k = gen.discrete_gaussian(s2);
    // residue ~ N(0, v_mm sigma^2/2) in physical units, /sqrt(pi) to grid units
    const double res = gen.normal() * std::sqrt(v_mm * sig2 / 2.0);
    return static_cast<double>(k) * sp + mu + res / kSqrtPi;
}

}  // namespace gkp::graph
