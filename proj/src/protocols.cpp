#include "gkplab/protocols.hpp"

#include <cmath>
#include <cstdlib>
#include <deque>
#include <string>
#include <vector>

namespace gkp::protocols {

namespace {

void validate_descriptor(const MeasurementDescriptor& d, double sigma2) {
    if (!(d.v_mm > 0.0) || !(d.cond_conj > 0.0))
        throw ContractViolation("measurement descriptor variances must be positive");
    if (!(d.spacing > 0.0)) throw ContractViolation("comb tooth spacing must be positive");
    if (!(sigma2 > 0.0)) throw ContractViolation("sigma^2 must be positive");
}

/// Tooth weights P_N[n] ∝ exp(-alpha n^2) become negligible past this index.
long long tooth_range(double alpha) {
    return static_cast<long long>(std::ceil(std::sqrt(34.6 / alpha))) + 1;
}

double normal_pdf(double x, double var) {
    return std::exp(-x * x / (2.0 * var)) / std::sqrt(2.0 * kPi * var);
}

/// Precomputed comb mixture for one measurement at one noise level.
struct CombModel {
    double spacing;
    double alpha;    // tooth damping exponent (per squared index)
    double res_var;  // residue variance, absolute units
    long long kmax;
    double z;  // tooth-weight normalization

    CombModel(const MeasurementDescriptor& d, double sigma2)
        : spacing(d.spacing),
          alpha(sigma2 * d.cond_conj * d.spacing * d.spacing),
          res_var(d.v_mm * sigma2 / 2.0),
          kmax(tooth_range(alpha)),
          z(0.0) {
        for (long long k = -kmax; k <= kmax; ++k)
            z += std::exp(-alpha * static_cast<double>(k * k));
    }

    double tooth_weight(long long k) const {
        return std::exp(-alpha * static_cast<double>(k * k)) / z;
    }

    double pdf(double y) const {
        double p = 0.0;
        for (long long k = -kmax; k <= kmax; ++k)
            p += tooth_weight(k) * normal_pdf(y - static_cast<double>(k) * spacing, res_var);
        return p;
    }

    double error_probability(double y) const {
        const double ay = std::abs(y);
        const long long n = static_cast<long long>(std::floor(ay / spacing));
        const double rn = ay - static_cast<double>(n) * spacing;
        const double cn = tooth_weight(n) * normal_pdf(rn, res_var);
        const double cn1 = tooth_weight(n + 1) * normal_pdf(rn - spacing, res_var);
        const double far = rn < spacing / 2.0 ? cn1 : cn;
        return far / (cn + cn1);
    }
};

template <class F>
double adaptive_simpson_rec(const F& f, double a, double m, double b, double fa, double fm,
                            double fb, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <class F>
double adaptive_simpson(const F& f, double a, double b, double tol) {
    if (!(b > a)) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson_rec(f, a, m, b, fa, fm, fb, whole, tol, 48);
}

constexpr double kQuadTol = 1e-11;

void validate_window(const MeasurementDescriptor& d, double nu) {
    if (!(nu >= 0.0) || nu >= d.spacing / 2.0)
        throw ContractViolation("post-selection half-window must lie in [0, spacing/2)");
}

}  // namespace

const char* to_string(FusionVariant v) {
    switch (v) {
        case FusionVariant::A: return "A";
        case FusionVariant::B: return "B";
        case FusionVariant::C: return "C";
    }
    throw ContractViolation("unknown fusion variant");
}

FusionVariant fusion_variant_from_string(const std::string& s) {
    if (s == "A" || s == "a") return FusionVariant::A;
    if (s == "B" || s == "b") return FusionVariant::B;
    if (s == "C" || s == "c") return FusionVariant::C;
    throw ContractViolation("unknown fusion variant '" + s + "'");
}

MeasurementDescriptor steane_descriptor(double l_a, double l_b, double m_a, double m_b) {
    if (!(l_a > 0.0) || !(l_b > 0.0) || !(m_a > 0.0) || !(m_b > 0.0))
        throw ContractViolation("envelope weights must be positive");
    return MeasurementDescriptor{m_a + m_b, l_a * l_b / (l_a + l_b), kSqrtPi};
}

bool descriptor_regime_ok(const MeasurementDescriptor& d, double sigma2) {
    validate_descriptor(d, sigma2);
    return std::sqrt(d.v_mm * sigma2) < d.spacing / 2.0;
}

double comb_outcome_pdf(const MeasurementDescriptor& d, double sigma2, double y) {
    validate_descriptor(d, sigma2);
    return CombModel(d, sigma2).pdf(y);
}

double steane_outcome_pdf(double l_a, double l_b, double m_a, double m_b, double sigma2,
                          double y) {
    return comb_outcome_pdf(steane_descriptor(l_a, l_b, m_a, m_b), sigma2, y);
}

BranchWeights branch_weights(const MeasurementDescriptor& d, double sigma2, double y) {
    validate_descriptor(d, sigma2);
    const double ay = std::abs(y);
    const long long n = static_cast<long long>(std::floor(ay / d.spacing));
    const double alpha = sigma2 * d.cond_conj * d.spacing * d.spacing;
    const double res_var = d.v_mm * sigma2 / 2.0;
    const double rn = ay - static_cast<double>(n) * d.spacing;
    // log weights, shifted so the larger one is exactly 1 (only ratios are
    // meaningful; the shift keeps doubly-exponential tails representable)
    const double ln = -alpha * static_cast<double>(n * n) - rn * rn / (2.0 * res_var);
    const double ln1 = -alpha * static_cast<double>((n + 1) * (n + 1)) -
                       (rn - d.spacing) * (rn - d.spacing) / (2.0 * res_var);
    const double shift = std::max(ln, ln1);
    BranchWeights w;
    w.n = n;
    w.c_n = std::exp(ln - shift);
    w.c_n1 = std::exp(ln1 - shift);
    w.spacing = d.spacing;
    return w;
}

double branch_error_probability(const BranchWeights& w, double y) {
    if (!(w.c_n >= 0.0) || !(w.c_n1 >= 0.0) || !(w.c_n + w.c_n1 > 0.0))
        throw ContractViolation("branch weights must be nonnegative with a positive sum");
    const double rn = std::abs(y) - static_cast<double>(w.n) * w.spacing;
    const double far = rn < w.spacing / 2.0 ? w.c_n1 : w.c_n;
    return far / (w.c_n + w.c_n1);
}

CenteredMod centered_mod_root_pi(double y) {
    const double zf = std::floor(y / kSqrtPi + 0.5);
    const long long z = static_cast<long long>(zf);
    return CenteredMod{y - zf * kSqrtPi, z};
}

double postselect_success_probability(const MeasurementDescriptor& d, double sigma2, double nu) {
    validate_descriptor(d, sigma2);
    validate_window(d, nu);
    const CombModel model(d, sigma2);
    const double half = d.spacing / 2.0;
    auto pdf = [&model](double y) { return model.pdf(y); };
    double s = adaptive_simpson(pdf, 0.0, half - nu, kQuadTol);
    s += adaptive_simpson(pdf, half + nu, d.spacing, kQuadTol);
    return 2.0 * s;
}

double postselect_success_probability(double l_a, double l_b, double m_a, double m_b,
                                      double sigma2, double nu) {
    return postselect_success_probability(steane_descriptor(l_a, l_b, m_a, m_b), sigma2, nu);
}

double average_error_probability(const MeasurementDescriptor& d, double sigma2, double nu) {
    validate_descriptor(d, sigma2);
    validate_window(d, nu);
    const CombModel model(d, sigma2);
    const double half = d.spacing / 2.0;
    auto pdf = [&model](double y) { return model.pdf(y); };
    auto bad = [&model](double y) { return model.pdf(y) * model.error_probability(y); };
    double den = adaptive_simpson(pdf, 0.0, half - nu, kQuadTol) +
                 adaptive_simpson(pdf, half + nu, d.spacing, kQuadTol);
    double num = adaptive_simpson(bad, 0.0, half - nu, kQuadTol) +
                 adaptive_simpson(bad, half + nu, d.spacing, kQuadTol);
    if (!(den > 0.0)) throw DegenerateConditioning("empty post-selection acceptance window");
    return num / den;
}

double average_error_probability(double l_a, double l_b, double m_a, double m_b, double sigma2,
                                 double nu) {
    return average_error_probability(steane_descriptor(l_a, l_b, m_a, m_b), sigma2, nu);
}

double average_total_error(const std::vector<MeasurementDescriptor>& ms, double sigma2,
                           double nu) {
    double ok = 1.0;
    for (const auto& d : ms) ok *= 1.0 - average_error_probability(d, sigma2, nu);
    return 1.0 - ok;
}

std::vector<int> bfs_distances(const graph::Adjacency& adj,
                               const std::vector<std::size_t>& sources) {
    const std::size_t n = adj.size();
    std::vector<int> dist(n, -1);
    std::deque<std::size_t> queue;
    for (std::size_t s : sources) {
        if (s >= n) throw ContractViolation("bfs source out of range");
        if (dist[s] == 0) continue;
        dist[s] = 0;
        queue.push_back(s);
    }
    while (!queue.empty()) {
        const std::size_t v = queue.front();
        queue.pop_front();
        if (adj[v].size() != n) throw ContractViolation("adjacency matrix is not square");
        for (std::size_t w = 0; w < n; ++w) {
            if (!adj[v][w] || dist[w] >= 0) continue;
            dist[w] = dist[v] + 1;
            queue.push_back(w);
        }
    }
    return dist;
}

}  // namespace gkp::protocols
