#include "gkplab/states.hpp"

#include <cmath>
#include <string>

#include "gkplab/constants.hpp"
#include "gkplab/errors.hpp"

namespace gkp::states {

const char* to_string(IdealLogical l) {
    switch (l) {
        case IdealLogical::Z0: return "z0";
        case IdealLogical::Z1: return "z1";
        case IdealLogical::XPlus: return "x+";
        case IdealLogical::XMinus: return "x-";
    }
    return "?";
}

IdealLogical ideal_from_string(const std::string& s) {
    if (s == "z0" || s == "0") return IdealLogical::Z0;
    if (s == "z1" || s == "1") return IdealLogical::Z1;
    if (s == "x+" || s == "plus" || s == "+") return IdealLogical::XPlus;
    if (s == "x-" || s == "minus" || s == "-") return IdealLogical::XMinus;
    throw ContractViolation("unknown ideal state label: " + s);
}

CombSpec comb_of(IdealLogical label, Quadrature quad) {
    // Position combs: z-basis states live on the 2*sqrt(pi) lattice (offset
    // for |1>), the equal superpositions on the full sqrt(pi) lattice with the
    // sign alternation carrying the |-> relative phase.  Momentum combs are
    // the Fourier duals: the x-basis states live on the 2*sqrt(pi) lattice.
    if (quad == Quadrature::Q) {
        switch (label) {
            case IdealLogical::Z0: return {2, 0, false};
            case IdealLogical::Z1: return {2, 1, false};
            case IdealLogical::XPlus: return {1, 0, false};
            case IdealLogical::XMinus: return {1, 0, true};
        }
    } else {
        switch (label) {
            case IdealLogical::Z0: return {1, 0, false};
            case IdealLogical::Z1: return {1, 0, true};
            case IdealLogical::XPlus: return {2, 0, false};
            case IdealLogical::XMinus: return {2, 1, false};
        }
    }
    return {};
}

SingleQubitState make_finite_gkp(IdealLogical label, const ErrorEnvelope1& env) {
    if (env.delta2 <= 0.0 || env.kappa2 <= 0.0)
        throw ContractViolation("make_finite_gkp: envelope variances must be positive");
    if (std::sqrt(env.delta2 * env.kappa2) >= 1.0)
        throw UnphysicalEnvelope("make_finite_gkp: delta*kappa >= 1");
    SingleQubitState s;
    s.label = label;
    s.env = env;
    s.regime_ok = std::max(env.delta2, env.kappa2) <= 0.5;
    return s;
}

namespace {

/// Per-representation parameters of the closed-form tooth sum.
struct RepParams {
    CombSpec comb;
    double teeth_var;    // Gaussian tooth variance (amplitude level)
    double env_var;      // conjugate variance entering the envelope factor
    double mean_shift;   // displacement of the teeth in this representation
    double phase_mean;   // conjugate mean generating the tooth phase factor
    double phase_sign;   // sign of the phase factor exponent
};

RepParams rep_params(const SingleQubitState& s, Quadrature quad) {
    RepParams r;
    r.comb = comb_of(s.label, quad);
    if (quad == Quadrature::Q) {
        r.teeth_var = s.env.delta2;
        r.env_var = s.env.kappa2;
        r.mean_shift = s.env.mean_u;
        r.phase_mean = s.env.mean_v;
        r.phase_sign = +1.0;
    } else {
        r.teeth_var = s.env.kappa2;
        r.env_var = s.env.delta2;
        r.mean_shift = s.env.mean_v;
        r.phase_mean = s.env.mean_u;
        r.phase_sign = -1.0;
    }
    return r;
}

/// Largest |tooth| index whose envelope weight is above the tail cutoff.
long long tooth_range(const RepParams& r) {
    // envelope amplitude weight ~ exp(-env_var * pos^2 / 2); drop below 1e-15
    double pos_max = std::sqrt(2.0 * 34.6 / r.env_var);
    long long k = static_cast<long long>(std::ceil(pos_max / (r.comb.spacing * kSqrtPi))) + 1;
    return std::max<long long>(k, 2);
}

void normalize_on_grid(std::vector<std::complex<double>>& psi, const std::vector<double>& grid) {
    if (grid.size() < 2) return;
    double dx = grid[1] - grid[0];
    double n2 = 0.0;
    for (auto& a : psi) n2 += std::norm(a);
    n2 *= dx;
    if (n2 <= 0.0) return;
    double inv = 1.0 / std::sqrt(n2);
    for (auto& a : psi) a *= inv;
}

void check_grid(const std::vector<double>& grid) {
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw ContractViolation("wavefunction grid must be strictly increasing");
}

}  // namespace

std::vector<std::complex<double>> quadrature_wavefunction(const SingleQubitState& state,
                                                          Quadrature quad,
                                                          const std::vector<double>& grid,
                                                          bool normalize) {
    check_grid(grid);
    RepParams r = rep_params(state, quad);
    long long kmax = tooth_range(r);
    std::vector<std::complex<double>> psi(grid.size(), {0.0, 0.0});
    for (long long k = -kmax; k <= kmax; ++k) {
        double pos = (r.comb.spacing * static_cast<double>(k) + r.comb.offset) * kSqrtPi;
        double sign = (r.comb.alternating && (k % 2 != 0)) ? -1.0 : 1.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            double x = grid[i];
            double tooth = x - pos - r.mean_shift;
            double mid = 0.5 * (x + pos);
            double mag = std::exp(-0.5 * tooth * tooth / r.teeth_var - 0.5 * r.env_var * mid * mid);
            double ph = r.phase_sign * r.phase_mean * mid;
            psi[i] += sign * mag * std::complex<double>(std::cos(ph), std::sin(ph));
        }
    }
    if (normalize) normalize_on_grid(psi, grid);
    return psi;
}

std::vector<std::complex<double>> comb_wavefunction(const SingleQubitState& state, Quadrature quad,
                                                    const std::vector<double>& grid,
                                                    bool normalize) {
    check_grid(grid);
    RepParams r = rep_params(state, quad);
    long long kmax = tooth_range(r);
    std::vector<std::complex<double>> psi(grid.size(), {0.0, 0.0});
    for (long long k = -kmax; k <= kmax; ++k) {
        double pos = (r.comb.spacing * static_cast<double>(k) + r.comb.offset) * kSqrtPi;
        double sign = (r.comb.alternating && (k % 2 != 0)) ? -1.0 : 1.0;
        double weight = std::exp(-0.5 * r.env_var * pos * pos);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            double tooth = grid[i] - pos - r.mean_shift;
            psi[i] += sign * weight * std::exp(-0.5 * tooth * tooth / r.teeth_var);
        }
    }
    if (normalize) normalize_on_grid(psi, grid);
    return psi;
}

double homodyne_outcome_pdf(const SingleQubitState& state, Quadrature quad, double x) {
    RepParams r = rep_params(state, quad);
    long long kmax = tooth_range(r);
    double num = 0.0, den = 0.0;
    for (long long k = -kmax; k <= kmax; ++k) {
        double pos = (r.comb.spacing * static_cast<double>(k) + r.comb.offset) * kSqrtPi;
        // envelope factor of |psi|^2 frozen at the tooth center
        double center = pos + 0.5 * r.mean_shift;
        double w = std::exp(-r.env_var * center * center);
        den += w;
        double z = x - pos - r.mean_shift;
        double var = 0.5 * r.teeth_var;
        num += w * std::exp(-0.5 * z * z / var) / std::sqrt(2.0 * kPi * var);
    }
    return num / den;
}

double sample_homodyne(const SingleQubitState& state, Quadrature quad, Rng& rng) {
    RepParams r = rep_params(state, quad);
    long long kmax = tooth_range(r);
    std::vector<double> w(static_cast<std::size_t>(2 * kmax + 1));
    for (long long k = -kmax; k <= kmax; ++k) {
        double pos = (r.comb.spacing * static_cast<double>(k) + r.comb.offset) * kSqrtPi;
        double center = pos + 0.5 * r.mean_shift;
        w[static_cast<std::size_t>(k + kmax)] = std::exp(-r.env_var * center * center);
    }
    long long k = static_cast<long long>(rng.categorical(w)) - kmax;
    double pos = (r.comb.spacing * static_cast<double>(k) + r.comb.offset) * kSqrtPi;
    return pos + r.mean_shift + rng.normal() * std::sqrt(0.5 * r.teeth_var);
}

}  // namespace gkp::states
