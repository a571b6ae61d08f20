#pragma once

#include <complex>
#include <vector>

#include "gkplab/rng.hpp"

namespace gkp::states {

/// Ideal (infinite-energy) GKP computational/equal-superposition basis states.
enum class IdealLogical { Z0, Z1, XPlus, XMinus };

enum class Quadrature { Q, P };

const char* to_string(IdealLogical l);
IdealLogical ideal_from_string(const std::string& s);

/// Single-qubit displacement-noise envelope.  Variances are absolute
/// (vacuum = 1/2 in these units): delta2 smears the q-displacement, kappa2 the
/// p-displacement; mean_u / mean_v shift the respective displacement means.
struct ErrorEnvelope1 {
    double delta2 = 0.1;
    double kappa2 = 0.1;
    double mean_u = 0.0;
    double mean_v = 0.0;
};

/// Comb geometry of an ideal state in one representation.  Teeth sit at
/// (spacing*k + offset) * sqrt(pi), k over all integers; `alternating` marks
/// the (-1)^k sign pattern.
struct CombSpec {
    int spacing = 1;
    int offset = 0;
    bool alternating = false;
};

CombSpec comb_of(IdealLogical label, Quadrature quad);

struct SingleQubitState {
    IdealLogical label = IdealLogical::XPlus;
    ErrorEnvelope1 env;
    bool regime_ok = true;  // false when the envelope is too wide for the
                            // narrow-teeth approximations to be meaningful
};

/// Validates the envelope (delta*kappa < 1) and packages the state handle.
SingleQubitState make_finite_gkp(IdealLogical label, const ErrorEnvelope1& env);

/// Complex wavefunction of the state in the chosen representation, sampled on
/// `grid` (strictly increasing).  The closed form is a sum over comb teeth of
/// Gaussian teeth, a midpoint-evaluated Gaussian envelope, and the
/// displacement-mean phase factor; L2-normalized over the grid when
/// `normalize` is set (the grid is assumed uniform for that purpose).
std::vector<std::complex<double>> quadrature_wavefunction(const SingleQubitState& state,
                                                          Quadrature quad,
                                                          const std::vector<double>& grid,
                                                          bool normalize = true);

/// The naive comb construction: Gaussian teeth weighted by the envelope
/// evaluated *at* each tooth (no midpoint coupling, no mean phases).  Agrees
/// with quadrature_wavefunction in the narrow-envelope limit; kept as the
/// second construction for the representation-equivalence checks.
std::vector<std::complex<double>> comb_wavefunction(const SingleQubitState& state, Quadrature quad,
                                                    const std::vector<double>& grid,
                                                    bool normalize = true);

/// Probability density of a homodyne outcome at `x`: comb of Gaussians
/// N(x; tooth + mean, teeth_var/2) with envelope tooth weights, normalized so
/// the full-line integral is 1.
double homodyne_outcome_pdf(const SingleQubitState& state, Quadrature quad, double x);

/// Draws tooth index from the envelope weights, then the Gaussian residue.
double sample_homodyne(const SingleQubitState& state, Quadrature quad, Rng& rng);

}  // namespace gkp::states
