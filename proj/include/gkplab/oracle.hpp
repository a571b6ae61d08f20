#pragma once
// Brute-force validation engine: dense n-mode (n <= 3) wavefunctions sampled
// on a centered position grid, with exact gate action and homodyne slicing.
// Everything here is deliberately independent of the displacement-layer
// bookkeeping in graph.hpp: states are synthesized from first principles (the
// branch-summed comb-of-Gaussians closed form) and gates act on raw
// amplitudes, so agreement between the two layers is a real cross-check.
//
// Grid convention: per mode, x_m = (m - M/2) * dx with dx = 2L/M, so the grid
// covers [-L, L).  Momentum-side operations (fourier, p-slices) require a
// self-dual grid, dx = sqrt(2*pi/M), for which the centered Fourier transform
// (fft.hpp) maps the grid onto itself.  Self-dual grids with M = 2^(2j+1)
// additionally place sqrt(pi) at exactly 2^j grid steps, keeping comb teeth
// on-grid.

#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include "gkplab/errors.hpp"
#include "gkplab/graph.hpp"
#include "gkplab/states.hpp"

namespace gkp::oracle {

struct GridSpec {
    std::size_t modes = 1;
    std::size_t points = 2048;  // per mode, power of two
    double extent = 0.0;        // L: grid covers [-L, L) per mode

    double dx() const { return 2.0 * extent / static_cast<double>(points); }
    double coord(std::size_t m) const {
        return (static_cast<double>(m) - static_cast<double>(points) / 2.0) * dx();
    }
    std::size_t size() const;  // points^modes
    bool is_self_dual() const;

    /// Self-dual grid (dx = sqrt(2*pi/M)) with the default per-mode sizes
    /// 2048 / 512 / 256 for 1 / 2 / 3 modes, or an explicit override.
    static GridSpec self_dual(std::size_t modes, std::size_t points = 0);

    friend bool operator==(const GridSpec& a, const GridSpec& b) {
        return a.modes == b.modes && a.points == b.points && a.extent == b.extent;
    }
};

/// Throws ContractViolation / CapacityError when the spec violates its
/// invariants (L >= 6 sqrt(pi); M a power of two >= 1024 for one mode, >= 256
/// per mode for two or three; modes in [1,3]).
void validate(const GridSpec& spec);

struct GridWavefunction {
    GridSpec spec;
    std::vector<std::complex<double>> amp;  // row-major, mode 0 slowest

    std::size_t index(const std::vector<std::size_t>& multi) const;
};

double l2_norm(const GridWavefunction& w);
void normalize(GridWavefunction& w);

/// Evaluates the analytic branch-summed comb-of-Gaussians wavefunction of a
/// single finite-energy qubit on the grid and normalizes.
GridWavefunction synthesize(const states::SingleQubitState& state, const GridSpec& spec);

/// Same for a displacement-layer graph state (n <= 3, graph form).  The
/// closed form integrates the joint displacement Gaussian of each branch
/// against the displaced ideal comb layer; see src/oracle.cpp for the
/// derivation of the midpoint-envelope formula.
GridWavefunction synthesize(const graph::GkpGraphState<double>& state, const GridSpec& spec);

/// Gates (in place).  All are unitary on the grid to 1e-8 or better; index
/// shifts that would push significant probability (> 1e-10) off the extent
/// throw AliasingError.
void evolve_cz(GridWavefunction& w, std::size_t i, std::size_t j, int sign = +1);
void evolve_cx(GridWavefunction& w, std::size_t control, std::size_t target, double gain = 1.0);
void evolve_fourier(GridWavefunction& w, std::size_t mode, int sign = +1);
void evolve_displacement(GridWavefunction& w, std::size_t mode, double du, double dv);
void evolve_beamsplitter(GridWavefunction& w, std::size_t i, std::size_t j);

struct SliceResult {
    GridWavefunction remainder;  // n-1 modes, renormalized
    double density = 0.0;        // outcome pdf at y (absolute units)
};

/// Fixes the measured coordinate at y (after a Fourier transform of that mode
/// for p-quadrature slices) and returns the renormalized remainder plus the
/// outcome density.  Requires n >= 2 and |y| within the grid.
SliceResult slice_homodyne(const GridWavefunction& w, std::size_t mode, states::Quadrature quad,
                           double y);

/// Grid inner product <a|b> * dx^n.  Specs must match exactly.
std::complex<double> overlap(const GridWavefunction& a, const GridWavefunction& b);

/// Marginal probability density along one mode: (x_m, pdf_m) rows.
std::vector<std::pair<double, double>> density_profile(const GridWavefunction& w,
                                                       std::size_t mode);

}  // namespace gkp::oracle
