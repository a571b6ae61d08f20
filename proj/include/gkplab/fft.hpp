#pragma once
// Radix-2 FFT plus the centered continuum-Fourier convention used by the grid
// engine.  Grids are centered: x_m = (m - M/2) * dx for m in [0, M), M a power
// of two with M/2 even.  The continuum transform pair implemented here is
//
//   psi~(p) = (2*pi)^{-1/2} Int dx e^{-i p x} psi(x)        (forward)
//   psi(x)  = (2*pi)^{-1/2} Int dp e^{+i p x} psi~(p)       (inverse)
//
// sampled on the centered momentum grid p_k = (k - M/2) * dp, dp = 2*pi/(M*dx).
// Substituting the centered coordinates into the Riemann sum gives, using
// e^{-i p_k x_m} = e^{-2*pi*i k m / M} (-1)^{k+m} e^{-i pi M/2} and
// e^{-i pi M/2} = 1 for M/2 even, the bit-exact discrete rule
//
//   psi~_k = dx / sqrt(2*pi) * (-1)^k * FFT[ (-1)^m psi_m ]_k
//   psi_m  = dp / sqrt(2*pi) * (-1)^m * FFT+[ (-1)^k psi~_k ]_m
//
// where FFT uses kernel e^{-2*pi*i k m / M} and FFT+ the conjugate kernel,
// both unnormalized.  The round trip is exactly the identity because
// dx * dp * M = 2*pi.

#include <complex>
#include <cstddef>
#include <vector>

#include "gkplab/constants.hpp"
#include "gkplab/errors.hpp"

namespace gkp::fft {

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// In-place unnormalized radix-2 FFT on a contiguous buffer.
/// sign = -1: kernel e^{-2 pi i k m / N};  sign = +1: conjugate kernel.
inline void transform(std::complex<double>* a, std::size_t n, int sign) {
    if (!is_pow2(n)) throw ContractViolation("fft: length must be a power of two");
    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = static_cast<double>(sign) * 2.0 * kPi / static_cast<double>(len);
        const std::complex<double> wl = std::polar(1.0, ang);
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w{1.0, 0.0};
            for (std::size_t j = 0; j < len / 2; ++j) {
                const std::complex<double> u = a[i + j];
                const std::complex<double> v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

/// Centered continuum Fourier transform of one mode line (see header comment).
/// direction = +1 maps the position samples to momentum samples (forward
/// continuum transform); -1 maps back.  `dx` is the sample spacing of the
/// *input* line; the output lives on the conjugate centered grid with spacing
/// 2*pi/(n*dx).
inline void centered_ft(std::vector<std::complex<double>>& line, double dx, int direction) {
    const std::size_t n = line.size();
    if (!is_pow2(n) || n < 4 || (n / 2) % 2 != 0)
        throw ContractViolation("centered_ft: length must be a power of two with n/2 even");
    for (std::size_t m = 1; m < n; m += 2) line[m] = -line[m];
    transform(line.data(), n, direction > 0 ? -1 : +1);
    const double scale = dx / std::sqrt(2.0 * kPi);
    for (std::size_t k = 0; k < n; ++k) {
        line[k] *= scale;
        if (k % 2 == 1) line[k] = -line[k];
    }
}

}  // namespace gkp::fft
