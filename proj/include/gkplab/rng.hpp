#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "gkplab/errors.hpp"

namespace gkp {

/// Deterministic random source.  The raw engine is std::mt19937_64 (bit-stable
/// everywhere); the uniform and normal transforms are implemented here rather
/// than via std::*_distribution because the standard leaves those
/// implementation-defined, which would break byte-identical goldens across
/// toolchains.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    /// Uniform in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    /// Standard normal via the polar (Marsaglia) method with a cached spare.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

    /// Sample an index from nonnegative weights (need not be normalized).
    std::size_t categorical(const std::vector<double>& weights) {
        double total = 0.0;
        for (double w : weights) total += w;
        if (total <= 0.0) throw ContractViolation("categorical: no positive weight");
        double r = uniform01() * total;
        double acc = 0.0;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            acc += weights[i];
            if (r < acc) return i;
        }
        return weights.size() - 1;
    }

    /// Integer sample from the discrete Gaussian w(k) ~ exp(-k^2 / (2 s2)),
    /// truncated where the dropped tail weight is below 1e-15.
    long long discrete_gaussian(double s2) {
        if (s2 <= 0.0) return 0;
        // exp(-K^2/(2 s2)) <= 1e-15  =>  K >= sqrt(2 s2 * 34.6)
        long long k_max = static_cast<long long>(std::ceil(std::sqrt(2.0 * s2 * 34.6))) + 1;
        std::vector<double> w(static_cast<std::size_t>(2 * k_max + 1));
        for (long long k = -k_max; k <= k_max; ++k)
            w[static_cast<std::size_t>(k + k_max)] = std::exp(-0.5 * k * k / s2);
        return static_cast<long long>(categorical(w)) - k_max;
    }

    std::uint64_t raw() { return eng_(); }

  private:
    std::mt19937_64 eng_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace gkp
