#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "gkplab/constants.hpp"
#include "gkplab/errors.hpp"
#include "gkplab/rng.hpp"
#include "gkplab/states.hpp"

using namespace gkp;
using namespace gkp::states;

namespace {

std::vector<double> uniform_grid(double xmax, double dx) {
    std::vector<double> g;
    for (double x = -xmax; x <= xmax + 1e-12; x += dx) g.push_back(x);
    return g;
}

double l2sq_distance(const std::vector<std::complex<double>>& a,
                     const std::vector<std::complex<double>>& b, double dx) {
    double d2 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d2 += std::norm(a[i] - b[i]);
    return d2 * dx;
}

}  // namespace

TEST_CASE("label round trips and aliases") {
    for (auto l : {IdealLogical::Z0, IdealLogical::Z1, IdealLogical::XPlus, IdealLogical::XMinus})
        CHECK(ideal_from_string(to_string(l)) == l);
    CHECK(ideal_from_string("0") == IdealLogical::Z0);
    CHECK(ideal_from_string("1") == IdealLogical::Z1);
    CHECK(ideal_from_string("plus") == IdealLogical::XPlus);
    CHECK(ideal_from_string("minus") == IdealLogical::XMinus);
    CHECK_THROWS_AS(ideal_from_string("y+"), ContractViolation);
}

TEST_CASE("comb geometry per label and representation") {
    auto check = [](IdealLogical l, Quadrature q, int spacing, int offset, bool alt) {
        CombSpec c = comb_of(l, q);
        CHECK(c.spacing == spacing);
        CHECK(c.offset == offset);
        CHECK(c.alternating == alt);
    };
    // position combs: z-basis on the doubled lattice, superpositions dense
    check(IdealLogical::Z0, Quadrature::Q, 2, 0, false);
    check(IdealLogical::Z1, Quadrature::Q, 2, 1, false);
    check(IdealLogical::XPlus, Quadrature::Q, 1, 0, false);
    check(IdealLogical::XMinus, Quadrature::Q, 1, 0, true);
    // momentum combs are the duals
    check(IdealLogical::Z0, Quadrature::P, 1, 0, false);
    check(IdealLogical::Z1, Quadrature::P, 1, 0, true);
    check(IdealLogical::XPlus, Quadrature::P, 2, 0, false);
    check(IdealLogical::XMinus, Quadrature::P, 2, 1, false);
}

TEST_CASE("envelope validation") {
    CHECK_THROWS_AS(make_finite_gkp(IdealLogical::Z0, {0.0, 0.1, 0.0, 0.0}), ContractViolation);
    CHECK_THROWS_AS(make_finite_gkp(IdealLogical::Z0, {0.1, -0.2, 0.0, 0.0}), ContractViolation);
    CHECK_THROWS_AS(make_finite_gkp(IdealLogical::Z0, {1.5, 1.5, 0.0, 0.0}), UnphysicalEnvelope);
    CHECK(make_finite_gkp(IdealLogical::Z0, {0.1, 0.1, 0.0, 0.0}).regime_ok);
    CHECK_FALSE(make_finite_gkp(IdealLogical::Z0, {0.6, 0.1, 0.0, 0.0}).regime_ok);
}

TEST_CASE("wavefunction grid contract and normalization") {
    auto st = make_finite_gkp(IdealLogical::XPlus, {0.1, 0.1, 0.0, 0.0});
    std::vector<double> bad = {0.0, 1.0, 1.0};
    CHECK_THROWS_AS(quadrature_wavefunction(st, Quadrature::Q, bad), ContractViolation);

    const double dx = 0.01;
    auto grid = uniform_grid(12.0, dx);
    for (auto q : {Quadrature::Q, Quadrature::P}) {
        auto psi = quadrature_wavefunction(st, q, grid);
        double n2 = 0.0;
        for (auto& a : psi) n2 += std::norm(a);
        CHECK(n2 * dx == doctest::Approx(1.0).epsilon(1e-6));
        // zero displacement means give a real wavefunction
        double max_imag = 0.0;
        for (auto& a : psi) max_imag = std::max(max_imag, std::abs(a.imag()));
        CHECK(max_imag < 1e-14);
    }
}

TEST_CASE("mid-tooth suppression of the z-basis position comb") {
    auto z0 = make_finite_gkp(IdealLogical::Z0, {0.1, 0.1, 0.0, 0.0});
    std::vector<double> pts = {0.0, kSqrtPi};
    auto psi = quadrature_wavefunction(z0, Quadrature::Q, pts, false);
    // teeth sit at even multiples of sqrt(pi); odd multiples are suppressed
    // by roughly exp(-pi/(2*0.1)) ~ 1.5e-7
    CHECK(std::abs(psi[1]) / std::abs(psi[0]) < 1e-6);
}

TEST_CASE("closed-form and naive comb constructions converge as the envelope narrows") {
    const double dx = 0.005;
    auto grid = uniform_grid(6.0 * kSqrtPi, dx);
    std::vector<double> d2;
    for (double e2 : {0.01, 0.05, 0.1}) {
        auto st = make_finite_gkp(IdealLogical::Z0, {e2, e2, 0.0, 0.0});
        auto a = quadrature_wavefunction(st, Quadrature::P, grid);
        auto b = comb_wavefunction(st, Quadrature::P, grid);
        d2.push_back(l2sq_distance(a, b, dx));
    }
    CHECK(d2[0] < 1e-3);     // narrow envelope: constructions near-identical
    CHECK(d2[0] < d2[1]);    // discrepancy grows with the envelope product
    CHECK(d2[1] < d2[2]);
    // squared distance scales linearly in delta2*kappa2 (slope ~ 1/16)
    CHECK(d2[0] == doctest::Approx(1e-4 / 16.0).epsilon(0.15));
    CHECK(d2[1] == doctest::Approx(2.5e-3 / 16.0).epsilon(0.15));
}

TEST_CASE("homodyne pdf peaks, ratios and normalization") {
    const double s2 = 0.1;
    auto xp = make_finite_gkp(IdealLogical::XPlus, {s2, s2, 0.0, 0.0});
    auto z0 = make_finite_gkp(IdealLogical::Z0, {s2, s2, 0.0, 0.0});

    // dense comb: neighboring peak ratio = exp(-pi*sigma2)
    double r = homodyne_outcome_pdf(xp, Quadrature::Q, kSqrtPi) /
               homodyne_outcome_pdf(xp, Quadrature::Q, 0.0);
    CHECK(r == doctest::Approx(std::exp(-kPi * s2)).epsilon(1e-9));

    // doubled comb: no tooth at sqrt(pi), next tooth ratio exp(-4*pi*sigma2)
    double mid = homodyne_outcome_pdf(z0, Quadrature::Q, kSqrtPi) /
                 homodyne_outcome_pdf(z0, Quadrature::Q, 0.0);
    CHECK(mid < 1e-10);
    double r2 = homodyne_outcome_pdf(z0, Quadrature::Q, 2.0 * kSqrtPi) /
                homodyne_outcome_pdf(z0, Quadrature::Q, 0.0);
    CHECK(r2 == doctest::Approx(std::exp(-4.0 * kPi * s2)).epsilon(1e-9));

    // central peak height ~ 2/sqrt(pi) at sigma2 = 0.1
    CHECK(homodyne_outcome_pdf(z0, Quadrature::Q, 0.0) ==
          doctest::Approx(2.0 / std::sqrt(kPi)).epsilon(5e-3));

    // unit integral
    for (auto q : {Quadrature::Q, Quadrature::P}) {
        double acc = 0.0;
        const double dx = 0.002;
        for (double x = -14.0; x <= 14.0; x += dx) acc += homodyne_outcome_pdf(xp, q, x) * dx;
        CHECK(acc == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("displacement means shift the comb") {
    auto z0 = make_finite_gkp(IdealLogical::Z0, {0.1, 0.1, 0.3, 0.0});
    CHECK(homodyne_outcome_pdf(z0, Quadrature::Q, 0.3) >
          2.0 * homodyne_outcome_pdf(z0, Quadrature::Q, 0.0));
}

TEST_CASE("homodyne sampling is seed-deterministic and lands on teeth") {
    auto z0 = make_finite_gkp(IdealLogical::Z0, {0.02, 0.02, 0.0, 0.0});
    Rng a(42), b(42), c(43);
    bool all_equal = true, any_diff = false;
    for (int i = 0; i < 200; ++i) {
        double xa = sample_homodyne(z0, Quadrature::Q, a);
        double xb = sample_homodyne(z0, Quadrature::Q, b);
        double xc = sample_homodyne(z0, Quadrature::Q, c);
        all_equal = all_equal && (xa == xb);
        any_diff = any_diff || (xa != xc);
        // narrow teeth: every draw within 6 tooth-sigmas of an even multiple
        double k = std::round(xa / (2.0 * kSqrtPi));
        CHECK(std::abs(xa - 2.0 * kSqrtPi * k) < 0.6);
    }
    CHECK(all_equal);
    CHECK(any_diff);
}
