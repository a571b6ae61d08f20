#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "gkplab/exact.hpp"
#include "gkplab/graph.hpp"
#include "gkplab/la.hpp"
#include "gkplab/rng.hpp"

using namespace gkp;
using gkp::Mat;
using gkp::Vec;

TEST_CASE("Root2 field arithmetic") {
    const Root2 r2 = Root2::sqrt2();
    CHECK((r2 * r2) == Root2(2));
    CHECK((Root2(1) + r2) * (Root2(1) - r2) == Root2(-1));
    CHECK(Root2::inv_sqrt2() * r2 == Root2(1));
    const Root2 x{Rational(3, 7), Rational(-2, 5)};
    const Root2 y{Rational(-1, 3), Rational(9, 4)};
    CHECK((x / y) * y == x);
    CHECK_THROWS_AS(x / Root2(0), ContractViolation);
}

TEST_CASE("Root2 exact sign in all quadrants") {
    CHECK(Root2{Rational(3), Rational(-2)}.sign() == 1);    // 3 - 2*sqrt2 > 0
    CHECK(Root2{Rational(-3), Rational(2)}.sign() == -1);   // rational part dominates
    CHECK(Root2{Rational(2), Rational(-2)}.sign() == -1);   // sqrt2 part dominates
    CHECK(Root2{Rational(-2), Rational(2)}.sign() == 1);
    CHECK(Root2{Rational(1), Rational(-1)}.sign() == -1);
    CHECK(Root2{Rational(-1), Rational(1)}.sign() == 1);
    CHECK(Root2{Rational(0), Rational(-5)}.sign() == -1);
    CHECK(Root2{Rational(5), Rational(0)}.sign() == 1);
    CHECK(Root2{}.sign() == 0);
    CHECK(Root2{Rational(1), Rational(1)}.sign() == 1);
    CHECK(Root2{Rational(-1), Rational(-1)}.sign() == -1);
}

TEST_CASE("floor_exact") {
    CHECK(floor_exact(Root2{Rational(0), Rational(1, 8)}) == 0);   // sqrt2/8 ~ 0.177
    CHECK(floor_exact(Root2{Rational(0), Rational(-1, 8)}) == -1);
    CHECK(floor_exact(Root2(2)) == 2);
    CHECK(floor_exact(Root2(Rational(3, 2))) == 1);
    CHECK(floor_exact(Root2(Rational(-3, 2))) == -2);
    CHECK(floor_exact(Root2::sqrt2()) == 1);
    CHECK(floor_exact(-Root2::sqrt2()) == -2);
}

TEST_CASE("matrix algebra identities, exact scalars") {
    Mat<Root2> a(2, 2);
    a(0, 0) = Root2(1);
    a(0, 1) = Root2::inv_sqrt2();
    a(1, 0) = -Root2::sqrt2();
    a(1, 1) = Root2(Rational(3, 4));
    const auto inv = a.inverse();
    CHECK(a * inv == Mat<Root2>::identity(2));
    CHECK(inv * a == Mat<Root2>::identity(2));
    CHECK(a.transposed().transposed() == a);
}

TEST_CASE("double inverse on random well-conditioned matrices") {
    Rng rng(42);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform01() * 6.0);
        Mat<double> a(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) a(i, j) = rng.normal();
            a(i, i) += 4.0;  // diagonal dominance keeps the condition number tame
        }
        const auto id = a * a.inverse();
        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                err = std::max(err, std::abs(id(i, j) - (i == j ? 1.0 : 0.0)));
        CHECK(err < 1e-10);
    }
}

TEST_CASE("singular matrix raises degenerate conditioning") {
    Mat<double> s(2, 2);
    s(0, 0) = 1.0;
    s(0, 1) = 2.0;
    s(1, 0) = 2.0;
    s(1, 1) = 4.0;
    CHECK_THROWS_AS(s.inverse(), DegenerateConditioning);
}

TEST_CASE("exact inverse of a 7-vertex star covariance (pivot rescan regression)") {
    // The double-magnitude pivot heuristic can see an exactly nonzero Root2
    // entry whose double estimate underflows; the inverse must still succeed
    // and be exact.  A star graph's covariance exercises dense fill-in.
    const std::size_t n = 7;
    std::vector<graph::VertexEnv<Root2>> envs(n, graph::plus_env<Root2>(Root2(1), Root2(1)));
    graph::Adjacency adj(n, std::vector<std::uint8_t>(n, 0));
    for (std::size_t leaf = 1; leaf < n; ++leaf) adj[0][leaf] = adj[leaf][0] = 1;
    const auto st = graph::build_graph_state<Root2>(envs, adj, 0.1);
    const auto inv = st.cov.inverse();
    CHECK(st.cov * inv == Mat<Root2>::identity(2 * n));
}

TEST_CASE("dot and solve") {
    Vec<double> x{1.0, 2.0, 3.0};
    Vec<double> y{4.0, -5.0, 6.0};
    CHECK(gkp::dot(x, y) == doctest::Approx(12.0));
    Mat<double> a(2, 2);
    a(0, 0) = 2.0;
    a(0, 1) = 1.0;
    a(1, 0) = 1.0;
    a(1, 1) = 3.0;
    const auto sol = a.solve(Vec<double>{5.0, 10.0});
    CHECK(2.0 * sol[0] + 1.0 * sol[1] == doctest::Approx(5.0));
    CHECK(1.0 * sol[0] + 3.0 * sol[1] == doctest::Approx(10.0));
}

TEST_CASE("symmetric eigenvalues of a known matrix") {
    Mat<double> m(2, 2);
    m(0, 0) = 2.0;
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
    m(1, 1) = 2.0;
    auto ev = gkp::symmetric_eigenvalues(m);
    REQUIRE(ev.size() == 2);
    CHECK(ev.front() == doctest::Approx(1.0));
    CHECK(ev.back() == doctest::Approx(3.0));
}
