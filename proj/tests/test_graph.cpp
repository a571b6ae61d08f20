#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "gkplab/constants.hpp"
#include "gkplab/errors.hpp"
#include "gkplab/exact.hpp"
#include "gkplab/graph.hpp"

using namespace gkp;
using gkp::states::IdealLogical;
using gkp::states::Quadrature;

namespace {

template <class T>
GkpGraphState<T> two_vertex_chain() {
    std::vector<VertexEnv<T>> envs = {plus_env<T>(ScalarTraits<T>::one(), ScalarTraits<T>::one()),
                                      plus_env<T>(ScalarTraits<T>::one(), ScalarTraits<T>::one())};
    Adjacency adj = {{0, 1}, {1, 0}};
    return build_graph_state<T>(envs, adj, 0.1);
}

Mat<Root2> int_matrix(const std::vector<std::vector<int>>& rows) {
    Mat<Root2> m(rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = Root2(rows[i][j]);
    return m;
}

}  // namespace

TEST_CASE("two-vertex covariance blocks") {
    auto st = two_vertex_chain<Root2>();
    // variable order (s0, s1, t0, t1); entries in units of sigma^2
    auto expect = int_matrix({{1, 0, 0, -1}, {0, 1, -1, 0}, {0, -1, 2, 0}, {-1, 0, 0, 2}});
    CHECK(st.cov == expect);
    CHECK(st.branches.size() == 1);
    CHECK(st.total_weight() == doctest::Approx(1.0));
}

TEST_CASE("adjacency validation") {
    using T = Root2;
    std::vector<VertexEnv<T>> envs = {plus_env<T>(Root2(1), Root2(1)),
                                      plus_env<T>(Root2(1), Root2(1))};
    CHECK_THROWS_AS(build_graph_state<T>(envs, {{0, 1}}, 0.1), ContractViolation);
    CHECK_THROWS_AS(build_graph_state<T>(envs, {{1, 1}, {1, 0}}, 0.1), ContractViolation);
    CHECK_THROWS_AS(build_graph_state<T>(envs, {{0, 1}, {0, 0}}, 0.1), ContractViolation);
    std::vector<VertexEnv<T>> bad = {plus_env<T>(Root2(0), Root2(1)),
                                     plus_env<T>(Root2(1), Root2(1))};
    CHECK_THROWS_AS(build_graph_state<T>(bad, {{0, 0}, {0, 0}}, 0.1), ContractViolation);
}

TEST_CASE("shared neighbors correlate the p-layer") {
    using T = Root2;
    // star with center 0 and leaves 1, 2
    std::vector<VertexEnv<T>> envs(3, plus_env<T>(Root2(1), Root2(1)));
    Adjacency adj = {{0, 1, 1}, {1, 0, 0}, {1, 0, 0}};
    auto st = build_graph_state<T>(envs, adj, 0.1);
    CHECK(st.cov(st.t_index(0), st.t_index(0)) == Root2(3));  // m + two neighbor l's
    CHECK(st.cov(st.t_index(1), st.t_index(2)) == Root2(1));  // common neighbor 0
    CHECK(st.cov(st.t_index(1), st.t_index(1)) == Root2(2));
    CHECK(st.cov(st.s_index(1), st.s_index(2)) == Root2(0));  // q-layer stays diagonal
}

TEST_CASE("cz toggles edges and is an exact involution") {
    using T = Root2;
    std::vector<VertexEnv<T>> envs(2, plus_env<T>(Root2(1), Root2(1)));
    Adjacency empty = {{0, 0}, {0, 0}};
    auto st = build_graph_state<T>(envs, empty, 0.1);
    auto product_cov = st.cov;

    apply_cz(st, 0, 1);
    CHECK(st.adjacency[0][1] == 1);
    CHECK(st.cov == two_vertex_chain<Root2>().cov);

    apply_cz(st, 0, 1);
    CHECK(st.adjacency[0][1] == 0);
    CHECK(st.cov == product_cov);

    CHECK_THROWS_AS(apply_cz(st, 0, 0), ContractViolation);
    CHECK_THROWS_AS(apply_cz(st, 0, 5), ContractViolation);
}

TEST_CASE("vertex append keeps ordering and isolates the newcomer") {
    auto st = two_vertex_chain<Root2>();
    add_vertex(st, plus_env<Root2>(Root2(1), Root2(1)), 7);
    CHECK(st.n() == 3);
    CHECK(st.index_of(7) == 2);
    CHECK_THROWS_AS(st.index_of(3), ContractViolation);
    CHECK_THROWS_AS(add_vertex(st, plus_env<Root2>(Root2(1), Root2(1)), 7), ContractViolation);
    // old block preserved under the (s..., t...) reordering
    auto chain = two_vertex_chain<Root2>();
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b) {
            CHECK(st.cov(a, b) == chain.cov(a, b));
            CHECK(st.cov(3 + a, 3 + b) == chain.cov(2 + a, 2 + b));
            CHECK(st.cov(a, 3 + b) == chain.cov(a, 2 + b));
        }
    // newcomer uncorrelated
    CHECK(st.cov(2, 2) == Root2(1));
    CHECK(st.cov(5, 5) == Root2(1));
    CHECK(st.cov(2, 0) == Root2(0));
    CHECK(st.cov(5, 3) == Root2(0));
}

TEST_CASE("fourier fourth power and beamsplitter fourth power are covariance identities") {
    using T = Root2;
    std::vector<VertexEnv<T>> envs = {plus_env<T>(Root2(2), Root2(3)),
                                      plus_env<T>(Root2(5), Root2(7))};
    Adjacency adj = {{0, 1}, {1, 0}};
    auto st = build_graph_state<T>(envs, adj, 0.1);
    auto cov0 = st.cov;

    apply_fourier(st, 0, +1);
    CHECK(st.cov(0, 0) == cov0(st.t_index(0), st.t_index(0)));  // q picks up old p variance
    for (int k = 0; k < 3; ++k) apply_fourier(st, 0, +1);
    CHECK(st.cov == cov0);

    // one inverse rotation undoes one forward rotation exactly
    apply_fourier(st, 1, +1);
    apply_fourier(st, 1, -1);
    CHECK(st.cov == cov0);

    for (int k = 0; k < 4; ++k) apply_beamsplitter(st, 0, 1);
    CHECK(st.cov == cov0);

    CHECK_THROWS_AS(apply_fourier(st, 0, 2), ContractViolation);
    CHECK_THROWS_AS(apply_beamsplitter(st, 1, 1), ContractViolation);
}

TEST_CASE("displacement bookkeeping") {
    auto st = two_vertex_chain<Root2>();
    auto cov0 = st.cov;
    const Root2 du = Root2(Rational(3, 10));
    const Root2 dv = Root2(Rational(-1, 5));

    apply_displacement(st, 0, du, dv);
    CHECK(st.cov == cov0);  // displacements never touch the covariance
    const auto& b = st.branches[0];
    CHECK(b.mean[st.s_index(0)] == du);
    CHECK(b.mean[st.t_index(0)] == dv);
    CHECK(b.grad[st.s_index(0)] == dv / Root2(2));
    CHECK(b.grad[st.t_index(0)] == Root2(0) - du / Root2(2));
    CHECK(std::abs(std::abs(b.amp) - 1.0) < 1e-15);
    // gradients were zero before the shift, so no phase was accrued
    CHECK(std::abs(std::arg(b.amp)) < 1e-15);

    // displacing back does accrue phase from the now-nonzero gradients
    apply_displacement(st, 0, Root2(0) - du, Root2(0) - dv);
    CHECK(st.branches[0].mean[st.s_index(0)] == Root2(0));
    double expected = -kPi * (ScalarTraits<Root2>::to_d(dv / Root2(2)) * (-0.3) +
                              ScalarTraits<Root2>::to_d(Root2(0) - du / Root2(2)) * 0.2);
    CHECK(std::arg(st.branches[0].amp) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("centered cell reduction with upward ties") {
    using D = gkp::detail::centered_cell<Root2>;
    auto check = [](double y, long long cell, double residue) {
        auto [c, r] = gkp::detail::centered_cell(Root2(Rational(y)), Root2(1));
        CHECK(c == cell);
        CHECK(ScalarTraits<Root2>::to_d(r) == doctest::Approx(residue).epsilon(1e-15));
    };
    (void)sizeof(D*);
    check(0.25, 0, 0.25);
    check(0.75, 1, -0.25);
    check(-0.25, 0, -0.25);
    check(-0.75, -1, 0.25);
    check(0.5, 1, -0.5);   // tie goes to the upper cell
    check(-0.5, 0, -0.5);  // tie goes to the upper cell
    check(2.0, 2, 0.0);
}

TEST_CASE("homodyne splits branches over bracketing teeth and shrinks the state") {
    auto st = two_vertex_chain<Root2>();
    const Root2 y = Root2(Rational(1, 4));
    auto rec = measure_homodyne(st, 0, Quadrature::Q, y, Root2(1), 0.0);

    CHECK(st.n() == 1);
    CHECK(st.ids == std::vector<int>{1});
    CHECK(st.cov.rows() == 2);
    CHECK(st.branches.size() == 2);
    CHECK(st.branches[0].tags.size() == 1);
    CHECK((st.branches[0].tags[0] ^ st.branches[1].tags[0]) == 1);  // even/odd teeth

    CHECK(rec.mode_id == 0);
    CHECK(rec.cell == 0);
    CHECK(rec.residue == y);
    CHECK(rec.kept_ids == std::vector<int>{1});
    CHECK(rec.v_mm == doctest::Approx(1.0));
    // conditional conjugate variance of the chain: 2 - 1/1 = 1
    CHECK(rec.cond_conj == doctest::Approx(1.0));
    CHECK(rec.feedback_gain.size() == 2);

    normalize_branches(st);
    CHECK(st.total_weight() == doctest::Approx(1.0).epsilon(1e-12));

    // a second measurement doubles the branch count again
    add_vertex(st, plus_env<Root2>(Root2(1), Root2(1)), 9);
    measure_homodyne(st, 0, Quadrature::Q, Root2(0), Root2(1), 0.0);
    CHECK(st.branches.size() == 4);

    CHECK_THROWS_AS(measure_homodyne(st, 2, Quadrature::Q, Root2(0), Root2(1)),
                    ContractViolation);
    CHECK_THROWS_AS(measure_homodyne(st, 0, Quadrature::Q, Root2(0), Root2(0)),
                    ContractViolation);
}

TEST_CASE("pruning removes negligible branches and records the dropped weight") {
    auto st = two_vertex_chain<double>();
    measure_homodyne(st, 0, Quadrature::Q, 0.25, 1.0, 0.0);
    normalize_branches(st);
    auto tiny = st.branches[0];
    tiny.amp *= 1e-9;
    st.branches.push_back(tiny);
    const std::size_t before = st.branches.size();
    prune_branches(st, 1e-6);
    CHECK(st.branches.size() == before - 1);
    CHECK(st.dropped_weight > 0.0);
    CHECK(st.dropped_weight < 1e-12);
}

TEST_CASE("measuring the last mode is rejected") {
    auto st = two_vertex_chain<double>();
    measure_homodyne(st, 0, Quadrature::Q, 0.0, 1.0, 0.0);
    CHECK_THROWS_AS(measure_homodyne(st, 0, Quadrature::Q, 0.0, 1.0), ContractViolation);
}

TEST_CASE("outcome density integrates to the branch weight") {
    auto st = two_vertex_chain<double>();
    normalize_branches(st);
    double acc = 0.0;
    const double dy = 0.01;  // sqrt(pi) units
    for (double y = -8.0; y <= 8.0; y += dy)
        acc += homodyne_outcome_density(st, 0, Quadrature::Q, y) * dy;
    CHECK(acc == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("sampled outcomes are deterministic per seed") {
    auto st = two_vertex_chain<double>();
    normalize_branches(st);
    Rng a(11), b(11), c(12);
    double xa = sample_homodyne_outcome(st, 0, Quadrature::Q, a);
    double xb = sample_homodyne_outcome(st, 0, Quadrature::Q, b);
    double xc = sample_homodyne_outcome(st, 0, Quadrature::Q, c);
    CHECK(xa == xb);
    CHECK(xa != xc);
}
