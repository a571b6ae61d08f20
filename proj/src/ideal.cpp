#include "gkplab/ideal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gkp::ideal {

bool PauliString::commutes_with(const PauliString& o) const {
    int acc = 0;
    for (std::size_t j = 0; j < n(); ++j) acc ^= (x[j] & o.z[j]) ^ (z[j] & o.x[j]);
    return acc == 0;
}

PauliString& PauliString::operator*=(const PauliString& o) {
    // (i^a X^x1 Z^z1)(i^b X^x2 Z^z2): commuting Z^z1 past X^x2 costs (-1)^(z1.x2)
    int cross = 0;
    for (std::size_t j = 0; j < n(); ++j) cross += (z[j] & o.x[j]);
    phase = (phase + o.phase + 2 * (cross & 1)) & 3;
    for (std::size_t j = 0; j < n(); ++j) {
        x[j] ^= o.x[j];
        z[j] ^= o.z[j];
    }
    return *this;
}

namespace {

/// Local Hadamard on qubit v: swaps the X/Z roles; Y picks up a sign.
void apply_h(PauliString& p, std::size_t v) {
    if (p.x[v] & p.z[v]) p.phase = (p.phase + 2) & 3;
    std::swap(p.x[v], p.z[v]);
}

/// Local phase gate on qubit v: X -> Y (= i X Z), Z fixed.
void apply_s(PauliString& p, std::size_t v) {
    if (p.x[v]) {
        p.phase = (p.phase + 1) & 3;
        p.z[v] ^= 1;
    }
}

}  // namespace

StabilizerTableau ideal_graph_from_edges(const std::vector<std::vector<std::uint8_t>>& adj) {
    std::size_t n = adj.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (adj[i].size() != n) throw ContractViolation("adjacency must be square");
        if (adj[i][i]) throw ContractViolation("adjacency must have zero diagonal");
        for (std::size_t j = 0; j < n; ++j)
            if (adj[i][j] != adj[j][i]) throw ContractViolation("adjacency must be symmetric");
    }
    StabilizerTableau t;
    t.gens.reserve(n);
    for (std::size_t v = 0; v < n; ++v) {
        PauliString g = PauliString::identity(n);
        g.x[v] = 1;
        for (std::size_t w = 0; w < n; ++w) g.z[w] = adj[v][w];
        t.gens.push_back(std::move(g));
    }
    return t;
}

namespace {

/// Projective measurement of Hermitian Pauli M (phase in {0,2}) with a forced
/// outcome bit (0 -> +M eigenspace).  Returns false when the outcome is
/// impossible (deterministic opposite value).
bool measure_forced(StabilizerTableau& tab, PauliString m, int outcome_bit) {
    m.phase = (m.phase + 2 * outcome_bit) & 3;  // target stabilizer (+1 eigenvalue of (-1)^bit M)
    std::size_t first = tab.gens.size();
    for (std::size_t i = 0; i < tab.gens.size(); ++i) {
        if (!tab.gens[i].commutes_with(m)) {
            first = i;
            break;
        }
    }
    if (first != tab.gens.size()) {
        for (std::size_t i = first + 1; i < tab.gens.size(); ++i)
            if (!tab.gens[i].commutes_with(m)) tab.gens[i] *= tab.gens[first];
        tab.gens[first] = std::move(m);
        return true;  // outcome was random; forcing is a projection choice
    }
    // Deterministic: express M over the generators via GF(2) elimination.
    std::size_t n = tab.n();
    std::vector<PauliString> work = tab.gens;
    PauliString target = m;  // includes the forced sign
    // reduce target's binary part to zero using the generators
    for (std::size_t col = 0; col < 2 * n; ++col) {
        auto bit = [&](const PauliString& p) -> std::uint8_t {
            return col < n ? p.x[col] : p.z[col - n];
        };
        std::size_t piv = work.size();
        for (std::size_t i = 0; i < work.size(); ++i)
            if (bit(work[i])) {
                piv = i;
                break;
            }
        if (piv == work.size()) continue;
        PauliString pivot = work[piv];
        work.erase(work.begin() + static_cast<std::ptrdiff_t>(piv));
        for (auto& w : work)
            if (bit(w)) w *= pivot;
        if (bit(target)) target *= pivot;
    }
    for (std::size_t j = 0; j < n; ++j)
        if (target.x[j] || target.z[j])
            throw InternalConsistencyError("measure_forced: operator outside stabilizer span");
    // target reduced to a scalar: +M is in the group iff that scalar is +1
    return target.phase == 0;
}

}  // namespace

GraphForm graph_canonical(StabilizerTableau tab) {
    std::size_t n = tab.n();
    GraphForm out;
    out.corrections.zc.assign(n, 0);
    out.corrections.xc.assign(n, 0);
    out.corrections.clifford.assign(n, "");
    auto& g = tab.gens;
    if (g.size() != n) throw ContractViolation("graph_canonical: generator count != n");

    // Stage 1: make the X block invertible (upper triangular), using local
    // Hadamards where a column has X support nowhere below the pivot row.
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = n;
        for (std::size_t i = k; i < n; ++i)
            if (g[i].x[k]) {
                piv = i;
                break;
            }
        if (piv == n) {
            std::size_t zrow = n;
            for (std::size_t i = k; i < n; ++i)
                if (g[i].z[k]) {
                    zrow = i;
                    break;
                }
            if (zrow == n)
                throw InternalConsistencyError("graph_canonical: column without X or Z support");
            for (auto& gen : g) apply_h(gen, k);
            out.corrections.clifford[k] = "h" + out.corrections.clifford[k];
            piv = zrow;
        }
        std::swap(g[k], g[piv]);
        for (std::size_t i = 0; i < n; ++i)
            if (i != k && g[i].x[k]) g[i] *= g[k];
    }
    // X block is now the identity; the Z block must be symmetric.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (g[i].z[j] != g[j].z[i])
                throw InternalConsistencyError("graph_canonical: asymmetric Z block");
    // Stage 2: clear the Z diagonal with local phase gates.
    for (std::size_t v = 0; v < n; ++v) {
        if (g[v].z[v]) {
            for (auto& gen : g) apply_s(gen, v);
            out.corrections.clifford[v] = "s" + out.corrections.clifford[v];
        }
    }
    // Stage 3: read off adjacency and signs.  A generator with sign -1 equals
    // the graph generator conjugated by Z_v on that vertex.
    out.adj.assign(n, std::vector<std::uint8_t>(n, 0));
    for (std::size_t v = 0; v < n; ++v) {
        if (g[v].phase == 1 || g[v].phase == 3)
            throw InternalConsistencyError("graph_canonical: non-Hermitian generator phase");
        for (std::size_t w = 0; w < n; ++w) out.adj[v][w] = g[v].z[w];
        out.corrections.zc[v] = (g[v].phase == 2) ? 1 : 0;
    }
    return out;
}

BellProjectionResult project_bell_ideal(const StabilizerTableau& tab, std::size_t c, std::size_t t,
                                        BellOutcome outcome) {
    if (c == t || c >= tab.n() || t >= tab.n())
        throw ContractViolation("project_bell_ideal: invalid qubit pair");
    StabilizerTableau work = tab;
    std::size_t n = tab.n();

    PauliString m1 = PauliString::identity(n);
    m1.x[c] = 1;
    m1.z[t] = 1;
    PauliString m2 = PauliString::identity(n);
    m2.z[c] = 1;
    m2.x[t] = 1;

    if (!measure_forced(work, m1, outcome.i))
        throw InternalConsistencyError("project_bell_ideal: impossible first outcome");
    if (!measure_forced(work, m2, outcome.j))
        throw InternalConsistencyError("project_bell_ideal: impossible second outcome");

    // Locate the two generators equal (up to sign) to M1, M2 and use them to
    // clear every other generator's support on {c, t}.
    auto restriction_bits = [&](const PauliString& p) {
        return std::array<std::uint8_t, 4>{p.x[c], p.z[c], p.x[t], p.z[t]};
    };
    std::size_t i1 = n, i2 = n;
    for (std::size_t i = 0; i < work.gens.size(); ++i) {
        auto r = restriction_bits(work.gens[i]);
        bool only_ct = true;
        for (std::size_t q = 0; q < n; ++q)
            if (q != c && q != t && (work.gens[i].x[q] || work.gens[i].z[q])) only_ct = false;
        if (!only_ct) continue;
        if (r == std::array<std::uint8_t, 4>{1, 0, 0, 1}) i1 = i;
        if (r == std::array<std::uint8_t, 4>{0, 1, 1, 0}) i2 = i;
    }
    if (i1 == n || i2 == n)
        throw InternalConsistencyError("project_bell_ideal: projector stabilizers not found");
    for (std::size_t i = 0; i < work.gens.size(); ++i) {
        if (i == i1 || i == i2) continue;
        auto& gen = work.gens[i];
        if (gen.x[c]) gen *= work.gens[i1];  // clears x_c (and z_t)
        if (gen.z[c]) gen *= work.gens[i2];  // clears z_c (and x_t)
        auto r = restriction_bits(gen);
        if (r != std::array<std::uint8_t, 4>{0, 0, 0, 0})
            throw InternalConsistencyError("project_bell_ideal: could not clear measured support");
    }

    // Drop the two projector generators and the measured qubits.
    BellProjectionResult res;
    std::vector<std::size_t> keep_q;
    for (std::size_t q = 0; q < n; ++q)
        if (q != c && q != t) keep_q.push_back(q);
    for (std::size_t i = 0; i < work.gens.size(); ++i) {
        if (i == i1 || i == i2) continue;
        PauliString gen = PauliString::identity(keep_q.size());
        gen.phase = work.gens[i].phase;
        for (std::size_t qi = 0; qi < keep_q.size(); ++qi) {
            gen.x[qi] = work.gens[i].x[keep_q[qi]];
            gen.z[qi] = work.gens[i].z[keep_q[qi]];
        }
        res.tableau.gens.push_back(std::move(gen));
    }
    GraphForm gf = graph_canonical(res.tableau);
    res.adj = std::move(gf.adj);
    res.corrections = std::move(gf.corrections);
    return res;
}

// ---------------------------------------------------------------------------
// Dense oracle
// ---------------------------------------------------------------------------

State graph_statevector(const std::vector<std::vector<std::uint8_t>>& adj) {
    std::size_t n = adj.size();
    if (n > 16) throw CapacityError("graph_statevector: too many qubits");
    std::size_t dim = std::size_t{1} << n;
    State s(dim, std::complex<double>(1.0 / std::sqrt(static_cast<double>(dim)), 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (adj[i][j])
                for (std::size_t b = 0; b < dim; ++b)
                    if (((b >> i) & 1) && ((b >> j) & 1)) s[b] = -s[b];
    return s;
}

namespace {

State bell_pair_state(BellOutcome o) {
    // |psi_00> = (|0,+> + |1,->)/sqrt2 = (|00> + |01> + |10> - |11>)/2,
    // |psi_ij> = (Z_first)^i (Z_second)^j |psi_00>.
    State b(4);
    b[0b00] = 0.5;
    b[0b01] = 0.5;  // bit order: index bit0 = first qubit, bit1 = second qubit
    b[0b10] = 0.5;
    b[0b11] = -0.5;
    for (std::size_t v = 0; v < 4; ++v) {
        int sign = 1;
        if (o.i && (v & 1)) sign = -sign;
        if (o.j && (v & 2)) sign = -sign;
        b[v] *= sign;
    }
    return b;
}

}  // namespace

State project_bell_statevector(const State& s, std::size_t n, std::size_t c, std::size_t t,
                               BellOutcome outcome) {
    State bell = bell_pair_state(outcome);
    std::size_t dim_rest = std::size_t{1} << (n - 2);
    State out(dim_rest, {0.0, 0.0});
    std::vector<std::size_t> keep_q;
    for (std::size_t q = 0; q < n; ++q)
        if (q != c && q != t) keep_q.push_back(q);
    for (std::size_t b = 0; b < s.size(); ++b) {
        std::size_t bc = (b >> c) & 1, bt = (b >> t) & 1;
        std::size_t rest = 0;
        for (std::size_t qi = 0; qi < keep_q.size(); ++qi) rest |= ((b >> keep_q[qi]) & 1) << qi;
        out[rest] += std::conj(bell[bc | (bt << 1)]) * s[b];
    }
    return out;
}

State corrected_graph_statevector(const BellProjectionResult& r) {
    std::size_t n = r.adj.size();
    State s = graph_statevector(r.adj);
    std::size_t dim = s.size();
    // apply recorded local Cliffords (rightmost character acts first)
    for (std::size_t v = 0; v < n; ++v) {
        const std::string& ops = r.corrections.clifford[v];
        for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
            State next(dim, {0.0, 0.0});
            if (*it == 'h') {
                double inv = 1.0 / std::sqrt(2.0);
                for (std::size_t b = 0; b < dim; ++b) {
                    std::size_t b0 = b & ~(std::size_t{1} << v);
                    std::size_t b1 = b | (std::size_t{1} << v);
                    if ((b >> v) & 1)
                        next[b] = inv * (s[b0] - s[b1]);
                    else
                        next[b] = inv * (s[b0] + s[b1]);
                }
            } else if (*it == 's') {
                for (std::size_t b = 0; b < dim; ++b)
                    next[b] = ((b >> v) & 1) ? std::complex<double>(0, 1) * s[b] : s[b];
            } else {
                throw ContractViolation("unknown local clifford op");
            }
            s = std::move(next);
        }
    }
    for (std::size_t v = 0; v < n; ++v) {
        if (r.corrections.xc[v]) {
            State next(dim);
            for (std::size_t b = 0; b < dim; ++b) next[b ^ (std::size_t{1} << v)] = s[b];
            s = std::move(next);
        }
        if (r.corrections.zc[v])
            for (std::size_t b = 0; b < dim; ++b)
                if ((b >> v) & 1) s[b] = -s[b];
    }
    return s;
}

double statevector_fidelity(const State& a, const State& b) {
    if (a.size() != b.size()) throw ContractViolation("fidelity: dimension mismatch");
    std::complex<double> ip(0.0, 0.0);
    double na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ip += std::conj(a[i]) * b[i];
        na += std::norm(a[i]);
        nb += std::norm(b[i]);
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return std::abs(ip) / std::sqrt(na * nb);
}

}  // namespace gkp::ideal
