#pragma once

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "gkplab/errors.hpp"

namespace gkp::ideal {

/// Pauli operator i^phase * prod_j X_j^{x[j]} Z_j^{z[j]} (phase mod 4).
struct PauliString {
    std::vector<std::uint8_t> x;
    std::vector<std::uint8_t> z;
    int phase = 0;

    static PauliString identity(std::size_t n) {
        PauliString p;
        p.x.assign(n, 0);
        p.z.assign(n, 0);
        return p;
    }
    std::size_t n() const { return x.size(); }
    bool commutes_with(const PauliString& o) const;
    PauliString& operator*=(const PauliString& o);
};

/// Generator list of a stabilizer state (count == qubit count, mutually
/// commuting, independent).
struct StabilizerTableau {
    std::vector<PauliString> gens;
    std::size_t n() const { return gens.empty() ? 0 : gens[0].n(); }
};

/// Graph-state tableau: X_v prod_{w in N(v)} Z_w per vertex.
StabilizerTableau ideal_graph_from_edges(const std::vector<std::vector<std::uint8_t>>& adj);

/// Outcome pair of a two-qubit Bell-type projection.
struct BellOutcome {
    int i = 0;
    int j = 0;
};

/// Per-vertex local operations relating a projected stabilizer state to the
/// canonical graph state over the reported topology:
/// state = (prod_v Z_v^{zc} X_v^{xc} C_v) |G>, where C_v is the recorded
/// local-Clifford string ('h'/'s' applications, usually empty here).
struct LocalCorrections {
    std::vector<std::uint8_t> zc;
    std::vector<std::uint8_t> xc;
    std::vector<std::string> clifford;  // e.g. "", "h", "sh" (applied right-to-left)
};

struct BellProjectionResult {
    StabilizerTableau tableau;                      // on the surviving qubits
    std::vector<std::vector<std::uint8_t>> adj;     // fused topology
    LocalCorrections corrections;
};

/// Forces the two commuting stabilizers of the rotated Bell projector
/// ((-1)^i X_c Z_t and (-1)^j Z_c X_t) onto qubits (c, t), removes those
/// qubits, and reduces the remainder to graph-canonical form.
BellProjectionResult project_bell_ideal(const StabilizerTableau& tab, std::size_t c, std::size_t t,
                                        BellOutcome outcome);

/// Graph canonicalization of an arbitrary stabilizer tableau: returns the
/// adjacency and local corrections such that the state equals the corrected
/// graph state.
struct GraphForm {
    std::vector<std::vector<std::uint8_t>> adj;
    LocalCorrections corrections;
};
GraphForm graph_canonical(StabilizerTableau tab);

// ---------------------------------------------------------------------------
// Dense statevector oracle (n <= 6 qubits) used to validate the tableau path.
// ---------------------------------------------------------------------------

using State = std::vector<std::complex<double>>;

State graph_statevector(const std::vector<std::vector<std::uint8_t>>& adj);

/// Applies the projector |psi_ij><psi_ij| on qubits (c, t) of `s` and traces
/// them out; returns the unnormalized remainder (norm^2 = projection weight).
State project_bell_statevector(const State& s, std::size_t n, std::size_t c, std::size_t t,
                               BellOutcome outcome);

/// Builds the corrected graph state a BellProjectionResult describes.
State corrected_graph_statevector(const BellProjectionResult& r);

/// |<a|b>| / (|a||b|) with global phase removed.
double statevector_fidelity(const State& a, const State& b);

}  // namespace gkp::ideal
