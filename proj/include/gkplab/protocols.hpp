#pragma once
// Composite procedures on GKP graph states: ancilla-coupled quadrature error
// correction on a vertex (Steane style), centered-mod feedback, comb branch
// statistics and post-selection, and the three two-mode fusion circuits with
// feedback restricted to second graph neighbors of the measured vertices.
//
// Unit conventions follow the graph engine: outcomes, means, residues and
// tooth spacings handed to/returned from the state-mutating operations are in
// sqrt(pi) units; the floating-point statistics helpers at the top of this
// header work in absolute quadrature units (their spacings are typically
// sqrt(pi) itself).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gkplab/constants.hpp"
#include "gkplab/errors.hpp"
#include "gkplab/exact.hpp"
#include "gkplab/graph.hpp"
#include "gkplab/ideal.hpp"
#include "gkplab/la.hpp"
#include "gkplab/rng.hpp"
#include "gkplab/states.hpp"

namespace gkp::protocols {

using graph::GkpGraphState;
using states::Quadrature;

// ---------------------------------------------------------------------------
// Outcome statistics (floating point; definitions in protocols.cpp).
// ---------------------------------------------------------------------------

/// Parameters of one comb-structured homodyne measurement: marginal variance
/// of the measured variable and conditional variance of its conjugate given
/// every other error variable (both in sigma^2 units), plus the comb tooth
/// spacing in absolute quadrature units.
struct MeasurementDescriptor {
    double v_mm = 1.0;
    double cond_conj = 1.0;
    double spacing = kSqrtPi;
};

/// Descriptor of the single-qubit ancilla-coupled correction measurement with
/// ancilla envelope weights (l_a, m_a) and data weights (l_b, m_b):
/// marginal m_a + m_b, conjugate conditional l_a l_b / (l_a + l_b).
MeasurementDescriptor steane_descriptor(double l_a, double l_b, double m_a, double m_b);

/// True while the outcome comb is still resolvable: the residue spread
/// sqrt(v_mm sigma^2) stays below half the tooth spacing.
bool descriptor_regime_ok(const MeasurementDescriptor& d, double sigma2);

/// Outcome density P_Y(y) = sum_n P_N[n] N(y; n*spacing, v_mm sigma^2 / 2)
/// with P_N[n] ∝ exp(-sigma^2 cond_conj (n*spacing)^2), normalized over n.
/// `y` in absolute units; integrates to 1 over the whole line.
double comb_outcome_pdf(const MeasurementDescriptor& d, double sigma2, double y);

/// comb_outcome_pdf for the single-qubit correction measurement.
double steane_outcome_pdf(double l_a, double l_b, double m_a, double m_b, double sigma2,
                          double y);

/// Unnormalized weights of the two comb teeth bracketing |y|:
/// c_n = P_N[n] P_Q(|y| - n*spacing), n = floor(|y| / spacing).
struct BranchWeights {
    long long n = 0;
    double c_n = 0.0;
    double c_n1 = 0.0;
    double spacing = kSqrtPi;
};

BranchWeights branch_weights(const MeasurementDescriptor& d, double sigma2, double y);

/// Probability that the true tooth is the farther of the bracketing pair:
/// c_{n+1}/(c_n + c_{n+1}) when |y| - n*spacing < spacing/2, else
/// c_n/(c_n + c_{n+1}).  The half-cell tie goes to the second case.
double branch_error_probability(const BranchWeights& w, double y);

/// y reduced to p_c in [-sqrt(pi)/2, sqrt(pi)/2) with y = p_c + z*sqrt(pi).
struct CenteredMod {
    double p_c = 0.0;
    long long z = 0;
};
CenteredMod centered_mod_root_pi(double y);

/// Probability that an outcome lands in the accepted windows
/// I0 = { |y| <= spacing/2 - nu } and I1 = { spacing/2 + nu <= |y| <= spacing }
/// for exclusion half-width nu in [0, spacing/2).  Adaptive quadrature,
/// absolute tolerance 1e-8.
double postselect_success_probability(const MeasurementDescriptor& d, double sigma2, double nu);
double postselect_success_probability(double l_a, double l_b, double m_a, double m_b,
                                      double sigma2, double nu);

/// Mean of branch_error_probability over the accepted windows, normalized by
/// the success probability.
double average_error_probability(const MeasurementDescriptor& d, double sigma2, double nu);
double average_error_probability(double l_a, double l_b, double m_a, double m_b, double sigma2,
                                 double nu);

/// 1 - prod_m (1 - average_error_probability(m)) over a measurement list.
double average_total_error(const std::vector<MeasurementDescriptor>& ms, double sigma2,
                           double nu);

/// BFS hop distances from `sources` over a 0/1 adjacency; -1 = unreachable.
std::vector<int> bfs_distances(const graph::Adjacency& adj,
                               const std::vector<std::size_t>& sources);

// ---------------------------------------------------------------------------
// Measurement records
// ---------------------------------------------------------------------------

/// Observational record of one comb homodyne inside a protocol step.  Outcome
/// quantities are in sqrt(pi) units (the engine convention); `physical` holds
/// the absolute-unit descriptor feeding the error-statistics model.
struct MeasurementRecord {
    std::string step;  // "steane" | "fusion_m1" | "fusion_m2" | "homodyne"
    int mode_id = -1;
    int target_id = -1;  // corrected vertex (steane) or -1
    Quadrature quad = Quadrature::Q;
    bool forced = false;
    double y = 0.0;
    double spacing = 1.0;
    long long cell = 0;
    double residue = 0.0;
    double v_mm = 0.0;       // sigma^2 units, engine variable
    double cond_conj = 0.0;  // sigma^2 units, engine variable
    MeasurementDescriptor physical;
    bool regime_ok = true;
    bool postselect_rejected = false;
};

// ---------------------------------------------------------------------------
// Protocol configuration types
// ---------------------------------------------------------------------------

template <class T>
struct SteaneConfig {
    int vertex = 0;  // external id of the corrected data vertex
    Quadrature quad = Quadrature::P;
    T l_a = ScalarTraits<T>::one();  // fresh ancilla envelope weights
    T m_a = ScalarTraits<T>::one();
    std::optional<T> gain;  // feedback gain override on the data vertex;
                            // default keeps the exact regression coefficient
                            // (the variance-optimal m_B/(m_A+m_B) rule)
    double nu = 0.0;        // post-selection half-window, absolute units
};

enum class FusionVariant { A, B, C };

const char* to_string(FusionVariant v);
FusionVariant fusion_variant_from_string(const std::string& s);

template <class T>
struct FusionConfig {
    FusionVariant variant = FusionVariant::A;
    int control = 0;  // external id: vertex C
    int target = 0;   // external id: vertex T
    double nu_control = 0.0;  // post-selection half-windows, absolute units
    double nu_target = 0.0;
};

struct FusionRecords {
    MeasurementRecord m1, m2;
    bool accepted = true;
};

// ---------------------------------------------------------------------------
// Implementation helpers
// ---------------------------------------------------------------------------

namespace detail {

inline bool postselect_reject(double residue_units, double nu_abs) {
    if (!(nu_abs > 0.0)) return false;
    return std::abs(residue_units) * kSqrtPi >= kSqrtPi / 2.0 - nu_abs;
}

inline void validate_nu(double nu_abs) {
    if (!(nu_abs >= 0.0) || nu_abs >= kSqrtPi / 2.0)
        throw ContractViolation("post-selection half-window must lie in [0, sqrt(pi)/2)");
}

/// Draws or adopts a homodyne outcome for mode index `mode` of `st`.
template <class T>
T resolve_outcome(const GkpGraphState<T>& st, std::size_t mode, Quadrature quad,
                  const std::optional<T>& forced, Rng* rng) {
    if (forced) return *forced;
    if constexpr (ScalarTraits<T>::exact) {
        throw ContractViolation("sampled outcomes require the floating-point scalar type");
    } else {
        if (rng == nullptr) throw ContractViolation("sampled outcome requested without an rng");
        return graph::sample_homodyne_outcome(st, mode, quad, ScalarTraits<T>::one(), *rng);
    }
}

/// Applies the feedback displacement -K * residue over the kept modes,
/// masked to vertices within graph distance 2 of the sources on the
/// pre-measurement topology.  K components outside the mask must vanish.
template <class T>
void apply_masked_feedback(GkpGraphState<T>& st, const graph::HomodyneRecord<T>& rec,
                           const std::vector<int>& pre_ids, const std::vector<int>& pre_dist) {
    using S = ScalarTraits<T>;
    const std::size_t m = st.n();
    if (rec.feedback_gain.size() != 2 * m)
        throw InternalConsistencyError("feedback gain length mismatch");
    auto dist_of = [&](int id) {
        for (std::size_t k = 0; k < pre_ids.size(); ++k)
            if (pre_ids[k] == id) return pre_dist[k];
        throw InternalConsistencyError("feedback vertex missing from pre-measurement graph");
    };
    for (std::size_t v = 0; v < m; ++v) {
        const T du = -rec.feedback_gain[v] * rec.residue;
        const T dv = -rec.feedback_gain[m + v] * rec.residue;
        const int d = dist_of(st.ids[v]);
        const bool in_range = d >= 0 && d <= 2;
        if (!in_range) {
            bool leak = false;
            if constexpr (S::exact)
                leak = !S::is_zero(rec.feedback_gain[v]) || !S::is_zero(rec.feedback_gain[m + v]);
            else
                leak = std::abs(S::to_d(rec.feedback_gain[v])) > 1e-12 ||
                       std::abs(S::to_d(rec.feedback_gain[m + v])) > 1e-12;
            if (leak)
                throw InternalConsistencyError(
                    "conditioning produced feedback beyond the second neighbors");
            continue;
        }
        if (S::is_zero(du) && S::is_zero(dv)) continue;
        graph::apply_displacement(st, v, du, dv);
    }
}

template <class T>
MeasurementRecord make_record(const graph::HomodyneRecord<T>& rec, std::string step,
                              bool forced, double sigma2, double physical_scale) {
    using S = ScalarTraits<T>;
    MeasurementRecord r;
    r.step = std::move(step);
    r.mode_id = rec.mode_id;
    r.quad = rec.quad;
    r.forced = forced;
    r.y = S::to_d(rec.y);
    r.spacing = S::to_d(rec.spacing);
    r.cell = rec.cell;
    r.residue = S::to_d(rec.residue);
    r.v_mm = rec.v_mm;
    r.cond_conj = rec.cond_conj;
    r.physical = MeasurementDescriptor{rec.v_mm * physical_scale,
                                       rec.cond_conj / physical_scale,
                                       S::to_d(rec.spacing) * kSqrtPi};
    r.regime_ok = descriptor_regime_ok(r.physical, sigma2);
    r.postselect_rejected = rec.postselect_rejected;
    return r;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Steane error correction on a graph vertex
// ---------------------------------------------------------------------------

/// Attaches a fresh ancilla to `cfg.vertex`, couples it with the exact C_X map
/// (p correction: ancilla |0~> as control; q correction: data as control onto
/// a |+~> ancilla), homodynes the ancilla on `cfg.quad` with tooth spacing
/// sqrt(pi), applies the centered-mod feedback displacement to every vertex
/// within graph distance 2 of the target, renormalizes and prunes.
///
/// The outcome is `forced_y` (sqrt(pi) units) when given, otherwise sampled
/// from the outcome mixture via `rng`.  If the outcome falls inside the
/// post-selection exclusion band the state is left untouched and the returned
/// record has postselect_rejected set.
template <class T>
MeasurementRecord steane_correct_vertex(GkpGraphState<T>& st, const SteaneConfig<T>& cfg,
                                        std::optional<T> forced_y = std::nullopt,
                                        Rng* rng = nullptr,
                                        double prune_eps = kBranchPruneEpsilon) {
    using S = ScalarTraits<T>;
    detail::validate_nu(cfg.nu);
    const std::size_t data = st.index_of(cfg.vertex);
    if (st.n() < 1) throw ContractViolation("state has no vertices");

    const std::vector<int> pre_ids = st.ids;
    const std::vector<int> pre_dist = bfs_distances(st.adjacency, {data});

    GkpGraphState<T> work = st;
    int anc_id = 0;
    for (int id : work.ids) anc_id = std::max(anc_id, id + 1);
    const auto env = cfg.quad == Quadrature::P ? graph::zero_env<T>(cfg.l_a, cfg.m_a)
                                               : graph::plus_env<T>(cfg.l_a, cfg.m_a);
    graph::add_vertex(work, env, anc_id);
    const std::size_t anc = work.n() - 1;
    if (cfg.quad == Quadrature::P)
        graph::apply_cx(work, anc, data);
    else
        graph::apply_cx(work, data, anc);

    const T y = detail::resolve_outcome(work, anc, cfg.quad, forced_y, rng);
    const auto [cell, residue] = graph::detail::centered_cell(y, S::one());
    if (detail::postselect_reject(S::to_d(residue), cfg.nu)) {
        MeasurementRecord r;
        r.step = "steane";
        r.mode_id = anc_id;
        r.target_id = cfg.vertex;
        r.quad = cfg.quad;
        r.forced = forced_y.has_value();
        r.y = S::to_d(y);
        r.spacing = 1.0;
        r.cell = cell;
        r.residue = S::to_d(residue);
        r.postselect_rejected = true;
        return r;
    }

    auto rec = graph::measure_homodyne(work, anc, cfg.quad, y, S::one(), prune_eps);
    if (cfg.gain) {
        const std::size_t dd = work.index_of(cfg.vertex);
        if (cfg.quad == Quadrature::P)
            rec.feedback_gain[work.n() + dd] = -*cfg.gain;
        else
            rec.feedback_gain[dd] = *cfg.gain;
    }
    detail::apply_masked_feedback(work, rec, pre_ids, pre_dist);
    work.graph_form = true;  // the C_X is undone by the measurement + feedback

    MeasurementRecord r = detail::make_record(rec, "steane", forced_y.has_value(), st.sigma2, 1.0);
    r.target_id = cfg.vertex;
    st = std::move(work);
    return r;
}

// ---------------------------------------------------------------------------
// Fusion
// ---------------------------------------------------------------------------

/// Merges the graph components of vertices C and T by the variant's two-mode
/// circuit followed by two comb homodynes (spacing sqrt(pi)):
///   A: inverse Fourier on C, C_X(C->T), measure p_C then q_T;
///   B: inverse Fourier on T, C_X(C->T), measure p_C then q_T;
///   C: Fourier on T, balanced beamsplitter (C,T), measure q on arm C then
///      p on arm T (dual homodyne).
/// Each measurement is followed by the centered-mod feedback displacement on
/// vertices within graph distance 2 of {C, T} (pre-fusion topology).  The
/// ideal layer is updated by the rotated Bell projection at the outcome-cell
/// parities; the fused adjacency is adopted and the returned local Pauli
/// corrections are folded into the per-vertex flags.
///
/// Post-selection applies per measured mode; a rejected outcome leaves the
/// input state untouched (accepted = false in the result).
template <class T>
FusionRecords fuse(GkpGraphState<T>& st, const FusionConfig<T>& cfg,
                   std::optional<T> forced_y1 = std::nullopt,
                   std::optional<T> forced_y2 = std::nullopt, Rng* rng = nullptr,
                   double prune_eps = kBranchPruneEpsilon) {
    using S = ScalarTraits<T>;
    detail::validate_nu(cfg.nu_control);
    detail::validate_nu(cfg.nu_target);
    if (!st.graph_form)
        throw ContractViolation("fusion requires a graph-form state");
    if (cfg.control == cfg.target)
        throw ContractViolation("fusion requires distinct vertices");
    if (st.n() < 3)
        throw ContractViolation("fusion needs at least one surviving vertex");
    const std::size_t ci = st.index_of(cfg.control);
    const std::size_t ti = st.index_of(cfg.target);

    const ideal::StabilizerTableau tab = ideal::ideal_graph_from_edges(st.adjacency);
    const std::vector<int> pre_ids = st.ids;
    const std::vector<int> pre_dist = bfs_distances(st.adjacency, {ci, ti});
    const std::uint8_t zf_c = st.z_flag[ci], xf_c = st.x_flag[ci];
    const std::uint8_t zf_t = st.z_flag[ti], xf_t = st.x_flag[ti];

    GkpGraphState<T> work = st;
    Quadrature quad1 = Quadrature::P, quad2 = Quadrature::Q;
    switch (cfg.variant) {
        case FusionVariant::A:
            graph::apply_fourier(work, ci, -1);
            graph::apply_cx(work, ci, ti);
            break;
        case FusionVariant::B:
            graph::apply_fourier(work, ti, -1);
            graph::apply_cx(work, ci, ti);
            break;
        case FusionVariant::C:
            graph::apply_fourier(work, ti, +1);
            graph::apply_beamsplitter(work, ci, ti);
            quad1 = Quadrature::Q;
            quad2 = Quadrature::P;
            break;
    }

    FusionRecords out;

    // first measurement: vertex C (arm C for the beamsplitter variant)
    const T y1 = detail::resolve_outcome(work, ci, quad1, forced_y1, rng);
    {
        const auto [cell0, res0] = graph::detail::centered_cell(y1, S::one());
        if (detail::postselect_reject(S::to_d(res0), cfg.nu_control)) {
            out.m1.step = "fusion_m1";
            out.m1.mode_id = cfg.control;
            out.m1.quad = quad1;
            out.m1.forced = forced_y1.has_value();
            out.m1.y = S::to_d(y1);
            out.m1.cell = cell0;
            out.m1.residue = S::to_d(res0);
            out.m1.postselect_rejected = true;
            out.accepted = false;
            return out;
        }
    }
    const auto rec1 = graph::measure_homodyne(work, ci, quad1, y1, S::one(), prune_eps);
    detail::apply_masked_feedback(work, rec1, pre_ids, pre_dist);

    // second measurement: vertex T
    const std::size_t ti2 = work.index_of(cfg.target);
    const T y2 = detail::resolve_outcome(work, ti2, quad2, forced_y2, rng);
    {
        const auto [cell0, res0] = graph::detail::centered_cell(y2, S::one());
        if (detail::postselect_reject(S::to_d(res0), cfg.nu_target)) {
            out.m2.step = "fusion_m2";
            out.m2.mode_id = cfg.target;
            out.m2.quad = quad2;
            out.m2.forced = forced_y2.has_value();
            out.m2.y = S::to_d(y2);
            out.m2.cell = cell0;
            out.m2.residue = S::to_d(res0);
            out.m2.postselect_rejected = true;
            out.accepted = false;
            return out;
        }
    }
    const auto rec2 = graph::measure_homodyne(work, ti2, quad2, y2, S::one(), prune_eps);
    detail::apply_masked_feedback(work, rec2, pre_ids, pre_dist);

    // ideal layer: rotated Bell projection at the outcome-cell parities.  For
    // the beamsplitter variant the parities live on the physical tooth lattice
    // of the unit-coefficient forms, i.e. on cells of sqrt(2) * arm outcome.
    auto cell_parity = [](long long z) { return static_cast<int>(((z % 2) + 2) % 2); };
    long long zc1 = rec1.cell, zc2 = rec2.cell;
    if (cfg.variant == FusionVariant::C) {
        const T sqrt2 = S::from_int(2) * S::inv_sqrt2();
        zc1 = graph::detail::centered_cell(sqrt2 * y1, S::one()).first;
        zc2 = graph::detail::centered_cell(sqrt2 * y2, S::one()).first;
    }
    const int p1 = cell_parity(zc1), p2 = cell_parity(zc2);
    // Measured comb operators pull back to X_c Z_t / Z_c X_t; which
    // measurement carries which depends on where the Fourier sits.
    int i_bit = 0, j_bit = 0;
    if (cfg.variant == FusionVariant::B) {
        i_bit = p1;
        j_bit = p2;
    } else {
        i_bit = p2;
        j_bit = p1;
    }
    // Existing local corrections on C/T re-interpret the measured parities.
    i_bit ^= static_cast<int>(zf_c ^ xf_t);
    j_bit ^= static_cast<int>(xf_c ^ zf_t);

    const auto bell = ideal::project_bell_ideal(tab, ci, ti, ideal::BellOutcome{i_bit, j_bit});
    for (const auto& cliff : bell.corrections.clifford)
        if (!cliff.empty())
            throw InternalConsistencyError(
                "fusion produced a non-Pauli local correction on the ideal layer");
    if (bell.adj.size() != work.n())
        throw InternalConsistencyError("fused topology size mismatch");
    work.adjacency = bell.adj;
    for (std::size_t v = 0; v < work.n(); ++v) {
        work.z_flag[v] ^= bell.corrections.zc[v];
        work.x_flag[v] ^= bell.corrections.xc[v];
    }
    work.graph_form = true;

    out.m1 = detail::make_record(rec1, "fusion_m1", forced_y1.has_value(), st.sigma2,
                                 cfg.variant == FusionVariant::C ? 2.0 : 1.0);
    out.m2 = detail::make_record(rec2, "fusion_m2", forced_y2.has_value(), st.sigma2,
                                 cfg.variant == FusionVariant::C ? 2.0 : 1.0);
    out.accepted = true;
    st = std::move(work);
    return out;
}

// ---------------------------------------------------------------------------
// Plain comb homodyne of one vertex (no feedback, no ideal-layer update
// beyond removing the vertex): the protocol-script "measure" step.
// ---------------------------------------------------------------------------

template <class T>
MeasurementRecord measure_vertex(GkpGraphState<T>& st, int vertex, Quadrature quad,
                                 std::optional<T> forced_y = std::nullopt, Rng* rng = nullptr,
                                 double prune_eps = kBranchPruneEpsilon) {
    using S = ScalarTraits<T>;
    const std::size_t mode = st.index_of(vertex);
    const T y = detail::resolve_outcome(st, mode, quad, forced_y, rng);
    const auto rec = graph::measure_homodyne(st, mode, quad, y, S::one(), prune_eps);
    return detail::make_record(rec, "homodyne", forced_y.has_value(), st.sigma2, 1.0);
}

// ---------------------------------------------------------------------------
// The bundled protocol: two 3-star trees, one corrected vertex, one fusion.
// ---------------------------------------------------------------------------

template <class T>
struct TreeRun {
    GkpGraphState<T> state;
    std::vector<MeasurementRecord> records;
    std::vector<MeasurementDescriptor> error_model;  // absolute-unit descriptors
    bool accepted = true;
};

/// Builds two 3-vertex stars (centers 0 and 3, leaves {1,2} and {4,5}, all
/// fresh |+~> with unit envelope weights), runs p-type correction on vertex 0,
/// then fuses C = vertex 2 into T = vertex 3 with the requested variant.  The
/// surviving vertices are [0, 1, 4, 5] in that order.  `forced` supplies the
/// three outcomes (w, y1, y2) in sqrt(pi) units; otherwise outcomes are
/// sampled.  `nu` applies to all three measurements.
template <class T>
TreeRun<T> run_tree_protocol(FusionVariant variant, double sigma2,
                             std::optional<std::array<T, 3>> forced = std::nullopt,
                             double nu = 0.0, Rng* rng = nullptr,
                             double prune_eps = kBranchPruneEpsilon) {
    using S = ScalarTraits<T>;
    const T one = S::one();
    std::vector<graph::VertexEnv<T>> envs(6, graph::plus_env<T>(one, one));
    graph::Adjacency adj(6, std::vector<std::uint8_t>(6, 0));
    const std::pair<std::size_t, std::size_t> edges[] = {{0, 1}, {0, 2}, {3, 4}, {3, 5}};
    for (auto [a, b] : edges) {
        adj[a][b] = 1;
        adj[b][a] = 1;
    }
    TreeRun<T> run{graph::build_graph_state(envs, adj, sigma2), {}, {}, true};

    SteaneConfig<T> ec;
    ec.vertex = 0;
    ec.quad = Quadrature::P;
    ec.l_a = one;
    ec.m_a = one;
    ec.nu = nu;
    auto rec_ec = steane_correct_vertex(run.state, ec,
                                        forced ? std::optional<T>((*forced)[0]) : std::nullopt,
                                        rng, prune_eps);
    run.records.push_back(rec_ec);
    if (rec_ec.postselect_rejected) {
        run.accepted = false;
        return run;
    }

    FusionConfig<T> fc;
    fc.variant = variant;
    fc.control = 2;
    fc.target = 3;
    fc.nu_control = nu;
    fc.nu_target = nu;
    auto recs = fuse(run.state, fc, forced ? std::optional<T>((*forced)[1]) : std::nullopt,
                     forced ? std::optional<T>((*forced)[2]) : std::nullopt, rng, prune_eps);
    run.records.push_back(recs.m1);
    run.records.push_back(recs.m2);
    if (!recs.accepted) {
        run.accepted = false;
        return run;
    }

    for (const auto& r : run.records) run.error_model.push_back(r.physical);
    return run;
}

}  // namespace gkp::protocols
