#pragma once
// Declarative protocol scripts: JSON parsing, execution (exact scalars when
// every outcome is forced, sampled doubles otherwise), parameter sweeps with a
// deterministic ordered reduction, and distribution emission.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gkplab/protocols.hpp"
#include "gkplab/serialize.hpp"
#include "gkplab/states.hpp"

namespace gkp::script {

using protocols::FusionVariant;
using states::Quadrature;

struct EnvSpec {
    double l = 1.0;
    double m = 1.0;
    double mu_q = 0.0;  // sqrt(pi) units
    double mu_p = 0.0;
};

struct Step {
    enum class Kind { NewQubit, Cz, Steane, Fuse, Measure, Emit };
    Kind kind = Kind::NewQubit;

    // new_qubit
    states::IdealLogical label = states::IdealLogical::XPlus;
    EnvSpec env;
    int id = -1;  // external vertex id; -1 = next unused

    // cz
    int i = 0, j = 0;

    // steane / measure (vertex, quad, forced_y, nu) and steane extras
    int vertex = 0;
    Quadrature quad = Quadrature::P;
    double l_a = 1.0, m_a = 1.0;
    std::optional<double> gain;
    double nu = 0.0;
    std::optional<double> forced_y;  // sqrt(pi) units

    // fuse
    FusionVariant variant = FusionVariant::A;
    int control = 0, target = 0;
    double nu_control = 0.0, nu_target = 0.0;
    std::optional<double> forced_y1, forced_y2;

    // emit
    std::string what;  // state | branches | covariance | records
};

struct SweepSpec {
    std::string parameter;       // sigma2 | m_B | nu
    std::vector<double> values;  // one CSV row per value
    std::string metric;          // avg_error | p_succ | tradeoff
};

struct ProtocolScript {
    double sigma2 = 0.1;
    unsigned long long seed = 0;
    std::string output;  // output directory for emitted files ("" = none)
    std::vector<Step> steps;
    std::optional<SweepSpec> sweep;
};

/// Parses and validates a script; throws ContractViolation with step-indexed
/// diagnostics on malformed input or unresolvable vertex references.
ProtocolScript parse_script(const serialize::json& j, const std::string& origin = "script");
ProtocolScript parse_script_file(const std::string& path);

struct RunOverrides {
    std::optional<unsigned long long> seed;
    std::optional<double> sigma2;
    std::optional<FusionVariant> variant;  // replaces every fuse step's variant
    std::optional<double> nu;              // replaces every post-selection window
    std::optional<std::string> out_dir;    // replaces the script output directory
    std::string format = "csv";            // csv | json, for emitted tables
    int max_retries = 64;  // per-step resampling budget under post-selection
};

struct RunReport {
    bool accepted = true;  // false = post-selection exhausted (CLI exit 2)
    int attempts = 1;      // total outcome draws including rejected ones
    bool exact = false;    // ran on the exact scalar type (all outcomes forced)
    double sigma2 = 0.1;
    std::size_t modes = 0;
    std::vector<int> ids;
    std::vector<std::string> labels;
    std::vector<std::vector<double>> covariance;              // sigma^2 units
    std::vector<std::vector<std::string>> covariance_exact;   // empty when !exact
    struct BranchRow {
        std::vector<int> tags;
        double weight = 0.0;
        std::vector<double> mean;  // sqrt(pi) units
    };
    std::vector<BranchRow> branches;
    std::vector<protocols::MeasurementRecord> records;
    std::vector<double> record_nu;  // post-selection window per record
    double aggregate_error = 0.0;
    double success_probability = 1.0;
    double dropped_weight = 0.0;
    serialize::json state;  // full final-state JSON (null for zero modes)
    std::vector<std::pair<std::string, std::string>> emitted;  // (filename, content)

    serialize::json to_json() const;
};

/// Executes the step list.  Uses exact quadratic-rational scalars when every
/// measurement outcome is forced; otherwise samples outcomes from the seeded
/// generator, resampling a post-selection-rejected step up to
/// `overrides.max_retries` times.  Emitted files are written under the output
/// directory when one is configured.  The branch-weight column of the final
/// state must sum to 1 within 1e-10 or an InternalConsistencyError is raised.
RunReport run_protocol_script(const ProtocolScript& script, const RunOverrides& overrides = {});
RunReport run_protocol_script_file(const std::string& path, const RunOverrides& overrides = {});

/// Runs the script's sweep block: one CSV row per parameter value with the
/// metric column(s), per fusion variant when the script contains a fusion.
/// Rows are computed by a worker pool (capped by GKPLAB_THREADS) and reduced
/// in deterministic parameter order.
std::string sweep_emit(const ProtocolScript& script, const RunOverrides& overrides = {});

/// Two-column CSV (x, pdf) of the homodyne outcome density on a uniform grid
/// of `points` samples over [-xmax, xmax].
std::string emit_distribution(const states::SingleQubitState& state, Quadrature quad, double xmax,
                              std::size_t points);

}  // namespace gkp::script
