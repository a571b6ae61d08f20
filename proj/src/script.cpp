#include "gkplab/script.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "gkplab/constants.hpp"
#include "gkplab/errors.hpp"
#include "gkplab/exact.hpp"
#include "gkplab/graph.hpp"
#include "gkplab/rng.hpp"

namespace gkp::script {

namespace {

using graph::GkpGraphState;
using serialize::json;

// Every finite double is an exact dyadic rational; this conversion is lossless.
Rational exact_rational(double v) {
    if (!std::isfinite(v)) throw ContractViolation("outcome must be finite");
    return Rational(v);
}

const char* step_name(Step::Kind k) {
    switch (k) {
        case Step::Kind::NewQubit: return "new_qubit";
        case Step::Kind::Cz: return "cz";
        case Step::Kind::Steane: return "steane";
        case Step::Kind::Fuse: return "fuse";
        case Step::Kind::Measure: return "measure";
        case Step::Kind::Emit: return "emit";
    }
    return "?";
}

[[noreturn]] void step_error(std::size_t index, const Step& s, const std::string& msg) {
    throw ContractViolation("step " + std::to_string(index) + " (" + step_name(s.kind) +
                            "): " + msg);
}

Quadrature quad_from_json(const json& j, const char* key, Quadrature fallback) {
    if (!j.contains(key)) return fallback;
    const std::string s = j.at(key).get<std::string>();
    if (s == "q" || s == "Q") return Quadrature::Q;
    if (s == "p" || s == "P") return Quadrature::P;
    throw ContractViolation(std::string("unknown quadrature '") + s + "'");
}

std::optional<double> opt_number(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<double>();
}

template <class T>
struct ScalarOps {
    static T from_double(double v) {
        if constexpr (ScalarTraits<T>::exact)
            return Root2(exact_rational(v));
        else
            return v;
    }
};

// ---------------------------------------------------------------------------
// Execution engine
// ---------------------------------------------------------------------------

struct StepOutcome {
    std::vector<protocols::MeasurementRecord> records;
    std::vector<double> nus;
    int draws = 0;
    bool rejected = false;  // still rejected after the retry budget
};

template <class T>
class Executor {
  public:
    Executor(const ProtocolScript& sc, const RunOverrides& ov)
        : sc_(sc), ov_(ov), sigma2_(ov.sigma2.value_or(sc.sigma2)),
          rng_(ov.seed.value_or(sc.seed)) {}

    RunReport run() {
        RunReport rep;
        rep.exact = ScalarTraits<T>::exact;
        rep.sigma2 = sigma2_;
        for (std::size_t k = 0; k < sc_.steps.size(); ++k) {
            const Step& s = sc_.steps[k];
            try {
                if (!dispatch(k, s, rep)) break;  // post-selection exhausted
            } catch (const ContractViolation& e) {
                step_error(k, s, e.what());
            }
        }
        finalize(rep);
        return rep;
    }

  private:
    const ProtocolScript& sc_;
    const RunOverrides& ov_;
    double sigma2_;
    Rng rng_;
    std::optional<GkpGraphState<T>> st_;
    int next_id_ = 0;
    int attempts_ = 0;

    double nu_of(double script_nu) const { return ov_.nu.value_or(script_nu); }

    GkpGraphState<T>& state(std::size_t index, const Step& s) {
        if (!st_) step_error(index, s, "no qubits have been created yet");
        return *st_;
    }

    // Runs one measuring step up to the retry budget.  Forced outcomes are
    // deterministic, so a rejection is final for them.
    template <class F>
    bool with_retries(bool forced, F&& attempt) {
        const int budget = forced ? 1 : std::max(1, ov_.max_retries);
        for (int t = 0; t < budget; ++t) {
            ++attempts_;
            if (attempt()) return true;
        }
        return false;
    }

    bool dispatch(std::size_t k, const Step& s, RunReport& rep) {
        using S = ScalarOps<T>;
        switch (s.kind) {
            case Step::Kind::NewQubit: {
                const int id = s.id >= 0 ? s.id : next_id_;
                next_id_ = std::max(next_id_, id + 1);
                graph::VertexEnv<T> env{s.label, S::from_double(s.env.l),
                                        S::from_double(s.env.m), S::from_double(s.env.mu_q),
                                        S::from_double(s.env.mu_p)};
                if (!st_) {
                    st_ = graph::build_graph_state<T>({env}, graph::Adjacency{{0}}, sigma2_);
                    st_->ids[0] = id;
                } else {
                    graph::add_vertex(*st_, env, id);
                }
                return true;
            }
            case Step::Kind::Cz: {
                auto& st = state(k, s);
                graph::apply_cz(st, st.index_of(s.i), st.index_of(s.j));
                return true;
            }
            case Step::Kind::Steane: {
                auto& st = state(k, s);
                protocols::SteaneConfig<T> cfg;
                cfg.vertex = s.vertex;
                cfg.quad = s.quad;
                cfg.l_a = S::from_double(s.l_a);
                cfg.m_a = S::from_double(s.m_a);
                if (s.gain) cfg.gain = S::from_double(*s.gain);
                cfg.nu = nu_of(s.nu);
                std::optional<T> forced;
                if (s.forced_y) forced = S::from_double(*s.forced_y);
                protocols::MeasurementRecord rec;
                const bool ok = with_retries(forced.has_value(), [&] {
                    rec = protocols::steane_correct_vertex(st, cfg, forced, &rng_);
                    return !rec.postselect_rejected;
                });
                rep.records.push_back(rec);
                rep.record_nu.push_back(cfg.nu);
                if (!ok) rep.accepted = false;
                return ok;
            }
            case Step::Kind::Fuse: {
                auto& st = state(k, s);
                protocols::FusionConfig<T> cfg;
                cfg.variant = ov_.variant.value_or(s.variant);
                cfg.control = s.control;
                cfg.target = s.target;
                cfg.nu_control = nu_of(s.nu_control);
                cfg.nu_target = nu_of(s.nu_target);
                std::optional<T> y1, y2;
                if (s.forced_y1) y1 = S::from_double(*s.forced_y1);
                if (s.forced_y2) y2 = S::from_double(*s.forced_y2);
                protocols::FusionRecords recs;
                const bool forced = y1.has_value() && y2.has_value();
                const bool ok = with_retries(forced, [&] {
                    recs = protocols::fuse(st, cfg, y1, y2, &rng_);
                    return recs.accepted;
                });
                rep.records.push_back(recs.m1);
                rep.record_nu.push_back(cfg.nu_control);
                if (ok || !recs.m1.postselect_rejected) {
                    rep.records.push_back(recs.m2);
                    rep.record_nu.push_back(cfg.nu_target);
                }
                if (!ok) rep.accepted = false;
                return ok;
            }
            case Step::Kind::Measure: {
                auto& st = state(k, s);
                std::optional<T> forced;
                if (s.forced_y) forced = S::from_double(*s.forced_y);
                auto rec = protocols::measure_vertex(st, s.vertex, s.quad, forced, &rng_);
                rep.records.push_back(rec);
                rep.record_nu.push_back(0.0);
                return true;
            }
            case Step::Kind::Emit: {
                emit(k, s, rep);
                return true;
            }
        }
        return true;
    }

    void emit(std::size_t k, const Step& s, RunReport& rep) {
        const bool as_json = ov_.format == "json";
        std::string name = "step" + std::to_string(k) + "_" + s.what;
        std::ostringstream body;
        if (s.what == "state") {
            body << (st_ ? serialize::state_json(*st_) : json(nullptr)).dump(2) << "\n";
            name += ".json";
        } else if (s.what == "records") {
            json arr = json::array();
            for (const auto& r : rep.records) arr.push_back(serialize::record_json(r));
            body << arr.dump(2) << "\n";
            name += ".json";
        } else if (s.what == "branches") {
            auto& st = state(k, s);
            if (as_json) {
                body << serialize::state_json(st).at("branches").dump(2) << "\n";
                name += ".json";
            } else {
                std::vector<std::string> header{"tags", "weight"};
                for (std::size_t m = 0; m < st.n(); ++m)
                    header.push_back("mean_q" + std::to_string(st.ids[m]));
                for (std::size_t m = 0; m < st.n(); ++m)
                    header.push_back("mean_p" + std::to_string(st.ids[m]));
                serialize::write_csv(body, header, serialize::branch_rows(st));
                name += ".csv";
            }
        } else if (s.what == "covariance") {
            auto& st = state(k, s);
            if (as_json) {
                json j;
                j["covariance"] = serialize::state_json(st).at("covariance");
                if constexpr (ScalarTraits<T>::exact)
                    j["covariance_exact"] = serialize::state_json(st).at("covariance_exact");
                body << j.dump(2) << "\n";
                name += ".json";
            } else {
                const std::size_t d = 2 * st.n();
                std::vector<std::string> header;
                for (std::size_t m = 0; m < st.n(); ++m)
                    header.push_back("q" + std::to_string(st.ids[m]));
                for (std::size_t m = 0; m < st.n(); ++m)
                    header.push_back("p" + std::to_string(st.ids[m]));
                std::vector<std::vector<std::string>> rows(d);
                for (std::size_t r = 0; r < d; ++r)
                    for (std::size_t c = 0; c < d; ++c)
                        rows[r].push_back(
                            serialize::format_sig12(ScalarTraits<T>::to_d(st.cov(r, c))));
                serialize::write_csv(body, header, rows);
                name += ".csv";
            }
        } else {
            step_error(k, s, "unknown emit target '" + s.what + "'");
        }
        rep.emitted.emplace_back(name, body.str());
    }

    void finalize(RunReport& rep) {
        using ST = ScalarTraits<T>;
        rep.attempts = attempts_;
        if (st_) {
            const auto& st = *st_;
            const std::size_t n = st.n();
            rep.modes = n;
            rep.ids = st.ids;
            for (auto l : st.labels) rep.labels.push_back(states::to_string(l));
            rep.covariance.assign(2 * n, std::vector<double>(2 * n, 0.0));
            if (rep.exact)
                rep.covariance_exact.assign(2 * n, std::vector<std::string>(2 * n));
            for (std::size_t r = 0; r < 2 * n; ++r)
                for (std::size_t c = 0; c < 2 * n; ++c) {
                    rep.covariance[r][c] = ST::to_d(st.cov(r, c));
                    if (rep.exact) rep.covariance_exact[r][c] = serialize::scalar_string(st.cov(r, c));
                }
            double wsum = 0.0;
            for (const auto& b : st.branches) {
                RunReport::BranchRow row;
                row.tags = b.tags;
                row.weight = std::norm(b.amp);
                wsum += row.weight;
                for (std::size_t m = 0; m < 2 * n; ++m) row.mean.push_back(ST::to_d(b.mean[m]));
                rep.branches.push_back(std::move(row));
            }
            rep.dropped_weight = st.dropped_weight;
            rep.state = serialize::state_json(st);
            if (rep.accepted && std::abs(wsum - 1.0) > 1e-10)
                throw InternalConsistencyError("branch weights sum to " +
                                               serialize::format_sig12(wsum));
        }
        // aggregate error statistics over the recorded comb measurements
        double fail = 1.0, succ = 1.0;
        for (std::size_t r = 0; r < rep.records.size(); ++r) {
            const auto& rec = rep.records[r];
            if (rec.postselect_rejected) continue;
            const double nu = rep.record_nu[r];
            fail *= 1.0 - protocols::average_error_probability(rec.physical, sigma2_, nu);
            if (nu > 0.0)
                succ *= protocols::postselect_success_probability(rec.physical, sigma2_, nu);
        }
        rep.aggregate_error = 1.0 - fail;
        rep.success_probability = succ;
    }
};

bool all_outcomes_forced(const ProtocolScript& sc) {
    for (const auto& s : sc.steps) {
        switch (s.kind) {
            case Step::Kind::Steane:
            case Step::Kind::Measure:
                if (!s.forced_y) return false;
                break;
            case Step::Kind::Fuse:
                if (!s.forced_y1 || !s.forced_y2) return false;
                break;
            default:
                break;
        }
    }
    return true;
}

std::size_t worker_count(std::size_t tasks) {
    std::size_t n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    if (const char* env = std::getenv("GKPLAB_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 1)
            throw ContractViolation("GKPLAB_THREADS must be a positive integer");
        n = static_cast<std::size_t>(v);
    }
    return std::min(n, std::max<std::size_t>(tasks, 1));
}

}  // namespace

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

ProtocolScript parse_script(const json& j, const std::string& origin) {
    if (!j.is_object()) throw ContractViolation(origin + ": script root must be an object");
    ProtocolScript sc;
    sc.sigma2 = j.value("sigma2", 0.1);
    if (!(sc.sigma2 > 0.0)) throw ContractViolation(origin + ": sigma2 must be positive");
    sc.seed = j.value("seed", 0ull);
    sc.output = j.value("output", std::string{});

    // reference tracking: ids live from new_qubit to the measurement that
    // consumes them
    std::vector<int> live;
    auto require_live = [&](std::size_t k, const Step& s, int id) {
        for (int v : live)
            if (v == id) return;
        step_error(k, s, "vertex " + std::to_string(id) + " is not live at this step");
    };
    auto kill = [&](int id) { std::erase(live, id); };

    int next_id = 0;
    const json steps = j.value("steps", json::array());
    if (!steps.is_array()) throw ContractViolation(origin + ": steps must be an array");
    for (std::size_t k = 0; k < steps.size(); ++k) {
        const json& js = steps[k];
        Step s;
        if (!js.is_object() || !js.contains("op"))
            throw ContractViolation(origin + ": step " + std::to_string(k) +
                                    " must be an object with an \"op\" field");
        const std::string op = js.at("op").get<std::string>();
        try {
            if (op == "new_qubit") {
                s.kind = Step::Kind::NewQubit;
                s.label = states::ideal_from_string(js.value("label", std::string("x+")));
                if (js.contains("env")) {
                    const json& e = js.at("env");
                    s.env.l = e.value("l", 1.0);
                    s.env.m = e.value("m", 1.0);
                    s.env.mu_q = e.value("mu_q", 0.0);
                    s.env.mu_p = e.value("mu_p", 0.0);
                }
                s.id = js.value("id", -1);
                const int id = s.id >= 0 ? s.id : next_id;
                for (int v : live)
                    if (v == id) step_error(k, s, "vertex id already in use");
                live.push_back(id);
                next_id = std::max(next_id, id + 1);
            } else if (op == "cz") {
                s.kind = Step::Kind::Cz;
                s.i = js.at("i").get<int>();
                s.j = js.at("j").get<int>();
                require_live(k, s, s.i);
                require_live(k, s, s.j);
                if (s.i == s.j) step_error(k, s, "cz needs two distinct vertices");
            } else if (op == "steane") {
                s.kind = Step::Kind::Steane;
                s.vertex = js.at("vertex").get<int>();
                require_live(k, s, s.vertex);
                s.quad = quad_from_json(js, "quadrature", Quadrature::P);
                s.l_a = js.value("l_a", 1.0);
                s.m_a = js.value("m_a", 1.0);
                s.gain = opt_number(js, "gain");
                s.nu = js.value("nu", 0.0);
                s.forced_y = opt_number(js, "forced_y");
            } else if (op == "fuse") {
                s.kind = Step::Kind::Fuse;
                s.variant = protocols::fusion_variant_from_string(
                    js.value("variant", std::string("A")));
                s.control = js.at("control").get<int>();
                s.target = js.at("target").get<int>();
                require_live(k, s, s.control);
                require_live(k, s, s.target);
                if (s.control == s.target) step_error(k, s, "fuse needs distinct vertices");
                s.nu_control = js.value("nu_control", js.value("nu", 0.0));
                s.nu_target = js.value("nu_target", js.value("nu", 0.0));
                s.forced_y1 = opt_number(js, "forced_y1");
                s.forced_y2 = opt_number(js, "forced_y2");
                kill(s.control);
                kill(s.target);
            } else if (op == "measure") {
                s.kind = Step::Kind::Measure;
                s.vertex = js.contains("mode") ? js.at("mode").get<int>()
                                               : js.at("vertex").get<int>();
                require_live(k, s, s.vertex);
                s.quad = quad_from_json(js, "quadrature", Quadrature::Q);
                s.forced_y = opt_number(js, "forced_y");
                kill(s.vertex);
            } else if (op == "emit") {
                s.kind = Step::Kind::Emit;
                s.what = js.value("what", std::string("state"));
            } else {
                throw ContractViolation("unknown op '" + op + "'");
            }
        } catch (const json::exception& e) {
            throw ContractViolation(origin + ": step " + std::to_string(k) + " (" + op +
                                    "): " + e.what());
        }
        sc.steps.push_back(std::move(s));
    }

    if (j.contains("sweep") && !j.at("sweep").is_null()) {
        const json& w = j.at("sweep");
        SweepSpec sw;
        sw.parameter = w.at("parameter").get<std::string>();
        if (sw.parameter != "sigma2" && sw.parameter != "m_B" && sw.parameter != "nu")
            throw ContractViolation(origin + ": unknown sweep parameter '" + sw.parameter + "'");
        sw.values = w.at("values").get<std::vector<double>>();
        if (sw.values.empty()) throw ContractViolation(origin + ": sweep needs values");
        sw.metric = w.value("metric", std::string("avg_error"));
        if (sw.metric != "avg_error" && sw.metric != "p_succ" && sw.metric != "tradeoff")
            throw ContractViolation(origin + ": unknown sweep metric '" + sw.metric + "'");
        sc.sweep = std::move(sw);
    }
    return sc;
}

ProtocolScript parse_script_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ContractViolation("cannot open script file: " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ContractViolation("script parse error in " + path + ": " + e.what());
    }
    return parse_script(j, path);
}

// ---------------------------------------------------------------------------
// Running
// ---------------------------------------------------------------------------

json RunReport::to_json() const {
    json j;
    j["accepted"] = accepted;
    j["attempts"] = attempts;
    j["exact"] = exact;
    j["sigma2"] = sigma2;
    j["modes"] = modes;
    j["ids"] = ids;
    j["labels"] = labels;
    j["covariance"] = covariance;
    if (!covariance_exact.empty()) j["covariance_exact"] = covariance_exact;
    json br = json::array();
    for (const auto& b : branches) {
        json jb;
        jb["tags"] = b.tags;
        jb["weight"] = b.weight;
        jb["mean"] = b.mean;
        br.push_back(std::move(jb));
    }
    j["branches"] = std::move(br);
    json rec = json::array();
    for (const auto& r : records) rec.push_back(serialize::record_json(r));
    j["records"] = std::move(rec);
    j["aggregate_error"] = aggregate_error;
    j["success_probability"] = success_probability;
    j["dropped_weight"] = dropped_weight;
    j["state"] = state;
    return j;
}

RunReport run_protocol_script(const ProtocolScript& script, const RunOverrides& overrides) {
    RunReport rep;
    if (all_outcomes_forced(script)) {
        Executor<Root2> ex(script, overrides);
        rep = ex.run();
    } else {
        Executor<double> ex(script, overrides);
        rep = ex.run();
    }
    const std::string out = overrides.out_dir.value_or(script.output);
    if (!out.empty() && !rep.emitted.empty()) {
        std::filesystem::create_directories(out);
        for (const auto& [name, content] : rep.emitted) {
            std::ofstream f(std::filesystem::path(out) / name, std::ios::binary);
            if (!f) throw ContractViolation("cannot write " + name + " under " + out);
            f << content;
        }
    }
    return rep;
}

RunReport run_protocol_script_file(const std::string& path, const RunOverrides& overrides) {
    return run_protocol_script(parse_script_file(path), overrides);
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

std::string sweep_emit(const ProtocolScript& script, const RunOverrides& overrides) {
    if (!script.sweep) throw ContractViolation("script has no sweep block");
    const SweepSpec& sw = *script.sweep;

    bool has_fuse = false;
    for (const auto& s : script.steps)
        if (s.kind == Step::Kind::Fuse) has_fuse = true;
    const std::vector<FusionVariant> variants =
        has_fuse && !overrides.variant
            ? std::vector<FusionVariant>{FusionVariant::A, FusionVariant::B, FusionVariant::C}
            : std::vector<FusionVariant>{overrides.variant.value_or(FusionVariant::A)};

    struct Task {
        double value;
        FusionVariant variant;
    };
    std::vector<Task> tasks;
    for (double v : sw.values)
        for (auto var : variants) tasks.push_back({v, var});

    struct Cell {
        double avg_error = 0.0, p_succ = 1.0;
    };
    std::vector<Cell> results(tasks.size());
    std::vector<std::exception_ptr> errors(tasks.size());
    std::atomic<std::size_t> cursor{0};

    auto work = [&] {
        for (;;) {
            const std::size_t t = cursor.fetch_add(1);
            if (t >= tasks.size()) return;
            try {
                ProtocolScript sc = script;
                RunOverrides ov = overrides;
                ov.variant = tasks[t].variant;
                if (sw.parameter == "sigma2") {
                    ov.sigma2 = tasks[t].value;
                } else if (sw.parameter == "nu") {
                    ov.nu = tasks[t].value;
                } else {  // m_B: data-qubit momentum envelope weight
                    for (auto& s : sc.steps)
                        if (s.kind == Step::Kind::NewQubit) s.env.m = tasks[t].value;
                }
                // deterministic seed per task keeps sampled sweeps reproducible
                ov.seed = overrides.seed.value_or(sc.seed) + t;
                const RunReport rep = run_protocol_script(sc, ov);
                results[t] = Cell{rep.aggregate_error, rep.success_probability};
            } catch (...) {
                errors[t] = std::current_exception();
            }
        }
    };
    const std::size_t workers = worker_count(tasks.size());
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w + 1 < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    // ordered reduction into one row per parameter value
    std::vector<std::string> header{sw.parameter};
    const bool multi = variants.size() > 1;
    auto col = [&](const char* metric, FusionVariant v) {
        std::string c = metric;
        if (multi) c += std::string("_") + protocols::to_string(v);
        return c;
    };
    for (auto v : variants) {
        if (sw.metric == "avg_error" || sw.metric == "tradeoff")
            header.push_back(col("avg_error", v));
        if (sw.metric == "p_succ" || sw.metric == "tradeoff")
            header.push_back(col("p_succ", v));
    }
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < sw.values.size(); ++i) {
        std::vector<std::string> row{serialize::format_sig12(sw.values[i])};
        for (std::size_t j = 0; j < variants.size(); ++j) {
            const Cell& c = results[i * variants.size() + j];
            if (sw.metric == "avg_error" || sw.metric == "tradeoff")
                row.push_back(serialize::format_sig12(c.avg_error));
            if (sw.metric == "p_succ" || sw.metric == "tradeoff")
                row.push_back(serialize::format_sig12(c.p_succ));
        }
        rows.push_back(std::move(row));
    }
    std::ostringstream os;
    serialize::write_csv(os, header, rows);
    return os.str();
}

std::string emit_distribution(const states::SingleQubitState& state, Quadrature quad, double xmax,
                              std::size_t points) {
    if (!(xmax > 0.0) || points < 2) throw ContractViolation("invalid distribution grid");
    std::vector<std::vector<std::string>> rows;
    const double dx = 2.0 * xmax / static_cast<double>(points - 1);
    for (std::size_t k = 0; k < points; ++k) {
        const double x = -xmax + static_cast<double>(k) * dx;
        rows.push_back({serialize::format_sig12(x),
                        serialize::format_sig12(states::homodyne_outcome_pdf(state, quad, x))});
    }
    std::ostringstream os;
    serialize::write_csv(os, {"x", "pdf"}, rows);
    return os.str();
}

}  // namespace gkp::script
