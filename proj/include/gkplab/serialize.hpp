#pragma once
// Stable text output: 12-significant-digit CSV cells with '.' decimal and LF
// endings, exact rational/quadratic-integer strings, and JSON views of states
// and measurement records.

#include <complex>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "gkplab/exact.hpp"
#include "gkplab/graph.hpp"
#include "gkplab/protocols.hpp"

namespace gkp::serialize {

using json = nlohmann::ordered_json;

/// Shortest representation with at most 12 significant digits ("%.12g").
std::string format_sig12(double v);

/// Header + rows, every line LF-terminated.  Cells are written verbatim;
/// callers format numbers with format_sig12.
void write_csv(std::ostream& os, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

std::string rational_string(const Rational& r);

/// "a", "b*sqrt2", or "a + b*sqrt2" with exact rational coefficients.
std::string root2_string(const Root2& x);

/// Exact cell text for a scalar: Root2 gets its symbolic form, double the
/// 12-digit decimal form.
inline std::string scalar_string(const Root2& x) { return root2_string(x); }
inline std::string scalar_string(double x) { return format_sig12(x); }

template <class T>
json state_json(const graph::GkpGraphState<T>& st) {
    using S = ScalarTraits<T>;
    const std::size_t n = st.n();
    json j;
    j["modes"] = n;
    j["sigma2"] = st.sigma2;
    j["ids"] = st.ids;
    json labels = json::array();
    for (auto l : st.labels) labels.push_back(states::to_string(l));
    j["labels"] = std::move(labels);
    j["adjacency"] = st.adjacency;
    j["z_flags"] = st.z_flag;
    j["x_flags"] = st.x_flag;
    j["graph_form"] = st.graph_form;
    j["dropped_weight"] = st.dropped_weight;

    json cov_f = json::array(), cov_x = json::array();
    for (std::size_t r = 0; r < 2 * n; ++r) {
        json rf = json::array(), rx = json::array();
        for (std::size_t c = 0; c < 2 * n; ++c) {
            rf.push_back(S::to_d(st.cov(r, c)));
            if constexpr (S::exact) rx.push_back(scalar_string(st.cov(r, c)));
        }
        cov_f.push_back(std::move(rf));
        if constexpr (S::exact) cov_x.push_back(std::move(rx));
    }
    j["covariance"] = std::move(cov_f);
    if constexpr (S::exact) j["covariance_exact"] = std::move(cov_x);

    json branches = json::array();
    for (const auto& b : st.branches) {
        json jb;
        jb["weight"] = std::norm(b.amp);
        jb["amp_re"] = b.amp.real();
        jb["amp_im"] = b.amp.imag();
        jb["tags"] = b.tags;
        json mean = json::array(), grad = json::array();
        json mean_x = json::array(), grad_x = json::array();
        for (std::size_t k = 0; k < 2 * n; ++k) {
            mean.push_back(S::to_d(b.mean[k]));
            grad.push_back(S::to_d(b.grad[k]));
            if constexpr (S::exact) {
                mean_x.push_back(scalar_string(b.mean[k]));
                grad_x.push_back(scalar_string(b.grad[k]));
            }
        }
        jb["mean"] = std::move(mean);
        jb["grad"] = std::move(grad);
        if constexpr (S::exact) {
            jb["mean_exact"] = std::move(mean_x);
            jb["grad_exact"] = std::move(grad_x);
        }
        branches.push_back(std::move(jb));
    }
    j["branches"] = std::move(branches);
    return j;
}

json record_json(const protocols::MeasurementRecord& r);

/// Branch table rows (tags, weight, means) in CSV cells.
template <class T>
std::vector<std::vector<std::string>> branch_rows(const graph::GkpGraphState<T>& st) {
    using S = ScalarTraits<T>;
    std::vector<std::vector<std::string>> rows;
    for (const auto& b : st.branches) {
        std::vector<std::string> row;
        std::string tags;
        for (int t : b.tags) tags += char('0' + (t & 1));
        row.push_back(tags);
        row.push_back(format_sig12(std::norm(b.amp)));
        for (std::size_t k = 0; k < 2 * st.n(); ++k) row.push_back(format_sig12(S::to_d(b.mean[k])));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace gkp::serialize
