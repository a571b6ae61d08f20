#include "gkplab/serialize.hpp"

#include <cstdio>

namespace gkp::serialize {

std::string format_sig12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void write_csv(std::ostream& os, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    auto write_row = [&os](const std::vector<std::string>& cells) {
        for (std::size_t k = 0; k < cells.size(); ++k) {
            if (k) os << ',';
            os << cells[k];
        }
        os << '\n';
    };
    write_row(header);
    for (const auto& row : rows) write_row(row);
}

std::string rational_string(const Rational& r) {
    std::string s = boost::multiprecision::numerator(r).str();
    if (boost::multiprecision::denominator(r) != 1)
        s += "/" + boost::multiprecision::denominator(r).str();
    return s;
}

std::string root2_string(const Root2& x) {
    if (x.b == 0) return rational_string(x.a);
    std::string bs = rational_string(x.b);
    std::string tail = (bs == "1" ? std::string("sqrt2")
                                  : (bs == "-1" ? std::string("-sqrt2") : bs + "*sqrt2"));
    if (x.a == 0) return tail;
    if (x.b.sign() < 0) {
        Rational nb = -x.b;
        std::string nbs = rational_string(nb);
        return rational_string(x.a) + " - " + (nbs == "1" ? "sqrt2" : nbs + "*sqrt2");
    }
    return rational_string(x.a) + " + " + (bs == "1" ? "sqrt2" : bs + "*sqrt2");
}

json record_json(const protocols::MeasurementRecord& r) {
    json j;
    j["step"] = r.step;
    j["mode_id"] = r.mode_id;
    j["target_id"] = r.target_id;
    j["quadrature"] = r.quad == states::Quadrature::Q ? "q" : "p";
    j["forced"] = r.forced;
    j["y_units"] = r.y;
    j["spacing_units"] = r.spacing;
    j["cell"] = r.cell;
    j["residue_units"] = r.residue;
    j["v_mm"] = r.v_mm;
    j["cond_conj"] = r.cond_conj;
    j["physical"] = {{"v_mm", r.physical.v_mm},
                     {"cond_conj", r.physical.cond_conj},
                     {"spacing", r.physical.spacing}};
    j["regime_ok"] = r.regime_ok;
    j["postselect_rejected"] = r.postselect_rejected;
    return j;
}

}  // namespace gkp::serialize
