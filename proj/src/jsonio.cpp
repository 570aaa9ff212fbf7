#include "schottkykit/jsonio.hpp"

namespace skt::jsonio {

using charalg::Characteristic;

json characteristic_to_json(const Characteristic& m) {
    json eps = json::array(), delta = json::array();
    for (int i = 1; i <= m.genus; ++i) {
        eps.push_back(m.eps_bit(i));
        delta.push_back(m.delta_bit(i));
    }
    return json{{"eps", eps}, {"delta", delta}};
}

Characteristic characteristic_from_json(const json& j) {
    const auto& eps = j.at("eps");
    const auto& delta = j.at("delta");
    if (!eps.is_array() || !delta.is_array() || eps.size() != delta.size() || eps.empty())
        throw std::invalid_argument("characteristic JSON: eps/delta must be equal-length bit arrays");
    std::uint32_t e = 0, d = 0;
    for (size_t i = 0; i < eps.size(); ++i) {
        int eb = eps[i].get<int>(), db = delta[i].get<int>();
        if ((eb | db) & ~1) throw std::invalid_argument("characteristic JSON: bits must be 0/1");
        e |= static_cast<std::uint32_t>(eb) << i;
        d |= static_cast<std::uint32_t>(db) << i;
    }
    return Characteristic(static_cast<int>(eps.size()), e, d);
}

json period_matrix_to_json(const theta::PeriodMatrix& tau, int digits) {
    json entries = json::array();
    for (int i = 0; i < tau.genus; ++i)
        for (int j = 0; j < tau.genus; ++j)
            entries.push_back(json::array({tau.at(i, j).re.str(digits), tau.at(i, j).im.str(digits)}));
    return json{{"genus", tau.genus}, {"entries", entries}};
}

theta::PeriodMatrix period_matrix_from_json(const json& j, int digits) {
    int g = j.at("genus").get<int>();
    const auto& entries = j.at("entries");
    if (g < 1 || !entries.is_array() || entries.size() != static_cast<size_t>(g) * g)
        throw std::invalid_argument("period matrix JSON: entries must be a g*g row-major array");
    mpfr_prec_t prec = bits_for_digits(digits + 10);
    theta::PeriodMatrix tau(g, prec);
    for (int i = 0; i < g; ++i)
        for (int jj = 0; jj < g; ++jj) {
            const auto& cell = entries[static_cast<size_t>(i) * g + jj];
            tau.at(i, jj) = HPComplex(HPReal(cell.at(0).get<std::string>(), prec),
                                      HPReal(cell.at(1).get<std::string>(), prec));
        }
    return tau;
}

json relation_to_json(const weilmat::QuarticRelation& r, const identities::QuarticMonomialList* expanded) {
    json coeffs = json::array();
    for (const auto& [ch, v] : r.coeff_map())
        coeffs.push_back(json{{"char", characteristic_to_json(ch)}, {"value", v}});
    json out{{"genus", r.genus},
             {"coefficients", coeffs},
             {"shift_a", characteristic_to_json(r.shift_a)},
             {"shift_s", characteristic_to_json(r.shift_s)}};
    if (expanded) {
        json terms = json::array();
        for (const auto& t : expanded->terms) {
            json chars = json::array();
            for (const auto& c : t.chars) chars.push_back(characteristic_to_json(c));
            terms.push_back(json{{"coeff", t.coeff}, {"chars", chars}});
        }
        out["expanded"] = terms;
    }
    return out;
}

json sj_identity_to_json(const schottky::SJIdentity& s) {
    json terms = json::array();
    for (size_t i = 0; i < s.terms.size(); ++i) {
        json chars = json::array();
        for (const auto& c : s.terms[i].chars) chars.push_back(characteristic_to_json(c));
        terms.push_back(json{{"slot", s.slot_labels.at(i)}, {"chars", chars}});
    }
    return json{{"source_genus", s.source_genus},
                {"target_genus", s.target_genus},
                {"fixed_slot", s.fixed_slot},
                {"sign_patterns", static_cast<std::uint64_t>(1) << (s.terms.size() - 1)},
                {"terms", terms}};
}

json log_complex_to_json(const LogComplex& v, int digits) {
    if (v.zero) return json{{"exact_zero", true}, {"log_magnitude", nullptr}, {"phase", nullptr}};
    return json{{"exact_zero", false},
                {"log_magnitude", v.log_mag.str(digits)},
                {"phase", v.phase.str(digits)},
                {"log10_magnitude", v.log_mag.to_double() / 2.302585092994046}};
}

}  // namespace skt::jsonio
