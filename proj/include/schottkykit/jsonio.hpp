#pragma once
// JSON forms of the shared value types. All numeric payloads are decimal
// strings so that precision survives a round trip through the files; keys
// keep insertion order for byte-stable reports.

#include "schottkykit/identities.hpp"
#include "schottkykit/schottky.hpp"

#include <json.hpp>

namespace skt::jsonio {

using json = nlohmann::ordered_json;

json characteristic_to_json(const charalg::Characteristic& m);
charalg::Characteristic characteristic_from_json(const json& j);

// {"genus": g, "entries": [["re", "im"], ... row-major ...]}
json period_matrix_to_json(const theta::PeriodMatrix& tau, int digits);
theta::PeriodMatrix period_matrix_from_json(const json& j, int digits);

json relation_to_json(const weilmat::QuarticRelation& r, const identities::QuarticMonomialList* expanded);
json sj_identity_to_json(const schottky::SJIdentity& s);
json log_complex_to_json(const LogComplex& v, int digits);

}  // namespace skt::jsonio
