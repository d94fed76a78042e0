#pragma once

#include <string>

#include <json.hpp>

#include "bloch/cochain.hpp"
#include "bloch/extbloch.hpp"
#include "bloch/field.hpp"

namespace bloch::io {

using Json = nlohmann::ordered_json;

// parse errors come back as bloch::Error with ErrorClass::Input
Json read_json(const std::string& path);

// rationals as JSON integers or strings "a/b"
mpq_class rational(const Json& j);
mpz_class integer(const Json& j);

// {"polynomial": [c0, .., cd], "torsion": {"order": m, "generator": [..]}}
// or just the coefficient array
NumberField field(const Json& j);
FieldElement element(const NumberField& nf, const Json& j);

// {"free": [[..], ..], "saturated": bool, "torsion_generator": [..], "symbolic": bool}
MultBasis basis(const NumberField& nf, const Json& j);

ExtElement ext(const Json& j);

// {"field": .., "basis": .., "terms": [{"n": 1, "e": [k, r..], "f": [k, r..]} or
// {"n": 1, "z": [..]}], "chi": [k, r..]}
ExtBlochSum ext_sum(const Json& j);

// {"field": .., "tets": N, "gluings": [[tet, face, tet', face', perm]], "shapes": [..],
//  "flattenings": [[p, q]], "orientations": [..], "obstruction": [..]}
// perm is a list of four vertices or a four-character string such as "1023"
ManifoldData manifold(const Json& j);

}  // namespace bloch::io
