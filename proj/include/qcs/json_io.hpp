#pragma once
// JSON encoding of every value that crosses the command-line boundary.
// Integers wider than 64 bits travel as decimal strings, Q/Z values as
// "num/den" strings, matrices as arrays of rows; object keys come out
// sorted so serialized output is deterministic.

#include <string>

#include <json.hpp>

#include "qcs/dictionary.hpp"
#include "qcs/etale.hpp"
#include "qcs/fgab.hpp"
#include "qcs/int_matrix.hpp"
#include "qcs/neron.hpp"
#include "qcs/qcsheaf.hpp"
#include "qcs/qz.hpp"

namespace qcs {

using Json = nlohmann::json;

Json int_to_json(const Int& v);
Int int_from_json(const Json& j);

Json qz_to_json(const QZ& v);
QZ qz_from_json(const Json& j);

Json matrix_to_json(const IntMatrix& m);
IntMatrix matrix_from_json(const Json& j);

Json group_to_json(const FgAbGroup& g);    // {"factors": [...]}
FgAbGroup group_from_json(const Json& j);

Json model_to_json(const EtaleGroupModel& e);  // {"factors", "frobenius"}
EtaleGroupModel model_from_json(const Json& j);

// {"base": model, "a": {"x1,..,y1,..": "num/den"}, "b": {"x1,..": ...}};
// every element key must be present, coordinates in reduced form
Json sheaf_to_json(const QCSheafModel& q);
QCSheafModel sheaf_from_json(const Json& j);

Json lattice_to_json(const GaloisLattice& l);  // {"rank", "inertia", "frob", "bound"}
GaloisLattice lattice_from_json(const Json& j);

// {"kind": "p-adic", "p": ..., "level"} or {"kind": "laurent", "q": ..., "level"}
Json ring_to_json(const RingSpec& r);
RingSpec ring_from_json(const Json& j);

Json dual_to_json(const DualStructure& d);  // {"divisible_rank", "torsion"}

Json character_to_json(const Character& c);  // {"factors", "values"}

// Indented dump with a trailing newline; keys are already sorted because
// objects are backed by an ordered map.
std::string dump_json(const Json& j);

} // namespace qcs
