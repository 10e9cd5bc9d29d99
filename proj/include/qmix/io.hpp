// JSON encodings of the domain types. Complex numbers are [re, im] pairs and
// matrices are row-major arrays of rows.
#pragma once

#include <string>

#include <json.hpp>

#include "qmix/combine.hpp"
#include "qmix/groups.hpp"
#include "qmix/quantum.hpp"
#include "qmix/repr.hpp"

namespace qmix {

using json = nlohmann::json;

inline constexpr const char* kFormat = "qmix/1";

json to_json(cplx v);
cplx complex_from_json(const json& j);

json to_json(const CMatrix& m);
/// Accepts rows of [re, im] pairs or of plain reals.
CMatrix matrix_from_json(const json& j);

json to_json(const CoeffVector& z);
json to_json(const QTriple& q);
/// {"q": [[re, im] x 3]}; any global phase is accepted and gauge-fixed.
QTriple qtriple_from_json(const json& j);
json to_json(const PDelta& pd);
/// {"p": [..], "delta": [..]}; validated.
PDelta pdelta_from_json(const json& j);
json to_json(const NestedSpec& s);
NestedSpec nested_from_json(const json& j);

/// {"order": n, "table": [[..]..]} with 0-based entries.
json group_to_json(const FiniteGroup& g);
FiniteGroup group_from_json(const json& j);

/// [{"label", "dim", "matrices": [...]}] in IrrepSet order.
json irreps_to_json(const IrrepSet& irreps);
/// Rebuilds and validates an IrrepSet over `group`.
IrrepSet irreps_from_json(const json& j, const FiniteGroup& group);

/// A matrix, or {"bloch": [x, y, z]} for a qubit.
DensityMatrix density_from_json(const json& j);
json diagnostics_json(const CMatrix& m);

/// Serialized with a trailing newline; doubles use the shortest form that
/// parses back to the same value.
std::string dump(const json& j);

}  // namespace qmix
