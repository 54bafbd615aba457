#pragma once

#include <json.hpp>

#include "oadl/crossedprod.hpp"
#include "oadl/geodist.hpp"
#include "oadl/staralg.hpp"
#include "oadl/tensorlab.hpp"

namespace oadl {

using json = nlohmann::json;

// Matrix interchange: {"rows": r, "cols": c, "entries": [[re, im], ...]} in
// row-major order. Doubles serialize with shortest round-trip precision, so
// load(store(m)) is bit-exact.
json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const json& j);

json subspace_to_json(const StarSubspace& s);
/// Re-validates orthonormality and *-closure on load; throws on violation.
StarSubspace subspace_from_json(const json& j);

json bracket_to_json(const DistanceBracket& b);
DistanceBracket bracket_from_json(const json& j);

json factor_spec_to_json(const FactorSpec& f);
FactorSpec factor_spec_from_json(const json& j);

json tensor_to_json(const TensorElement& u);
TensorElement tensor_from_json(const json& j);

json twisted_system_to_json(const TwistedSystem& sys);
/// Re-validates the group table and all cocycle identities; rejects with the
/// named identity and indices.
TwistedSystem twisted_system_from_json(const json& j);

/// FNV-1a digest of a canonical serialization, as fixed-width hex.
std::string json_digest(const json& j);

}  // namespace oadl
