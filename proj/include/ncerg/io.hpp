#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "ncerg/classical.hpp"
#include "ncerg/crossed.hpp"
#include "ncerg/equivalence.hpp"
#include "ncerg/sections.hpp"
#include "ncerg/states.hpp"

namespace ncerg::io {

using Json = nlohmann::ordered_json;

/// Rows of [re, im] pairs. Malformed input throws Parse.
Matrix matrix_from_json(const Json& j);
Json matrix_to_json(const Matrix& m);

/// { "ambient_dim": n, "generators": [...] } or { "blocks": [{"dim", "multiplicity"}, ...] }.
OperatorAlgebra algebra_from_json(const Json& j, const Tolerance& tol = {});

/// { "group": {"cyclic_orders": [...]}, "unitaries": {key: Matrix} } or { "single_automorphism": Matrix }.
AutomorphicAction action_from_json(const Json& j, const OperatorAlgebra& algebra, const Tolerance& tol = {});

/// { "density": Matrix }.
StateFunctional state_from_json(const Json& j, const OperatorAlgebra& algebra, const Tolerance& tol = {});

struct PermutationSystem {
  FiniteProbabilitySpace measure;
  Permutation map;
};
struct ShiftSystem {
  std::vector<std::int64_t> set;
};
using DynSystem = std::variant<PermutationSystem, ShiftSystem>;

/// { "points": n, "weights": [...], "permutation": [...] } (weights default to uniform)
/// or { "shift": true, "set": [...] }.
DynSystem dyn_from_json(const Json& j);

/// { "base": AlgebraSpec, "action": ActionSpec }.
AutomorphicAction crossed_from_json(const Json& j, const Tolerance& tol = {});

struct Scenario {
  LatticePatch patch;
  FibreSpec fibre;
};
/// { "lattice": [...], "fibre_dim": n, "twist": {site-key: Matrix}? }; untwisted sites get I.
Scenario scenario_from_json(const Json& j);

/// { "e": Matrix, "f": Matrix }.
struct ProjectionPair {
  Matrix e, f;
};
ProjectionPair pair_from_json(const Json& j);

/// { element-key: Matrix }.
Json witness_to_json(const TwistWitness& w, const AutomorphicAction& action);
TwistWitness witness_from_json(const Json& j, const AutomorphicAction& action);

/// Reads and parses a file; Parse on I/O or syntax errors.
Json read_json_file(const std::string& path);

}  // namespace ncerg::io
