#include "ncerg/io.hpp"

#include <fstream>
#include <sstream>

#include "ncerg/error.hpp"

namespace ncerg::io {

namespace {

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorCode::Parse, what); }

const Json& field(const Json& j, const char* name) {
  if (!j.is_object()) parse_error(std::string("expected an object with field '") + name + "'");
  const auto it = j.find(name);
  if (it == j.end()) parse_error(std::string("missing field '") + name + "'");
  return *it;
}

std::size_t as_size(const Json& j, const char* what) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 0) parse_error(std::string(what) + " must be a nonnegative integer");
  return j.get<std::size_t>();
}

std::vector<std::size_t> as_sizes(const Json& j, const char* what) {
  if (!j.is_array()) parse_error(std::string(what) + " must be an array");
  std::vector<std::size_t> out;
  for (const auto& x : j) out.push_back(as_size(x, what));
  return out;
}

}  // namespace

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) parse_error("matrix must be a nonempty list of rows");
  const std::size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty()) parse_error("matrix rows must be nonempty lists");
  const std::size_t cols = j[0].size();
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const Json& row = j[r];
    if (!row.is_array() || row.size() != cols) parse_error("matrix rows must all have " + std::to_string(cols) + " entries");
    for (std::size_t c = 0; c < cols; ++c) {
      const Json& e = row[c];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        parse_error("matrix entry (" + std::to_string(r) + "," + std::to_string(c) + ") must be [re, im]");
      m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

Json matrix_to_json(const Matrix& m) {
  Json out = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
    out.push_back(std::move(row));
  }
  return out;
}

OperatorAlgebra algebra_from_json(const Json& j, const Tolerance& tol) {
  if (!j.is_object()) parse_error("algebra spec must be an object");
  if (j.contains("blocks")) {
    const Json& blocks = j["blocks"];
    if (!blocks.is_array() || blocks.empty()) parse_error("'blocks' must be a nonempty array");
    std::vector<BlockSpec> specs;
    for (const auto& b : blocks) {
      const std::size_t mult = b.is_object() && b.contains("multiplicity") ? as_size(b["multiplicity"], "multiplicity") : 1;
      specs.push_back({as_size(field(b, "dim"), "dim"), mult});
      if (specs.back().dim == 0 || mult == 0) parse_error("block dimensions and multiplicities must be positive");
    }
    return block_algebra(specs);
  }
  const std::size_t n = as_size(field(j, "ambient_dim"), "ambient_dim");
  const Json& gens = field(j, "generators");
  if (!gens.is_array()) parse_error("'generators' must be an array");
  std::vector<Matrix> mats;
  for (const auto& g : gens) mats.push_back(matrix_from_json(g));
  return generate_algebra(mats, n, tol);
}

AutomorphicAction action_from_json(const Json& j, const OperatorAlgebra& algebra, const Tolerance& tol) {
  if (!j.is_object()) parse_error("action spec must be an object");
  if (j.contains("single_automorphism"))
    return AutomorphicAction::from_automorphism(algebra, matrix_from_json(j["single_automorphism"]), tol);
  const FiniteAbelianGroup grp(as_sizes(field(field(j, "group"), "cyclic_orders"), "cyclic_orders"));
  for (std::size_t m : grp.cyclic_orders())
    if (m == 0) parse_error("cyclic orders must be positive");
  const Json& us = field(j, "unitaries");
  if (!us.is_object()) parse_error("'unitaries' must map element keys to matrices");
  std::vector<std::optional<Matrix>> slots(grp.size());
  for (const auto& [key, value] : us.items()) {
    const std::size_t k = grp.parse_key(key);
    if (slots[k]) parse_error("duplicate unitary for element '" + key + "'");
    slots[k] = matrix_from_json(value);
  }
  std::vector<Matrix> unitaries;
  for (std::size_t k = 0; k < grp.size(); ++k) {
    if (!slots[k]) {
      // The identity may be omitted.
      if (k == 0) {
        unitaries.push_back(Matrix::identity(algebra.ambient_dim()));
        continue;
      }
      parse_error("missing unitary for element '" + grp.key(k) + "'");
    }
    unitaries.push_back(*slots[k]);
  }
  return AutomorphicAction::from_group(algebra, grp, std::move(unitaries), tol);
}

StateFunctional state_from_json(const Json& j, const OperatorAlgebra& algebra, const Tolerance& tol) {
  return StateFunctional(algebra, matrix_from_json(field(j, "density")), tol);
}

DynSystem dyn_from_json(const Json& j) {
  if (!j.is_object()) parse_error("dynamics spec must be an object");
  if (j.contains("shift")) {
    if (!j["shift"].is_boolean() || !j["shift"].get<bool>()) parse_error("'shift' must be true");
    const Json& s = field(j, "set");
    if (!s.is_array()) parse_error("'set' must be an array of integers");
    ShiftSystem out;
    for (const auto& x : s) {
      if (!x.is_number_integer()) parse_error("'set' must be an array of integers");
      out.set.push_back(x.get<std::int64_t>());
    }
    return out;
  }
  const std::size_t n = as_size(field(j, "points"), "points");
  if (n == 0) parse_error("'points' must be positive");
  std::vector<double> w(n, 1.0 / static_cast<double>(n));
  if (j.contains("weights")) {
    const Json& ws = j["weights"];
    if (!ws.is_array() || ws.size() != n) parse_error("'weights' must have one entry per point");
    for (std::size_t i = 0; i < n; ++i) {
      if (!ws[i].is_number()) parse_error("weights must be numbers");
      w[i] = ws[i].get<double>();
    }
  }
  const auto images = as_sizes(field(j, "permutation"), "permutation");
  if (images.size() != n) parse_error("'permutation' must have one image per point");
  PermutationSystem out{FiniteProbabilitySpace{w}, Permutation(images)};
  out.measure.validate();
  return out;
}

AutomorphicAction crossed_from_json(const Json& j, const Tolerance& tol) {
  const OperatorAlgebra base = algebra_from_json(field(j, "base"), tol);
  return action_from_json(field(j, "action"), base, tol);
}

Scenario scenario_from_json(const Json& j) {
  Scenario s;
  s.patch.orders = as_sizes(field(j, "lattice"), "lattice");
  if (s.patch.orders.empty()) parse_error("'lattice' must be nonempty");
  for (std::size_t m : s.patch.orders)
    if (m == 0) parse_error("lattice orders must be positive");
  s.fibre.fibre_dim = as_size(field(j, "fibre_dim"), "fibre_dim");
  if (s.fibre.fibre_dim == 0) parse_error("'fibre_dim' must be positive");
  if (j.contains("twist") && !j["twist"].is_null()) {
    const Json& t = j["twist"];
    if (!t.is_object()) parse_error("'twist' must map site keys to matrices");
    const FiniteAbelianGroup grp = s.patch.group();
    s.fibre.twist.assign(grp.size(), Matrix::identity(s.fibre.fibre_dim));
    for (const auto& [key, value] : t.items()) s.fibre.twist[grp.parse_key(key)] = matrix_from_json(value);
  }
  return s;
}

ProjectionPair pair_from_json(const Json& j) {
  return {matrix_from_json(field(j, "e")), matrix_from_json(field(j, "f"))};
}

Json witness_to_json(const TwistWitness& w, const AutomorphicAction& action) {
  Json out = Json::object();
  for (const auto& [g, a] : w) out[action.label(g)] = matrix_to_json(a);
  return out;
}

TwistWitness witness_from_json(const Json& j, const AutomorphicAction& action) {
  if (!j.is_object()) parse_error("witness must map element keys to matrices");
  TwistWitness w;
  for (const auto& [key, value] : j.items()) w[action.group().parse_key(key)] = matrix_from_json(value);
  return w;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) parse_error("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return Json::parse(buf.str());
  } catch (const nlohmann::json::exception& e) {
    parse_error("'" + path + "': " + e.what());
  }
}

}  // namespace ncerg::io
