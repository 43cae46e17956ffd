#ifndef FUSIONRIG_SERIALIZATION_HPP
#define FUSIONRIG_SERIALIZATION_HPP

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include <json.hpp>

#include "fusionrig/rig_witnesses.hpp"

namespace fusionrig {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Basis labels: {"leaf": i} | {"sum": [label, side]} | {"prod": [left, right, i, j, t, k]}

inline json to_json(const BasisLabel& l) {
  switch (l.kind()) {
    case BasisLabel::Kind::Leaf:
      return {{"leaf", l.generator()}};
    case BasisLabel::Kind::Sum:
      return {{"sum", json::array({to_json(l.inner()), l.side()})}};
    case BasisLabel::Kind::Prod:
      return {{"prod", json::array({to_json(l.left()), to_json(l.right()), l.i(), l.j(), l.t(), l.k()})}};
  }
  return nullptr;
}

namespace detail {

inline int json_int(const json& j, const std::string& what) {
  if (!j.is_number_integer()) throw ParseError(what + ": expected an integer");
  return j.get<int>();
}

}  // namespace detail

inline BasisLabel label_from_json(const json& j) {
  if (!j.is_object() || j.size() != 1) throw ParseError("basis label: expected a one-key object");
  if (j.contains("leaf")) return BasisLabel::leaf(detail::json_int(j["leaf"], "basis label leaf"));
  if (j.contains("sum")) {
    const json& a = j["sum"];
    if (!a.is_array() || a.size() != 2) throw ParseError("basis label: \"sum\" needs [label, side]");
    const int side = detail::json_int(a[1], "basis label side");
    if (side != 0 && side != 1) throw ParseError("basis label: side must be 0 or 1");
    return BasisLabel::sum(label_from_json(a[0]), side);
  }
  if (j.contains("prod")) {
    const json& a = j["prod"];
    if (!a.is_array() || a.size() != 6) throw ParseError("basis label: \"prod\" needs [left, right, i, j, t, k]");
    return BasisLabel::prod(label_from_json(a[0]), label_from_json(a[1]), detail::json_int(a[2], "i"),
                            detail::json_int(a[3], "j"), detail::json_int(a[4], "t"), detail::json_int(a[5], "k"));
  }
  throw ParseError("basis label: unknown tag");
}

// ---------------------------------------------------------------------------
// Raw elements: {"components": [[label, ...], ...]}

inline json to_json(const RawElement& a) {
  json comps = json::array();
  for (const auto& c : a.components()) {
    json list = json::array();
    for (const auto& l : c) list.push_back(to_json(l));
    comps.push_back(std::move(list));
  }
  return {{"components", std::move(comps)}};
}

inline RawElement raw_from_json(const json& j, const RulesPtr& rules) {
  if (!j.is_object() || !j.contains("components") || !j["components"].is_array()) {
    throw ParseError("raw element: missing array field \"components\"");
  }
  const json& comps = j["components"];
  if (static_cast<int>(comps.size()) != rules->rank()) throw ParseError("raw element: wrong number of components");
  std::vector<RawElement::Component> out;
  for (const auto& c : comps) {
    if (!c.is_array()) throw ParseError("raw element: component must be an array");
    RawElement::Component labels;
    for (const auto& l : c) labels.push_back(label_from_json(l));
    out.push_back(std::move(labels));
  }
  try {
    return RawElement(rules, std::move(out));
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("raw element: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Matrices: row-major arrays of [re, im]

inline json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ParseError("complex number: expected [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

inline json matrix_json(const DenseMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline DenseMatrix matrix_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("matrix: expected an array of rows");
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  const Eigen::Index cols = rows == 0 ? 0 : static_cast<Eigen::Index>(j[0].is_array() ? j[0].size() : 0);
  DenseMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) throw ParseError("matrix: ragged rows");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = complex_from_json(row[static_cast<std::size_t>(c)]);
  }
  return m;
}

inline json matrix_tuple_json(const Witness& w) {
  json mats = json::array();
  for (int k = 0; k < w.rank(); ++k) mats.push_back(matrix_json(w.dense(k)));
  return mats;
}

inline std::vector<DenseMatrix> matrix_tuple_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("matrix tuple: expected an array of matrices");
  std::vector<DenseMatrix> out;
  for (const auto& m : j) out.push_back(matrix_from_json(m));
  return out;
}

// ---------------------------------------------------------------------------
// Witnesses: {"domain": raw, "codomain": raw, "matrices": [matrix, ...]}

inline json to_json(const Witness& w) {
  return {{"domain", to_json(w.domain())}, {"codomain", to_json(w.codomain())}, {"matrices", matrix_tuple_json(w)}};
}

inline Witness witness_from_json(const json& j, const RulesPtr& rules) {
  if (!j.is_object() || !j.contains("domain") || !j.contains("codomain") || !j.contains("matrices")) {
    throw ParseError("witness: need \"domain\", \"codomain\" and \"matrices\"");
  }
  const RawElement dom = raw_from_json(j["domain"], rules);
  const RawElement cod = raw_from_json(j["codomain"], rules);
  const auto mats = matrix_tuple_from_json(j["matrices"]);
  std::vector<Matrix> sparse;
  for (const auto& m : mats) sparse.push_back(to_sparse(m));
  try {
    return Witness(dom, cod, std::move(sparse));
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("witness: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Rig models: {"rules": ..., "alpha": {"i,j,k": tuple}, "gamma": {"i,j": tuple}}

inline json to_json(const RigModel& m) {
  json alpha = json::object(), gamma = json::object();
  for (const auto& [key, w] : m.alpha_base()) {
    alpha[std::to_string(key[0]) + "," + std::to_string(key[1]) + "," + std::to_string(key[2])] = matrix_tuple_json(w);
  }
  for (const auto& [key, w] : m.gamma_base()) {
    gamma[std::to_string(key[0]) + "," + std::to_string(key[1])] = matrix_tuple_json(w);
  }
  return {{"rules", rules_to_json(m.rules())}, {"alpha", std::move(alpha)}, {"gamma", std::move(gamma)}};
}

namespace detail {

template <std::size_t N>
std::array<int, N> parse_key(const std::string& text, const std::string& what) {
  std::array<int, N> key{};
  std::istringstream in(text);
  for (std::size_t n = 0; n < N; ++n) {
    if (!(in >> key[n])) throw ParseError(what + ": malformed key \"" + text + "\"");
    if (n + 1 < N) {
      char comma = 0;
      if (!(in >> comma) || comma != ',') throw ParseError(what + ": malformed key \"" + text + "\"");
    }
  }
  in >> std::ws;
  if (!in.eof()) throw ParseError(what + ": malformed key \"" + text + "\"");
  return key;
}

}  // namespace detail

inline RigModel model_from_json(const json& j) {
  if (!j.is_object() || !j.contains("rules")) throw ParseError("rig model: missing field \"rules\"");
  const RulesPtr rules = make_rules(rules_from_json(j["rules"]));
  std::map<AlphaKey, std::vector<DenseMatrix>> alpha;
  std::map<GammaKey, std::vector<DenseMatrix>> gamma;
  if (j.contains("alpha")) {
    if (!j["alpha"].is_object()) throw ParseError("rig model: \"alpha\" must be an object");
    for (const auto& [k, v] : j["alpha"].items()) alpha[detail::parse_key<3>(k, "rig model alpha")] = matrix_tuple_from_json(v);
  }
  if (j.contains("gamma")) {
    if (!j["gamma"].is_object()) throw ParseError("rig model: \"gamma\" must be an object");
    for (const auto& [k, v] : j["gamma"].items()) gamma[detail::parse_key<2>(k, "rig model gamma")] = matrix_tuple_from_json(v);
  }
  try {
    return RigModel::from_matrices(rules, alpha, gamma);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

inline json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(source + ": invalid JSON (" + e.what() + ")");
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline FusionRules load_rules(const std::string& path) {
  try {
    return rules_from_json(parse_json_text(read_file(path), path));
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    throw ParseError(msg.rfind(path, 0) == 0 ? msg : path + ": " + msg);
  }
}

inline RigModel load_model(const std::string& path) {
  try {
    return model_from_json(parse_json_text(read_file(path), path));
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    throw ParseError(msg.rfind(path, 0) == 0 ? msg : path + ": " + msg);
  }
}

/// Text rendering re+im*i with 12 significant digits.
inline std::string format_complex(Complex z) {
  auto clean = [](double v) { return std::abs(v) < 5e-13 ? 0.0 : v; };
  std::ostringstream out;
  out << std::setprecision(12) << clean(z.real()) << (std::signbit(clean(z.imag())) ? "-" : "+")
      << std::abs(clean(z.imag())) << "i";
  return out.str();
}

}  // namespace fusionrig

#endif  // FUSIONRIG_SERIALIZATION_HPP
