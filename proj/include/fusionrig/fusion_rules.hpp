#ifndef FUSIONRIG_FUSION_RULES_HPP
#define FUSIONRIG_FUSION_RULES_HPP

#include <cstddef>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fusionrig/errors.hpp"

namespace fusionrig {

/// Fusion coefficients N[i][j][k] stored densely as a (q+1)^3 table.
/// Index 0 is the multiplicative unit.
class FusionRules {
 public:
  FusionRules() : FusionRules(0, {1}) {}

  FusionRules(int q, std::vector<int> table) : q_(q), n_(std::move(table)) {
    if (q_ < 0) throw std::invalid_argument("fusion rules: q must be non-negative");
    const std::size_t r = static_cast<std::size_t>(q_) + 1;
    if (n_.size() != r * r * r) {
      throw std::invalid_argument("fusion rules: table size does not match q");
    }
    for (int v : n_) {
      if (v < 0) throw std::invalid_argument("fusion rules: negative coefficient");
    }
  }

  int q() const { return q_; }
  int rank() const { return q_ + 1; }

  int operator()(int i, int j, int k) const { return n_[index(i, j, k)]; }
  int& at(int i, int j, int k) { return n_[index(i, j, k)]; }

  bool multiplicity_free() const {
    for (int v : n_) {
      if (v > 1) return false;
    }
    return true;
  }

  const std::vector<int>& table() const { return n_; }

  friend bool operator==(const FusionRules&, const FusionRules&) = default;

 private:
  std::size_t index(int i, int j, int k) const {
    const std::size_t r = static_cast<std::size_t>(q_) + 1;
    return (static_cast<std::size_t>(i) * r + static_cast<std::size_t>(j)) * r +
           static_cast<std::size_t>(k);
  }

  int q_;
  std::vector<int> n_;
};

/// Table with only the unit entries N[i][0][i] = N[0][i][i] = 1 filled in.
inline FusionRules unit_only_rules(int q) {
  const std::size_t r = static_cast<std::size_t>(q) + 1;
  FusionRules rules(q, std::vector<int>(r * r * r, 0));
  for (int i = 0; i <= q; ++i) {
    rules.at(i, 0, i) = 1;
    rules.at(0, i, i) = 1;
  }
  return rules;
}

inline FusionRules trivial_rules() { return unit_only_rules(0); }

/// tau x tau = 1 + tau.
inline FusionRules fibonacci_rules() {
  FusionRules rules = unit_only_rules(1);
  rules.at(1, 1, 0) = 1;
  rules.at(1, 1, 1) = 1;
  return rules;
}

/// tau x tau = 1.
inline FusionRules z2_rules() {
  FusionRules rules = unit_only_rules(1);
  rules.at(1, 1, 0) = 1;
  return rules;
}

/// sigma x sigma = 1 + psi, sigma x psi = sigma, psi x psi = 1 (sigma = 1, psi = 2).
inline FusionRules ising_rules() {
  FusionRules rules = unit_only_rules(2);
  rules.at(1, 1, 0) = 1;
  rules.at(1, 1, 2) = 1;
  rules.at(1, 2, 1) = 1;
  rules.at(2, 1, 1) = 1;
  rules.at(2, 2, 0) = 1;
  return rules;
}

struct Violation {
  std::string law;            // "unit", "commutativity" or "associativity"
  std::vector<int> indices;   // entry (i,j,k) or quadruple (i,j,k,l)
  long lhs = 0;
  long rhs = 0;

  std::string to_string() const {
    std::ostringstream out;
    out << law << " at (";
    for (std::size_t n = 0; n < indices.size(); ++n) out << (n ? "," : "") << indices[n];
    out << "): " << lhs << " != " << rhs;
    return out.str();
  }
};

struct ValidationReport {
  bool ok = true;
  std::vector<Violation> violations;
};

/// Exhaustively checks the unit, commutativity and associativity laws.
inline ValidationReport validate_rules(const FusionRules& rules) {
  ValidationReport report;
  const int r = rules.rank();
  auto add = [&](std::string law, std::vector<int> idx, long lhs, long rhs) {
    report.violations.push_back({std::move(law), std::move(idx), lhs, rhs});
  };

  for (int i = 0; i < r; ++i) {
    for (int k = 0; k < r; ++k) {
      const long expected = i == k ? 1 : 0;
      if (rules(i, 0, k) != expected) add("unit", {i, 0, k}, rules(i, 0, k), expected);
      if (i != 0 && rules(0, i, k) != expected) add("unit", {0, i, k}, rules(0, i, k), expected);
    }
  }
  for (int i = 0; i < r; ++i) {
    for (int j = i + 1; j < r; ++j) {
      for (int k = 0; k < r; ++k) {
        if (rules(i, j, k) != rules(j, i, k)) {
          add("commutativity", {i, j, k}, rules(i, j, k), rules(j, i, k));
        }
      }
    }
  }
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) {
      for (int k = 0; k < r; ++k) {
        for (int l = 0; l < r; ++l) {
          long lhs = 0;
          long rhs = 0;
          for (int m = 0; m < r; ++m) {
            lhs += static_cast<long>(rules(i, j, m)) * rules(m, k, l);
            rhs += static_cast<long>(rules(j, k, m)) * rules(i, m, l);
          }
          if (lhs != rhs) add("associativity", {i, j, k, l}, lhs, rhs);
        }
      }
    }
  }
  report.ok = report.violations.empty();
  return report;
}

/// result[k] = sum_{i,j} N[i][j][k] a[i] b[j].
inline std::vector<std::size_t> fused_dims(const FusionRules& rules,
                                           std::span<const std::size_t> a,
                                           std::span<const std::size_t> b) {
  const auto r = static_cast<std::size_t>(rules.rank());
  if (a.size() != r || b.size() != r) {
    throw std::invalid_argument("fused_dims: dimension vectors must have length q+1");
  }
  std::vector<std::size_t> out(r, 0);
  for (std::size_t i = 0; i < r; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < r; ++j) {
      for (std::size_t k = 0; k < r; ++k) {
        const int n = rules(static_cast<int>(i), static_cast<int>(j), static_cast<int>(k));
        out[k] += static_cast<std::size_t>(n) * a[i] * b[j];
      }
    }
  }
  return out;
}

inline nlohmann::json rules_to_json(const FusionRules& rules) {
  const int r = rules.rank();
  nlohmann::json n = nlohmann::json::array();
  for (int i = 0; i < r; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < r; ++j) {
      nlohmann::json cell = nlohmann::json::array();
      for (int k = 0; k < r; ++k) cell.push_back(rules(i, j, k));
      row.push_back(std::move(cell));
    }
    n.push_back(std::move(row));
  }
  return {{"q", rules.q()}, {"N", std::move(n)}};
}

/// Reads {"q": int, "N": [i][j][k]} without checking the fusion laws.
inline FusionRules rules_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ParseError("fusion rules: expected a JSON object");
  if (!doc.contains("q") || !doc["q"].is_number_integer()) {
    throw ParseError("fusion rules: missing integer field \"q\"");
  }
  if (!doc.contains("N") || !doc["N"].is_array()) {
    throw ParseError("fusion rules: missing array field \"N\"");
  }
  const long q = doc["q"].get<long>();
  if (q < 0) throw ParseError("fusion rules: q must be non-negative");
  if (q > 64) throw ParseError("fusion rules: q is unreasonably large");
  const std::size_t r = static_cast<std::size_t>(q) + 1;
  const auto& n = doc["N"];
  std::vector<int> table;
  table.reserve(r * r * r);
  if (n.size() != r) throw ParseError("fusion rules: N must have q+1 rows");
  for (std::size_t i = 0; i < r; ++i) {
    if (!n[i].is_array() || n[i].size() != r) {
      throw ParseError("fusion rules: N[" + std::to_string(i) + "] must have q+1 entries");
    }
    for (std::size_t j = 0; j < r; ++j) {
      const auto& cell = n[i][j];
      if (!cell.is_array() || cell.size() != r) {
        throw ParseError("fusion rules: N[" + std::to_string(i) + "][" + std::to_string(j) +
                         "] must have q+1 entries");
      }
      for (std::size_t k = 0; k < r; ++k) {
        if (!cell[k].is_number_integer()) {
          throw ParseError("fusion rules: coefficients must be integers");
        }
        const long v = cell[k].get<long>();
        if (v < 0) {
          throw ParseError("fusion rules: negative coefficient at N[" + std::to_string(i) +
                           "][" + std::to_string(j) + "][" + std::to_string(k) + "]");
        }
        table.push_back(static_cast<int>(v));
      }
    }
  }
  return FusionRules(static_cast<int>(q), std::move(table));
}

inline FusionRules parse_rules(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("fusion rules: ") + e.what());
  }
  return rules_from_json(doc);
}

}  // namespace fusionrig

#endif  // FUSIONRIG_FUSION_RULES_HPP
