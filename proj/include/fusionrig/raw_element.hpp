#ifndef FUSIONRIG_RAW_ELEMENT_HPP
#define FUSIONRIG_RAW_ELEMENT_HPP

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "fusionrig/basis_label.hpp"
#include "fusionrig/errors.hpp"
#include "fusionrig/fusion_rules.hpp"

namespace fusionrig {

using RulesPtr = std::shared_ptr<const FusionRules>;

inline RulesPtr make_rules(FusionRules rules) {
  return std::make_shared<const FusionRules>(std::move(rules));
}

inline bool same_rules(const RulesPtr& a, const RulesPtr& b) {
  return a == b || (a && b && *a == *b);
}

/// A (q+1)-tuple of based spaces, one ordered label list per component.
class RawElement {
 public:
  using Component = std::vector<BasisLabel>;

  RawElement() = default;

  RawElement(RulesPtr rules, std::vector<Component> components)
      : rules_(std::move(rules)) {
    auto data = std::make_shared<Data>();
    if (!rules_) throw std::invalid_argument("raw element: null rules");
    if (components.size() != static_cast<std::size_t>(rules_->rank())) {
      throw std::invalid_argument("raw element: expected q+1 components");
    }
    data->components = std::move(components);
    std::size_t h = 0xcbf29ce484222325ull;
    data->index.resize(data->components.size());
    for (std::size_t k = 0; k < data->components.size(); ++k) {
      const auto& comp = data->components[k];
      auto& idx = data->index[k];
      idx.reserve(comp.size());
      h = (h ^ (comp.size() + 0x100 * k)) * 0x100000001b3ull;
      for (std::size_t n = 0; n < comp.size(); ++n) {
        h = (h ^ comp[n].hash()) * 0x100000001b3ull;
        if (!idx.emplace(comp[n], n).second) {
          throw std::invalid_argument("raw element: duplicate label " + comp[n].to_string() +
                                      " in component " + std::to_string(k));
        }
      }
    }
    data->hash = h;
    data_ = std::move(data);
  }

  const RulesPtr& rules_ptr() const { return rules_; }
  const FusionRules& rules() const { return *rules_; }
  int rank() const { return rules_->rank(); }

  const std::vector<Component>& components() const { return data_->components; }
  const Component& component(int k) const { return data_->components[static_cast<std::size_t>(k)]; }
  std::size_t dim(int k) const { return component(k).size(); }

  std::vector<std::size_t> dims() const {
    std::vector<std::size_t> out;
    for (const auto& c : data_->components) out.push_back(c.size());
    return out;
  }

  std::size_t total_dim() const {
    std::size_t n = 0;
    for (const auto& c : data_->components) n += c.size();
    return n;
  }

  std::optional<std::size_t> index_of(int k, const BasisLabel& label) const {
    const auto& idx = data_->index[static_cast<std::size_t>(k)];
    auto it = idx.find(label);
    if (it == idx.end()) return std::nullopt;
    return it->second;
  }

  std::size_t hash() const { return data_->hash; }

  friend bool operator==(const RawElement& a, const RawElement& b) {
    if (a.data_ == b.data_) return same_rules(a.rules_, b.rules_);
    if (!a.data_ || !b.data_) return false;
    if (a.data_->hash != b.data_->hash) return false;
    if (!same_rules(a.rules_, b.rules_)) return false;
    return a.data_->components == b.data_->components;
  }
  friend bool operator!=(const RawElement& a, const RawElement& b) { return !(a == b); }

  std::string describe() const {
    std::string out = "(";
    for (std::size_t k = 0; k < data_->components.size(); ++k) {
      if (k) out += "; ";
      const auto& comp = data_->components[k];
      for (std::size_t n = 0; n < comp.size(); ++n) {
        if (n) out += ", ";
        out += comp[n].to_string();
      }
    }
    return out + ")";
  }

 private:
  struct Data {
    std::vector<Component> components;
    std::vector<std::unordered_map<BasisLabel, std::size_t, BasisLabelHash>> index;
    std::size_t hash = 0;
  };

  RulesPtr rules_;
  std::shared_ptr<const Data> data_;
};

struct RawElementHash {
  std::size_t operator()(const RawElement& a) const { return a.hash(); }
};

inline void require_same_rules(const RawElement& a, const RawElement& b, const char* what) {
  if (!same_rules(a.rules_ptr(), b.rules_ptr())) {
    throw RulesMismatch(std::string(what) + ": operands use different fusion rules");
  }
}

}  // namespace fusionrig

#endif  // FUSIONRIG_RAW_ELEMENT_HPP
