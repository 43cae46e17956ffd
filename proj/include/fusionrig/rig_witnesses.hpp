#ifndef FUSIONRIG_RIG_WITNESSES_HPP
#define FUSIONRIG_RIG_WITNESSES_HPP

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fusionrig/rig_construction.hpp"

namespace fusionrig {

// ---------------------------------------------------------------------------
// Tag-manipulation witnesses

/// (A+B)+C -> A+(B+C).
inline Witness alpha_plus(const RawElement& a, const RawElement& b, const RawElement& c) {
  require_same_rules(a, b, "alpha_plus");
  require_same_rules(a, c, "alpha_plus");
  return basic_witness(raw_add(raw_add(a, b), c), raw_add(a, raw_add(b, c)), [](const BasisLabel& l) {
    if (l.side() == 1) return BasisLabel::sum(BasisLabel::sum(l.inner(), 1), 1);
    const BasisLabel in = l.inner();
    if (in.side() == 0) return BasisLabel::sum(in.inner(), 0);
    return BasisLabel::sum(BasisLabel::sum(in.inner(), 0), 1);
  });
}

struct UnitPair {
  Witness lambda;
  Witness rho;
};

/// lambda: 0+A -> A and rho: A+0 -> A.
inline UnitPair unit_plus(const RawElement& a) {
  const RawElement zero = raw_zero(a.rules_ptr());
  auto strip = [](const BasisLabel& l) { return l.inner(); };
  return {basic_witness(raw_add(zero, a), a, strip), basic_witness(raw_add(a, zero), a, strip)};
}

inline Witness lambda_plus(const RawElement& a) { return unit_plus(a).lambda; }
inline Witness rho_plus(const RawElement& a) { return unit_plus(a).rho; }

/// A+B -> B+A.
inline Witness gamma_plus(const RawElement& a, const RawElement& b) {
  require_same_rules(a, b, "gamma_plus");
  return basic_witness(raw_add(a, b), raw_add(b, a),
                       [](const BasisLabel& l) { return BasisLabel::sum(l.inner(), 1 - l.side()); });
}

/// lambda: 1xA -> A and rho: Ax1 -> A.
inline UnitPair unit_times(const RawElement& a) {
  const RawElement one = raw_one(a.rules_ptr());
  return {basic_witness(raw_mul(one, a), a, [](const BasisLabel& l) { return l.right(); }),
          basic_witness(raw_mul(a, one), a, [](const BasisLabel& l) { return l.left(); })};
}

inline Witness lambda_times(const RawElement& a) { return unit_times(a).lambda; }
inline Witness rho_times(const RawElement& a) { return unit_times(a).rho; }

/// A(B+C) -> AB+AC.
inline Witness delta(const RawElement& a, const RawElement& b, const RawElement& c) {
  require_same_rules(a, b, "delta");
  require_same_rules(a, c, "delta");
  return basic_witness(raw_mul(a, raw_add(b, c)), raw_add(raw_mul(a, b), raw_mul(a, c)),
                       [](const BasisLabel& l) {
                         const BasisLabel r = l.right();
                         return BasisLabel::sum(
                             BasisLabel::prod(l.left(), r.inner(), l.i(), l.j(), l.t(), l.k()),
                             r.side());
                       });
}

/// (B+C)A -> BA+CA. The multiplier A comes first in the argument list.
inline Witness delta_sharp(const RawElement& a, const RawElement& b, const RawElement& c) {
  require_same_rules(a, b, "delta_sharp");
  require_same_rules(a, c, "delta_sharp");
  return basic_witness(raw_mul(raw_add(b, c), a), raw_add(raw_mul(b, a), raw_mul(c, a)),
                       [](const BasisLabel& l) {
                         const BasisLabel s = l.left();
                         return BasisLabel::sum(
                             BasisLabel::prod(s.inner(), l.right(), l.i(), l.j(), l.t(), l.k()),
                             s.side());
                       });
}

/// A x 0 -> 0, the empty witness.
inline Witness epsilon(const RawElement& a) {
  const RawElement zero = raw_zero(a.rules_ptr());
  return basic_witness(raw_mul(a, zero), zero, [](const BasisLabel& l) { return l; });
}

// ---------------------------------------------------------------------------
// Models and derived witnesses

using AlphaKey = std::array<int, 3>;
using GammaKey = std::array<int, 2>;

/// Fusion rules plus base alpha/gamma witnesses on non-unit generators.
class RigModel {
 public:
  RigModel(RulesPtr rules, std::map<AlphaKey, Witness> alpha, std::map<GammaKey, Witness> gamma,
           double tol = 1e-8)
      : rules_(std::move(rules)),
        alpha_(std::move(alpha)),
        gamma_(std::move(gamma)),
        cache_(std::make_shared<Cache>()) {
    const int q = rules_->q();
    for (const auto& [key, w] : alpha_) {
      for (int v : key) {
        if (v < 1 || v > q) throw std::invalid_argument("rig model: alpha index out of range");
      }
      const RawElement x = generator(rules_, key[0]);
      const RawElement y = generator(rules_, key[1]);
      const RawElement z = generator(rules_, key[2]);
      if (w.domain() != raw_mul(raw_mul(x, y), z) || w.codomain() != raw_mul(x, raw_mul(y, z))) {
        throw std::invalid_argument("rig model: alpha entry has wrong endpoints");
      }
      if (!is_unitary(w, tol)) throw std::invalid_argument("rig model: alpha entry is not unitary");
    }
    for (const auto& [key, w] : gamma_) {
      for (int v : key) {
        if (v < 1 || v > q) throw std::invalid_argument("rig model: gamma index out of range");
      }
      const RawElement x = generator(rules_, key[0]);
      const RawElement y = generator(rules_, key[1]);
      if (w.domain() != raw_mul(x, y) || w.codomain() != raw_mul(y, x)) {
        throw std::invalid_argument("rig model: gamma entry has wrong endpoints");
      }
      if (!is_unitary(w, tol)) throw std::invalid_argument("rig model: gamma entry is not unitary");
    }
  }

  /// Builds the base entries from matrix tuples.
  static RigModel from_matrices(RulesPtr rules, const std::map<AlphaKey, std::vector<DenseMatrix>>& alpha,
                                const std::map<GammaKey, std::vector<DenseMatrix>>& gamma,
                                double tol = 1e-8) {
    std::map<AlphaKey, Witness> a;
    for (const auto& [key, mats] : alpha) {
      const RawElement x = generator(rules, key[0]);
      const RawElement y = generator(rules, key[1]);
      const RawElement z = generator(rules, key[2]);
      a.emplace(key, Witness(raw_mul(raw_mul(x, y), z), raw_mul(x, raw_mul(y, z)), sparse_all(mats)));
    }
    std::map<GammaKey, Witness> g;
    for (const auto& [key, mats] : gamma) {
      const RawElement x = generator(rules, key[0]);
      const RawElement y = generator(rules, key[1]);
      g.emplace(key, Witness(raw_mul(x, y), raw_mul(y, x), sparse_all(mats)));
    }
    return RigModel(std::move(rules), std::move(a), std::move(g), tol);
  }

  const RulesPtr& rules_ptr() const { return rules_; }
  const FusionRules& rules() const { return *rules_; }
  const std::map<AlphaKey, Witness>& alpha_base() const { return alpha_; }
  const std::map<GammaKey, Witness>& gamma_base() const { return gamma_; }

  const Witness& alpha_entry(const AlphaKey& key) const {
    auto it = alpha_.find(key);
    if (it == alpha_.end()) {
      throw MissingBaseEntry("rig model: no alpha entry for (" + std::to_string(key[0]) + "," +
                             std::to_string(key[1]) + "," + std::to_string(key[2]) + ")");
    }
    return it->second;
  }

  const Witness& gamma_entry(const GammaKey& key) const {
    auto it = gamma_.find(key);
    if (it == gamma_.end()) {
      throw MissingBaseEntry("rig model: no gamma entry for (" + std::to_string(key[0]) + "," +
                             std::to_string(key[1]) + ")");
    }
    return it->second;
  }

  /// Idempotent memo table for derived witnesses, shared by copies of the model.
  class Cache {
   public:
    using SeqKey = std::pair<int, std::vector<std::vector<int>>>;

    std::optional<Witness> find(const SeqKey& key) const {
      std::lock_guard<std::mutex> lock(mutex_);
      auto it = witnesses_.find(key);
      if (it == witnesses_.end()) return std::nullopt;
      return it->second;
    }

    void store(const SeqKey& key, const Witness& w) {
      std::lock_guard<std::mutex> lock(mutex_);
      witnesses_.emplace(key, w);
    }

    RawElement normal_form(const RulesPtr& rules, const std::vector<int>& seq) {
      {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = forms_.find(seq);
        if (it != forms_.end()) return it->second;
      }
      RawElement nf = fusionrig::normal_form(rules, seq);
      std::lock_guard<std::mutex> lock(mutex_);
      return forms_.emplace(seq, nf).first->second;
    }

    std::size_t size() const {
      std::lock_guard<std::mutex> lock(mutex_);
      return witnesses_.size();
    }

   private:
    mutable std::mutex mutex_;
    std::map<SeqKey, Witness> witnesses_;
    std::map<std::vector<int>, RawElement> forms_;
  };

  Cache& cache() const { return *cache_; }

 private:
  static std::vector<Matrix> sparse_all(const std::vector<DenseMatrix>& mats) {
    std::vector<Matrix> out;
    for (const auto& m : mats) out.push_back(to_sparse(m));
    return out;
  }

  RulesPtr rules_;
  std::map<AlphaKey, Witness> alpha_;
  std::map<GammaKey, Witness> gamma_;
  std::shared_ptr<Cache> cache_;
};

namespace detail {

enum CacheKind { kGammaSeq = 1, kAlphaSeq = 2 };

inline Witness empty_witness(const RawElement& dom, const RawElement& cod) {
  return Witness(dom, cod, std::vector<Matrix>(static_cast<std::size_t>(dom.rank())));
}

inline bool all_empty(const RawElement& a) { return a.total_dim() == 0; }

inline std::vector<int> drop_last(const std::vector<int>& s) {
  return std::vector<int>(s.begin(), s.end() - 1);
}

inline Witness id(const RawElement& a) { return identity_witness(a); }

/// gamma on left-nested normal forms, split on the last summand.
inline Witness gamma_seq(const RigModel& m, const std::vector<int>& sa, const std::vector<int>& sb) {
  const RigModel::Cache::SeqKey key{kGammaSeq, {sa, sb}};
  if (auto hit = m.cache().find(key)) return *hit;

  const RulesPtr& rules = m.rules_ptr();
  const RawElement a = m.cache().normal_form(rules, sa);
  const RawElement b = m.cache().normal_form(rules, sb);
  const RawElement ab = raw_mul(a, b);
  Witness out;
  if (sa.empty() || sb.empty() || all_empty(ab)) {
    out = empty_witness(ab, raw_mul(b, a));
  } else if (sa.size() > 1) {
    const auto p = drop_last(sa);
    const std::vector<int> q{sa.back()};
    const RawElement pn = m.cache().normal_form(rules, p);
    const RawElement qn = m.cache().normal_form(rules, q);
    out = compose_all({delta_sharp(b, pn, qn), witness_add(gamma_seq(m, p, sb), gamma_seq(m, q, sb)),
                       invert(delta(b, pn, qn))});
  } else if (sb.size() > 1) {
    const auto p = drop_last(sb);
    const std::vector<int> q{sb.back()};
    const RawElement pn = m.cache().normal_form(rules, p);
    const RawElement qn = m.cache().normal_form(rules, q);
    out = compose_all({delta(a, pn, qn), witness_add(gamma_seq(m, sa, p), gamma_seq(m, sa, q)),
                       invert(delta_sharp(a, pn, qn))});
  } else if (sa[0] == 0) {
    out = compose(lambda_times(b), invert(rho_times(b)));
  } else if (sb[0] == 0) {
    out = compose(rho_times(a), invert(lambda_times(a)));
  } else {
    out = m.gamma_entry({sa[0], sb[0]});
  }
  m.cache().store(key, out);
  return out;
}

/// alpha on left-nested normal forms; the leftmost summed slot is split first.
inline Witness alpha_seq(const RigModel& m, const std::vector<int>& sa, const std::vector<int>& sb,
                         const std::vector<int>& sc) {
  const RigModel::Cache::SeqKey key{kAlphaSeq, {sa, sb, sc}};
  if (auto hit = m.cache().find(key)) return *hit;

  const RulesPtr& rules = m.rules_ptr();
  const RawElement a = m.cache().normal_form(rules, sa);
  const RawElement b = m.cache().normal_form(rules, sb);
  const RawElement c = m.cache().normal_form(rules, sc);
  const RawElement dom = raw_mul(raw_mul(a, b), c);
  Witness out;
  if (all_empty(dom)) {
    out = empty_witness(dom, raw_mul(a, raw_mul(b, c)));
  } else if (sa.size() > 1) {
    const auto p = drop_last(sa);
    const std::vector<int> q{sa.back()};
    const RawElement pn = m.cache().normal_form(rules, p);
    const RawElement qn = m.cache().normal_form(rules, q);
    out = compose_all({witness_mul(delta_sharp(b, pn, qn), id(c)),
                       delta_sharp(c, raw_mul(pn, b), raw_mul(qn, b)),
                       witness_add(alpha_seq(m, p, sb, sc), alpha_seq(m, q, sb, sc)),
                       invert(delta_sharp(raw_mul(b, c), pn, qn))});
  } else if (sb.size() > 1) {
    const auto p = drop_last(sb);
    const std::vector<int> q{sb.back()};
    const RawElement pn = m.cache().normal_form(rules, p);
    const RawElement qn = m.cache().normal_form(rules, q);
    out = compose_all({witness_mul(delta(a, pn, qn), id(c)),
                       delta_sharp(c, raw_mul(a, pn), raw_mul(a, qn)),
                       witness_add(alpha_seq(m, sa, p, sc), alpha_seq(m, sa, q, sc)),
                       invert(delta(a, raw_mul(pn, c), raw_mul(qn, c))),
                       invert(witness_mul(id(a), delta_sharp(c, pn, qn)))});
  } else if (sc.size() > 1) {
    const auto p = drop_last(sc);
    const std::vector<int> q{sc.back()};
    const RawElement pn = m.cache().normal_form(rules, p);
    const RawElement qn = m.cache().normal_form(rules, q);
    out = compose_all({delta(raw_mul(a, b), pn, qn),
                       witness_add(alpha_seq(m, sa, sb, p), alpha_seq(m, sa, sb, q)),
                       invert(delta(a, raw_mul(b, pn), raw_mul(b, qn))),
                       invert(witness_mul(id(a), delta(b, pn, qn)))});
  } else if (sb[0] == 0) {
    out = compose(witness_mul(rho_times(a), id(c)), invert(witness_mul(id(a), lambda_times(c))));
  } else if (sa[0] == 0) {
    out = compose(witness_mul(lambda_times(b), id(c)), invert(lambda_times(raw_mul(b, c))));
  } else if (sc[0] == 0) {
    out = compose(rho_times(raw_mul(a, b)), invert(witness_mul(id(a), rho_times(b))));
  } else {
    out = m.alpha_entry({sa[0], sb[0], sc[0]});
  }
  m.cache().store(key, out);
  return out;
}

inline void require_model_rules(const RigModel& m, const RawElement& a, const char* what) {
  if (!same_rules(m.rules_ptr(), a.rules_ptr())) {
    throw RulesMismatch(std::string(what) + ": raw element uses different fusion rules than the model");
  }
}

}  // namespace detail

/// A x B -> B x A, transported from the normal forms of A and B.
inline Witness gamma_times(const RigModel& m, const RawElement& a, const RawElement& b) {
  detail::require_model_rules(m, a, "gamma_times");
  detail::require_model_rules(m, b, "gamma_times");
  const auto da = canonical_decomposition(a);
  const auto db = canonical_decomposition(b);
  const Witness core = detail::gamma_seq(m, normal_form_sequence(da.counts), normal_form_sequence(db.counts));
  return compose_all({witness_mul(da.chi, db.chi), core, invert(witness_mul(db.chi, da.chi))});
}

/// (A x B) x C -> A x (B x C), transported from normal forms.
inline Witness alpha_times(const RigModel& m, const RawElement& a, const RawElement& b,
                           const RawElement& c) {
  detail::require_model_rules(m, a, "alpha_times");
  detail::require_model_rules(m, b, "alpha_times");
  detail::require_model_rules(m, c, "alpha_times");
  const auto da = canonical_decomposition(a);
  const auto db = canonical_decomposition(b);
  const auto dc = canonical_decomposition(c);
  const Witness core = detail::alpha_seq(m, normal_form_sequence(da.counts), normal_form_sequence(db.counts),
                                         normal_form_sequence(dc.counts));
  return compose_all({witness_mul(witness_mul(da.chi, db.chi), dc.chi), core,
                      invert(witness_mul(da.chi, witness_mul(db.chi, dc.chi)))});
}

/// Double braiding gamma_{A,B} * gamma_{B,A}.
inline Witness beta(const RigModel& m, const RawElement& a, const RawElement& b) {
  return compose(gamma_times(m, a, b), gamma_times(m, b, a));
}

}  // namespace fusionrig

#endif  // FUSIONRIG_RIG_WITNESSES_HPP
