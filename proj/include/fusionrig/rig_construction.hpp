#ifndef FUSIONRIG_RIG_CONSTRUCTION_HPP
#define FUSIONRIG_RIG_CONSTRUCTION_HPP

#include <cstddef>
#include <vector>

#include "fusionrig/raw_element.hpp"
#include "fusionrig/witness.hpp"

namespace fusionrig {

inline RawElement raw_zero(const RulesPtr& rules) {
  return RawElement(rules, std::vector<RawElement::Component>(static_cast<std::size_t>(rules->rank())));
}

inline RawElement generator(const RulesPtr& rules, int i) {
  if (i < 0 || i > rules->q()) throw std::out_of_range("generator index out of range");
  std::vector<RawElement::Component> comps(static_cast<std::size_t>(rules->rank()));
  comps[static_cast<std::size_t>(i)].push_back(BasisLabel::leaf(i));
  return RawElement(rules, std::move(comps));
}

inline RawElement raw_one(const RulesPtr& rules) { return generator(rules, 0); }

struct RawConstants {
  RawElement zero;
  RawElement one;
  std::vector<RawElement> generators;
};

inline RawConstants raw_constants(const RulesPtr& rules) {
  RawConstants c{raw_zero(rules), raw_one(rules), {}};
  for (int i = 0; i <= rules->q(); ++i) c.generators.push_back(generator(rules, i));
  return c;
}

inline RawElement raw_add(const RawElement& a, const RawElement& b) {
  require_same_rules(a, b, "raw_add");
  std::vector<RawElement::Component> comps(static_cast<std::size_t>(a.rank()));
  for (int k = 0; k < a.rank(); ++k) {
    auto& out = comps[static_cast<std::size_t>(k)];
    out.reserve(a.dim(k) + b.dim(k));
    for (const auto& l : a.component(k)) out.push_back(BasisLabel::sum(l, 0));
    for (const auto& l : b.component(k)) out.push_back(BasisLabel::sum(l, 1));
  }
  return RawElement(a.rules_ptr(), std::move(comps));
}

/// Component k lists (a, b, i, j, t) ordered by i, j, t, then position of a, then of b.
inline RawElement raw_mul(const RawElement& a, const RawElement& b) {
  require_same_rules(a, b, "raw_mul");
  const FusionRules& n = a.rules();
  const int r = a.rank();
  std::vector<RawElement::Component> comps(static_cast<std::size_t>(r));
  for (int k = 0; k < r; ++k) {
    auto& out = comps[static_cast<std::size_t>(k)];
    for (int i = 0; i < r; ++i) {
      if (a.dim(i) == 0) continue;
      for (int j = 0; j < r; ++j) {
        if (b.dim(j) == 0) continue;
        for (int t = 1; t <= n(i, j, k); ++t) {
          for (const auto& la : a.component(i)) {
            for (const auto& lb : b.component(j)) out.push_back(BasisLabel::prod(la, lb, i, j, t, k));
          }
        }
      }
    }
  }
  return RawElement(a.rules_ptr(), std::move(comps));
}

namespace detail {

inline void append_block(std::vector<Eigen::Triplet<Complex>>& trips, const Matrix& m,
                         Eigen::Index offset) {
  for (int c = 0; c < m.outerSize(); ++c) {
    for (Matrix::InnerIterator it(m, c); it; ++it) {
      trips.emplace_back(it.row() + offset, it.col() + offset, it.value());
    }
  }
}

inline void append_kron(std::vector<Eigen::Triplet<Complex>>& trips, const Matrix& x,
                        const Matrix& y, Eigen::Index offset) {
  const Eigen::Index ny = y.rows();
  for (int cx = 0; cx < x.outerSize(); ++cx) {
    for (Matrix::InnerIterator ix(x, cx); ix; ++ix) {
      for (int cy = 0; cy < y.outerSize(); ++cy) {
        for (Matrix::InnerIterator iy(y, cy); iy; ++iy) {
          trips.emplace_back(offset + ix.row() * ny + iy.row(), offset + ix.col() * ny + iy.col(),
                             ix.value() * iy.value());
        }
      }
    }
  }
}

}  // namespace detail

/// Block-diagonal sum; tags are left unchanged.
inline Witness witness_add(const Witness& xi, const Witness& eta) {
  require_same_rules(xi.domain(), eta.domain(), "witness_add");
  std::vector<Matrix> mats;
  for (int k = 0; k < xi.rank(); ++k) {
    const Eigen::Index na = xi.mat(k).rows();
    const Eigen::Index n = na + eta.mat(k).rows();
    std::vector<Eigen::Triplet<Complex>> trips;
    trips.reserve(static_cast<std::size_t>(xi.mat(k).nonZeros() + eta.mat(k).nonZeros()));
    detail::append_block(trips, xi.mat(k), 0);
    detail::append_block(trips, eta.mat(k), na);
    Matrix m(n, n);
    m.setFromTriplets(trips.begin(), trips.end());
    mats.push_back(std::move(m));
  }
  return Witness(raw_add(xi.domain(), eta.domain()), raw_add(xi.codomain(), eta.codomain()),
                 std::move(mats));
}

/// Tensor product acting blockwise, one Kronecker block per (i, j, t).
inline Witness witness_mul(const Witness& xi, const Witness& eta) {
  require_same_rules(xi.domain(), eta.domain(), "witness_mul");
  const FusionRules& n = xi.domain().rules();
  const int r = xi.rank();
  std::vector<Matrix> mats;
  for (int k = 0; k < r; ++k) {
    std::vector<Eigen::Triplet<Complex>> trips;
    Eigen::Index offset = 0;
    for (int i = 0; i < r; ++i) {
      const Matrix& x = xi.mat(i);
      if (x.rows() == 0) continue;
      for (int j = 0; j < r; ++j) {
        const Matrix& y = eta.mat(j);
        if (y.rows() == 0) continue;
        for (int t = 1; t <= n(i, j, k); ++t) {
          detail::append_kron(trips, x, y, offset);
          offset += x.rows() * y.rows();
        }
      }
    }
    Matrix m(offset, offset);
    m.setFromTriplets(trips.begin(), trips.end());
    mats.push_back(std::move(m));
  }
  return Witness(raw_mul(xi.domain(), eta.domain()), raw_mul(xi.codomain(), eta.codomain()),
                 std::move(mats));
}

/// Generator sequence of the normal form with the given component counts.
inline std::vector<int> normal_form_sequence(const std::vector<std::size_t>& counts) {
  std::vector<int> seq;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    for (std::size_t n = 0; n < counts[i]; ++n) seq.push_back(static_cast<int>(i));
  }
  return seq;
}

/// Left-nested sum of the listed generators; zero when the list is empty.
inline RawElement normal_form(const RulesPtr& rules, const std::vector<int>& seq) {
  if (seq.empty()) return raw_zero(rules);
  RawElement out = generator(rules, seq.front());
  for (std::size_t n = 1; n < seq.size(); ++n) out = raw_add(out, generator(rules, seq[n]));
  return out;
}

struct CanonicalDecomposition {
  std::vector<std::size_t> counts;
  RawElement normal_form;
  Witness chi;  // A -> normal_form, order preserving
};

inline CanonicalDecomposition canonical_decomposition(const RawElement& a) {
  CanonicalDecomposition d;
  d.counts = a.dims();
  d.normal_form = normal_form(a.rules_ptr(), normal_form_sequence(d.counts));
  std::vector<Matrix> mats;
  for (int k = 0; k < a.rank(); ++k) mats.push_back(sparse_identity(a.dim(k)));
  d.chi = Witness(a, d.normal_form, std::move(mats));
  return d;
}

}  // namespace fusionrig

#endif  // FUSIONRIG_RIG_CONSTRUCTION_HPP
