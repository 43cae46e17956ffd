#ifndef FUSIONRIG_RANDOM_HPP
#define FUSIONRIG_RANDOM_HPP

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/QR>

#include "fusionrig/rig_construction.hpp"

namespace fusionrig {

using Rng = std::mt19937_64;

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the phases of R's diagonal
/// moved into Q.
inline DenseMatrix random_unitary(std::size_t n, Rng& rng) {
  if (n == 0) return DenseMatrix(0, 0);
  std::normal_distribution<double> g(0.0, 1.0);
  DenseMatrix z(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Eigen::Index r = 0; r < z.rows(); ++r) {
    for (Eigen::Index c = 0; c < z.cols(); ++c) z(r, c) = Complex(g(rng), g(rng));
  }
  Eigen::HouseholderQR<DenseMatrix> qr(z);
  DenseMatrix q = qr.householderQ();
  const DenseMatrix rmat = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index c = 0; c < q.cols(); ++c) {
    const Complex d = rmat(c, c);
    const double a = std::abs(d);
    q.col(c) *= a > 0 ? d / a : Complex(1.0, 0.0);
  }
  return q;
}

/// Random unitary witness between two raw elements of equal dimensions.
inline Witness random_witness(const RawElement& domain, const RawElement& codomain, Rng& rng) {
  std::vector<Matrix> mats;
  for (int k = 0; k < domain.rank(); ++k) mats.push_back(to_sparse(random_unitary(domain.dim(k), rng)));
  return Witness(domain, codomain, std::move(mats));
}

/// Raw element with the given component dimensions, built as a random bracketing of a
/// shuffled sum of generators. Some summands are padded with unit factors so that product
/// tags appear as well.
inline RawElement random_raw_with_dims(const RulesPtr& rules, const std::vector<std::size_t>& dims,
                                       Rng& rng) {
  std::vector<RawElement> pieces;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    for (std::size_t n = 0; n < dims[i]; ++n) {
      RawElement g = generator(rules, static_cast<int>(i));
      switch (rng() % 4) {
        case 0:
          g = raw_mul(raw_one(rules), g);
          break;
        case 1:
          g = raw_mul(g, raw_one(rules));
          break;
        default:
          break;
      }
      pieces.push_back(std::move(g));
    }
  }
  if (pieces.empty()) {
    return (rng() % 2) ? raw_zero(rules) : raw_add(raw_zero(rules), raw_zero(rules));
  }
  std::shuffle(pieces.begin(), pieces.end(), rng);
  if (rng() % 4 == 0) pieces.push_back(raw_zero(rules));
  while (pieces.size() > 1) {
    const std::size_t at = static_cast<std::size_t>(rng() % (pieces.size() - 1));
    RawElement joined = raw_add(pieces[at], pieces[at + 1]);
    pieces[at] = std::move(joined);
    pieces.erase(pieces.begin() + static_cast<std::ptrdiff_t>(at) + 1);
  }
  return pieces.front();
}

inline std::vector<std::size_t> random_dims(int rank, std::size_t max_dim, Rng& rng) {
  std::vector<std::size_t> d(static_cast<std::size_t>(rank));
  for (auto& v : d) v = static_cast<std::size_t>(rng() % (max_dim + 1));
  return d;
}

inline RawElement random_raw_element(const RulesPtr& rules, std::size_t max_dim, Rng& rng) {
  return random_raw_with_dims(rules, random_dims(rules->rank(), max_dim, rng), rng);
}

}  // namespace fusionrig

#endif  // FUSIONRIG_RANDOM_HPP
