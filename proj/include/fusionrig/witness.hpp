#ifndef FUSIONRIG_WITNESS_HPP
#define FUSIONRIG_WITNESS_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "fusionrig/errors.hpp"
#include "fusionrig/raw_element.hpp"

namespace fusionrig {

using Complex = std::complex<double>;
using Matrix = Eigen::SparseMatrix<Complex>;
using DenseMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;

inline constexpr double kDefaultTol = 1e-9;

inline Matrix sparse_identity(std::size_t n) {
  Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  m.setIdentity();
  return m;
}

inline Matrix to_sparse(const DenseMatrix& d) {
  Matrix m = d.sparseView();
  m.makeCompressed();
  return m;
}

/// Max entrywise modulus of a - b. Shapes must agree.
inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return INFINITY;
  Matrix d = a - b;
  double m = 0.0;
  for (int c = 0; c < d.outerSize(); ++c) {
    for (Matrix::InnerIterator it(d, c); it; ++it) m = std::max(m, std::abs(it.value()));
  }
  return m;
}

/// Marked isomorphism between two raw elements: one unitary per component,
/// columns indexed by domain labels and rows by codomain labels.
class Witness {
 public:
  Witness() = default;

  Witness(RawElement domain, RawElement codomain, std::vector<Matrix> mats)
      : domain_(std::move(domain)), codomain_(std::move(codomain)), mats_(std::move(mats)) {
    require_same_rules(domain_, codomain_, "witness");
    const int r = domain_.rank();
    if (mats_.size() != static_cast<std::size_t>(r)) {
      throw std::invalid_argument("witness: expected q+1 matrices");
    }
    for (int k = 0; k < r; ++k) {
      const auto& m = mats_[static_cast<std::size_t>(k)];
      if (domain_.dim(k) != codomain_.dim(k)) {
        throw std::invalid_argument("witness: component " + std::to_string(k) +
                                    " dimensions differ between domain and codomain");
      }
      if (static_cast<std::size_t>(m.rows()) != codomain_.dim(k) ||
          static_cast<std::size_t>(m.cols()) != domain_.dim(k)) {
        throw std::invalid_argument("witness: matrix shape mismatch in component " +
                                    std::to_string(k));
      }
    }
  }

  const RawElement& domain() const { return domain_; }
  const RawElement& codomain() const { return codomain_; }
  const std::vector<Matrix>& mats() const { return mats_; }
  const Matrix& mat(int k) const { return mats_[static_cast<std::size_t>(k)]; }
  int rank() const { return domain_.rank(); }

  DenseMatrix dense(int k) const { return DenseMatrix(mat(k)); }

 private:
  RawElement domain_;
  RawElement codomain_;
  std::vector<Matrix> mats_;
};

inline Witness identity_witness(const RawElement& a) {
  std::vector<Matrix> mats;
  for (int k = 0; k < a.rank(); ++k) mats.push_back(sparse_identity(a.dim(k)));
  return Witness(a, a, std::move(mats));
}

inline Witness invert(const Witness& xi) {
  std::vector<Matrix> mats;
  for (const auto& m : xi.mats()) {
    Matrix t = m.adjoint();
    t.makeCompressed();
    mats.push_back(std::move(t));
  }
  return Witness(xi.codomain(), xi.domain(), std::move(mats));
}

/// Diagrammatic composition: apply xi first, then eta.
inline Witness compose(const Witness& xi, const Witness& eta) {
  if (xi.codomain() != eta.domain()) {
    throw EndpointMismatch("compose: codomain of the first witness is not the domain of the second");
  }
  std::vector<Matrix> mats;
  for (int k = 0; k < xi.rank(); ++k) {
    Matrix m = eta.mat(k) * xi.mat(k);
    m.prune(Complex(0.0, 0.0), 1e-300);
    mats.push_back(std::move(m));
  }
  return Witness(xi.domain(), eta.codomain(), std::move(mats));
}

/// Left-to-right composition of a chain.
inline Witness compose_all(const std::vector<Witness>& chain) {
  if (chain.empty()) throw std::invalid_argument("compose_all: empty chain");
  Witness out = chain.front();
  for (std::size_t n = 1; n < chain.size(); ++n) out = compose(out, chain[n]);
  return out;
}

inline double matrix_distance(const Witness& xi, const Witness& eta) {
  double m = 0.0;
  for (int k = 0; k < xi.rank(); ++k) m = std::max(m, max_abs_diff(xi.mat(k), eta.mat(k)));
  return m;
}

inline bool witness_equal(const Witness& xi, const Witness& eta, double tol = kDefaultTol) {
  if (xi.domain() != eta.domain() || xi.codomain() != eta.codomain()) return false;
  return matrix_distance(xi, eta) <= tol;
}

/// Max entrywise deviation of the matrices from the identity.
inline double distance_from_identity(const Witness& xi) {
  double m = 0.0;
  for (int k = 0; k < xi.rank(); ++k) {
    m = std::max(m, max_abs_diff(xi.mat(k), sparse_identity(xi.domain().dim(k))));
  }
  return m;
}

/// Component with the largest deviation from the identity, or -1 if all are within tol.
inline int worst_component(const Witness& xi, double tol) {
  int worst = -1;
  double m = tol;
  for (int k = 0; k < xi.rank(); ++k) {
    const double d = max_abs_diff(xi.mat(k), sparse_identity(xi.domain().dim(k)));
    if (d > m) {
      m = d;
      worst = k;
    }
  }
  return worst;
}

/// True iff every matrix is a permutation matrix to tolerance.
inline bool is_basic(const Witness& xi, double tol = kDefaultTol) {
  for (const auto& sm : xi.mats()) {
    const DenseMatrix m(sm);
    const auto n = m.rows();
    std::vector<int> row_hits(static_cast<std::size_t>(n), 0);
    for (Eigen::Index c = 0; c < n; ++c) {
      int hits = 0;
      for (Eigen::Index r = 0; r < n; ++r) {
        const Complex v = m(r, c);
        if (std::abs(v - Complex(1.0, 0.0)) <= tol) {
          ++hits;
          ++row_hits[static_cast<std::size_t>(r)];
        } else if (std::abs(v) > tol) {
          return false;
        }
      }
      if (hits != 1) return false;
    }
    for (int h : row_hits) {
      if (h != 1) return false;
    }
  }
  return true;
}

inline bool is_unitary(const Witness& xi, double tol = kDefaultTol) {
  for (std::size_t k = 0; k < xi.mats().size(); ++k) {
    const Matrix& m = xi.mats()[k];
    Matrix p = m.adjoint() * m;
    if (max_abs_diff(p, sparse_identity(static_cast<std::size_t>(m.cols()))) > tol) return false;
  }
  return true;
}

/// Basic witness sending each domain label to rewrite(label) in the codomain.
inline Witness basic_witness(const RawElement& domain, const RawElement& codomain,
                             const std::function<BasisLabel(const BasisLabel&)>& rewrite) {
  require_same_rules(domain, codomain, "basic witness");
  std::vector<Matrix> mats;
  for (int k = 0; k < domain.rank(); ++k) {
    const auto& labels = domain.component(k);
    if (labels.size() != codomain.dim(k)) {
      throw std::invalid_argument("basic witness: dimension mismatch in component " +
                                  std::to_string(k));
    }
    const auto n = static_cast<Eigen::Index>(labels.size());
    Matrix m(n, n);
    m.reserve(Eigen::VectorXi::Constant(n, 1));
    for (std::size_t c = 0; c < labels.size(); ++c) {
      const BasisLabel target = rewrite(labels[c]);
      const auto row = codomain.index_of(k, target);
      if (!row) {
        throw std::logic_error("basic witness: image " + target.to_string() + " of " +
                               labels[c].to_string() + " is not a codomain label");
      }
      m.insert(static_cast<Eigen::Index>(*row), static_cast<Eigen::Index>(c)) = Complex(1.0, 0.0);
    }
    m.makeCompressed();
    mats.push_back(std::move(m));
  }
  return Witness(domain, codomain, std::move(mats));
}

/// Same matrices as xi, re-marked with new endpoints of matching dimensions.
inline Witness remark(const Witness& xi, const RawElement& domain, const RawElement& codomain) {
  return Witness(domain, codomain, xi.mats());
}

/// Finitely supported formal combination of the labels of one component.
struct Vector {
  int component = 0;
  std::vector<std::pair<BasisLabel, Complex>> terms;
};

inline double norm(const Vector& v) {
  double s = 0.0;
  for (const auto& [label, amp] : v.terms) s += std::norm(amp);
  return std::sqrt(s);
}

inline Vector apply(const Witness& xi, const Vector& v) {
  const int k = v.component;
  if (k < 0 || k >= xi.rank()) throw std::out_of_range("apply: component out of range");
  const auto n = static_cast<Eigen::Index>(xi.domain().dim(k));
  Eigen::Matrix<Complex, Eigen::Dynamic, 1> x = Eigen::Matrix<Complex, Eigen::Dynamic, 1>::Zero(n);
  for (const auto& [label, amp] : v.terms) {
    const auto idx = xi.domain().index_of(k, label);
    if (!idx) throw std::invalid_argument("apply: unknown label " + label.to_string());
    x(static_cast<Eigen::Index>(*idx)) += amp;
  }
  const Eigen::Matrix<Complex, Eigen::Dynamic, 1> y = xi.mat(k) * x;
  Vector out{k, {}};
  const auto& labels = xi.codomain().component(k);
  for (Eigen::Index r = 0; r < y.size(); ++r) {
    if (y(r) != Complex(0.0, 0.0)) out.terms.emplace_back(labels[static_cast<std::size_t>(r)], y(r));
  }
  return out;
}

}  // namespace fusionrig

#endif  // FUSIONRIG_WITNESS_HPP
