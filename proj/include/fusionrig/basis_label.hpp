#ifndef FUSIONRIG_BASIS_LABEL_HPP
#define FUSIONRIG_BASIS_LABEL_HPP

#include <cstddef>
#include <functional>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fusionrig {

/// Tag tree naming one specified basis vector. Nodes are immutable and shared,
/// so copying a label is cheap.
class BasisLabel {
 public:
  enum class Kind { Leaf, Sum, Prod };

  static BasisLabel leaf(int generator) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Leaf;
    n->i = generator;
    n->hash = mix(0x9e3779b97f4a7c15ull, static_cast<std::size_t>(generator) + 1);
    return BasisLabel(std::move(n));
  }

  static BasisLabel sum(const BasisLabel& inner, int side) {
    if (side != 0 && side != 1) throw std::invalid_argument("sum tag side must be 0 or 1");
    auto n = std::make_shared<Node>();
    n->kind = Kind::Sum;
    n->left = inner.node_;
    n->i = side;
    n->hash = mix(mix(0x51ed270b27b1f2a3ull, inner.hash()), static_cast<std::size_t>(side));
    return BasisLabel(std::move(n));
  }

  static BasisLabel prod(const BasisLabel& left, const BasisLabel& right, int i, int j, int t,
                         int k) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Prod;
    n->left = left.node_;
    n->right = right.node_;
    n->i = i;
    n->j = j;
    n->t = t;
    n->k = k;
    std::size_t h = mix(0x2545f4914f6cdd1dull, left.hash());
    h = mix(h, right.hash());
    h = mix(h, static_cast<std::size_t>(i));
    h = mix(h, static_cast<std::size_t>(j));
    h = mix(h, static_cast<std::size_t>(t));
    n->hash = mix(h, static_cast<std::size_t>(k));
    return BasisLabel(std::move(n));
  }

  Kind kind() const { return node_->kind; }
  bool is_leaf() const { return kind() == Kind::Leaf; }
  bool is_sum() const { return kind() == Kind::Sum; }
  bool is_prod() const { return kind() == Kind::Prod; }

  /// Leaf: generator index.
  int generator() const { return node_->i; }
  /// Sum: side tag.
  int side() const { return node_->i; }
  /// Sum: wrapped label.
  BasisLabel inner() const { return BasisLabel(node_->left); }
  /// Prod accessors.
  BasisLabel left() const { return BasisLabel(node_->left); }
  BasisLabel right() const { return BasisLabel(node_->right); }
  int i() const { return node_->i; }
  int j() const { return node_->j; }
  int t() const { return node_->t; }
  int k() const { return node_->k; }

  std::size_t hash() const { return node_->hash; }

  friend bool operator==(const BasisLabel& a, const BasisLabel& b) {
    return equal(a.node_.get(), b.node_.get());
  }
  friend bool operator!=(const BasisLabel& a, const BasisLabel& b) { return !(a == b); }

  /// Compact rendering: leaves by generator index, sum tags "(a,s)",
  /// product tags "(a,b,i,j,t)_k".
  std::string to_string() const {
    std::ostringstream out;
    write(out, node_.get());
    return out.str();
  }

  /// Compact rendering for traces: the n-th leaf from the left is printed as
  /// names[n] and product tags as "(l,r)_k".
  std::string to_short_string(const std::vector<std::string>& names) const {
    std::ostringstream out;
    std::size_t next = 0;
    write_short(out, node_.get(), names, next);
    return out.str();
  }

 private:
  struct Node {
    Kind kind = Kind::Leaf;
    std::shared_ptr<const Node> left;
    std::shared_ptr<const Node> right;
    int i = 0;
    int j = 0;
    int t = 0;
    int k = 0;
    std::size_t hash = 0;
  };

  explicit BasisLabel(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static std::size_t mix(std::size_t h, std::size_t v) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
  }

  static bool equal(const Node* a, const Node* b) {
    while (true) {
      if (a == b) return true;
      if (a->hash != b->hash || a->kind != b->kind || a->i != b->i) return false;
      switch (a->kind) {
        case Kind::Leaf:
          return true;
        case Kind::Sum:
          a = a->left.get();
          b = b->left.get();
          continue;
        case Kind::Prod:
          if (a->j != b->j || a->t != b->t || a->k != b->k) return false;
          if (!equal(a->left.get(), b->left.get())) return false;
          a = a->right.get();
          b = b->right.get();
          continue;
      }
      return false;
    }
  }

  static void write(std::ostream& out, const Node* n) {
    switch (n->kind) {
      case Kind::Leaf:
        out << "x" << n->i;
        return;
      case Kind::Sum:
        out << "(";
        write(out, n->left.get());
        out << "," << n->i << ")";
        return;
      case Kind::Prod:
        out << "(";
        write(out, n->left.get());
        out << ",";
        write(out, n->right.get());
        out << "," << n->i << "," << n->j << "," << n->t << ")_" << n->k;
        return;
    }
  }

  static void write_short(std::ostream& out, const Node* n, const std::vector<std::string>& names,
                          std::size_t& next) {
    switch (n->kind) {
      case Kind::Leaf:
        if (next < names.size()) {
          out << names[next];
        } else {
          out << "x" << n->i;
        }
        ++next;
        return;
      case Kind::Sum:
        out << "(";
        write_short(out, n->left.get(), names, next);
        out << "," << n->i << ")";
        return;
      case Kind::Prod:
        out << "(";
        write_short(out, n->left.get(), names, next);
        out << ",";
        write_short(out, n->right.get(), names, next);
        out << ")_" << n->k;
        return;
    }
  }

  std::shared_ptr<const Node> node_;
};

inline std::ostream& operator<<(std::ostream& out, const BasisLabel& l) {
  return out << l.to_string();
}

struct BasisLabelHash {
  std::size_t operator()(const BasisLabel& l) const { return l.hash(); }
};

}  // namespace fusionrig

#endif  // FUSIONRIG_BASIS_LABEL_HPP
