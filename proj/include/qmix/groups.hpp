// Finite groups given by Cayley tables, permutations, and the regular
// representations.
#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "qmix/common.hpp"

namespace qmix {

/// A permutation of {1..n}; images()[i-1] is the image of i.
class Perm {
 public:
  Perm() = default;
  /// Throws InvalidArgument unless `images` is a bijection on {1..n}.
  explicit Perm(std::vector<int> images);

  static Perm identity(int n);

  int size() const noexcept { return static_cast<int>(images_.size()); }
  /// Image of i, 1-based.
  int operator()(int i) const { return images_.at(static_cast<std::size_t>(i - 1)); }
  const std::vector<int>& images() const noexcept { return images_; }
  bool is_identity() const noexcept;

  friend bool operator==(const Perm&, const Perm&) = default;

 private:
  std::vector<int> images_;
};

/// (p∘q)(i) = p(q(i)).
Perm perm_compose(const Perm& p, const Perm& q);
Perm perm_inverse(const Perm& p);

/// Immutable finite group with dense element ids 0..order-1.
///
/// The underlying table is shared between copies, so passing groups by value
/// is cheap.
class FiniteGroup {
 public:
  /// Builds a group from a Cayley table (row-major, table[g][h] = g·h).
  /// Validates the Latin-square property, finds the identity and inverses,
  /// and checks associativity when order <= 24.
  FiniteGroup(std::vector<std::vector<int>> table, std::vector<std::string> labels = {},
              std::vector<Perm> perms = {});

  int order() const noexcept { return data_->order; }
  int identity() const noexcept { return data_->identity; }
  int mul(int g, int h) const {
    check(g);
    check(h);
    return data_->table[static_cast<std::size_t>(g * data_->order + h)];
  }
  int inverse(int g) const {
    check(g);
    return data_->inverse[static_cast<std::size_t>(g)];
  }
  const std::string& label(int g) const {
    check(g);
    return data_->labels[static_cast<std::size_t>(g)];
  }
  /// Permutation realizing element g; only for groups built by symmetric_group.
  const Perm& perm(int g) const;
  bool has_perms() const noexcept { return !data_->perms.empty(); }
  /// Row-major copy of the table, mostly for serialization.
  std::vector<std::vector<int>> table() const;

  /// Throws InvalidArgument if g is not an element id.
  void check(int g) const;

  friend bool operator==(const FiniteGroup& a, const FiniteGroup& b) {
    return a.data_ == b.data_ || (a.data_->order == b.data_->order && a.data_->table == b.data_->table);
  }

 private:
  struct Data {
    int order = 0;
    int identity = 0;
    std::vector<int> table;
    std::vector<int> inverse;
    std::vector<std::string> labels;
    std::vector<Perm> perms;
  };
  std::shared_ptr<const Data> data_;
};

/// S_n for 1 <= n <= 5. For n = 3 the elements are ordered
/// Q1 = id, Q2 = (1 3 2), Q3 = (1 2 3), Q4 = (2 3), Q5 = (1 2), Q6 = (1 3),
/// so that Q2 sends |a,b,c> to |b,c,a> under the tensor representation.
/// Other n use lexicographic order of the image arrays.
FiniteGroup symmetric_group(int n);

/// Z_n with g·h = (g + h) mod n.
FiniteGroup cyclic_group(int n);

/// Complex coefficient per group element, i.e. an element of C[G].
struct CoeffVector {
  FiniteGroup group;
  CVector coeffs;

  CoeffVector(FiniteGroup g, CVector c);
  static CoeffVector indicator(const FiniteGroup& g, int element);

  cplx operator[](int g) const { return coeffs(g); }
};

/// Left regular representation: entry (x, y) is 1 iff g = x·y^{-1}.
CMatrix left_regular(const FiniteGroup& group, int g);
/// Right regular representation: |s> -> |s·g^{-1}>, i.e. entry (x, y) is 1 iff x = y·g^{-1}.
CMatrix right_regular(const FiniteGroup& group, int g);
/// Sum_g z_g L_g.
CMatrix regular_lincomb(const CoeffVector& z);

}  // namespace qmix
