#pragma once

#include "bstark/arith.hpp"

#include <string>
#include <vector>

namespace bstark {

/// Finite abelian group given by its Cayley table; element 0 is the identity.
class AbelianGroup {
 public:
  AbelianGroup() = default;
  AbelianGroup(std::vector<int> table, int size, std::vector<std::string> labels = {});

  /// Z/n1 x Z/n2 x ...; element index is mixed radix, first factor slowest.
  static AbelianGroup cyclic_product(const std::vector<int>& orders);

  int size() const { return n_; }
  int mul(int a, int b) const { return table_[static_cast<std::size_t>(a) * n_ + b]; }
  int inv(int a) const { return inv_[static_cast<std::size_t>(a)]; }
  int pow(int a, long k) const;
  int order(int a) const;
  int exponent() const;
  const std::string& label(int a) const { return labels_[static_cast<std::size_t>(a)]; }

  /// Sorted list of the subgroup generated by gens.
  std::vector<int> subgroup(const std::vector<int>& gens) const;
  /// Generators g_1..g_s of H with H = <g_1> x ... x <g_s> (s minimal is not promised).
  std::vector<int> cyclic_decomposition(const std::vector<int>& subgroup_elems) const;

 private:
  int n_ = 0;
  std::vector<int> table_;
  std::vector<int> inv_;
  std::vector<std::string> labels_;
};

/// chi(g) = zeta_e^{values[g]}, e = exponent of the group.
struct Character {
  int e = 1;
  std::vector<int> values;
  bool is_trivial() const;
  int value(int g) const { return values[static_cast<std::size_t>(g)]; }
  /// Exponent of chi^{-1}.
  int conj_value(int g) const { return (e - values[static_cast<std::size_t>(g)]) % e; }
};

/// All #G characters, found by enumerating images of a generating set.
std::vector<Character> characters(const AbelianGroup& G);

}  // namespace bstark
