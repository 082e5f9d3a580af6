#pragma once

#include "bstark/cyclotomic.hpp"
#include "bstark/group.hpp"
#include "bstark/ray_class.hpp"

#include <memory>
#include <string>
#include <vector>

namespace bstark {

enum class BaseRing { rational, integer, modular };

/// Element of Q[G], Z[G] or Z/p^k[G]; coefficients indexed by the group's element order.
class GroupRingElement {
 public:
  GroupRingElement() = default;
  /// Zero element.
  GroupRingElement(std::shared_ptr<const AbelianGroup> G, BaseRing ring = BaseRing::integer, const Int& modulus = 0);

  static GroupRingElement from_coefficients(std::shared_ptr<const AbelianGroup> G, std::vector<Rat> coefficients,
                                            BaseRing ring = BaseRing::integer, const Int& modulus = 0);
  /// The group element g (or a multiple of it).
  GroupRingElement basis(int g, const Rat& scale = 1) const;
  GroupRingElement constant(const Rat& v) const { return basis(0, v); }
  /// Sum of the elements of a subgroup.
  GroupRingElement norm(const std::vector<int>& subgroup) const;

  const AbelianGroup& group() const { return *G_; }
  const std::shared_ptr<const AbelianGroup>& group_ptr() const { return G_; }
  BaseRing ring() const { return ring_; }
  const Int& modulus() const { return modulus_; }
  const std::vector<Rat>& coefficients() const { return c_; }
  const Rat& operator[](int g) const { return c_[static_cast<std::size_t>(g)]; }

  bool is_zero() const;
  bool is_integral() const;
  /// Least common denominator of the coefficients.
  Int denominator() const;
  Rat augmentation() const;
  /// Involution induced by g -> g^{-1}.
  GroupRingElement sharp() const;
  /// The same coefficients viewed in another base ring.
  GroupRingElement in_ring(BaseRing ring, const Int& modulus = 0) const;

  friend GroupRingElement operator+(const GroupRingElement& x, const GroupRingElement& y);
  friend GroupRingElement operator-(const GroupRingElement& x, const GroupRingElement& y);
  friend GroupRingElement operator*(const GroupRingElement& x, const GroupRingElement& y);
  friend GroupRingElement operator*(const Rat& s, const GroupRingElement& x);
  GroupRingElement operator-() const;
  friend bool operator==(const GroupRingElement& x, const GroupRingElement& y);

  /// "[c_0, c_1, ...]" in group element order.
  std::string to_string() const;

 private:
  void check_compatible(const GroupRingElement& o) const;
  void reduce();

  std::shared_ptr<const AbelianGroup> G_;
  BaseRing ring_ = BaseRing::integer;
  Int modulus_ = 0;
  std::vector<Rat> c_;
};

/// Row-style Hermite normal form of an integer lattice: echelon rows, positive
/// pivots, entries above each pivot reduced into [0, pivot). Zero rows are dropped.
std::vector<std::vector<Int>> hermite_form(std::vector<std::vector<Int>> rows);

/// Ideal (or fractional ideal) generated by finitely many group ring elements.
/// Membership is decided on the Z-lattice spanned by the G-translates of
/// denominator * generators (plus modulus * Z[G] for Z/p^k[G]).
class GroupRingIdeal {
 public:
  GroupRingIdeal() = default;
  GroupRingIdeal(std::shared_ptr<const AbelianGroup> G, std::vector<GroupRingElement> generators,
                 BaseRing ring = BaseRing::integer, const Int& modulus = 0);

  static GroupRingIdeal unit(std::shared_ptr<const AbelianGroup> G, BaseRing ring = BaseRing::integer,
                             const Int& modulus = 0);
  static GroupRingIdeal zero(std::shared_ptr<const AbelianGroup> G, BaseRing ring = BaseRing::integer,
                             const Int& modulus = 0);

  const std::vector<GroupRingElement>& generators() const { return gens_; }
  const AbelianGroup& group() const { return *G_; }
  const std::shared_ptr<const AbelianGroup>& group_ptr() const { return G_; }
  BaseRing ring() const { return ring_; }
  const Int& modulus() const { return modulus_; }
  /// Common denominator D cleared before the lattice is formed.
  const Int& denominator() const { return den_; }
  /// Hermite basis of D times the ideal, as rows of coefficient vectors.
  const std::vector<std::vector<Int>>& lattice() const { return lattice_; }

  bool contains(const GroupRingElement& x) const;
  bool contains(const GroupRingIdeal& other) const;
  bool is_unit() const;
  bool is_integral() const;
  /// Z-basis of the ideal as group ring elements.
  std::vector<GroupRingElement> basis_elements() const;

  friend GroupRingIdeal operator+(const GroupRingIdeal& a, const GroupRingIdeal& b);
  friend GroupRingIdeal operator*(const GroupRingIdeal& a, const GroupRingIdeal& b);
  friend GroupRingIdeal operator*(const GroupRingElement& x, const GroupRingIdeal& a);
  friend bool operator==(const GroupRingIdeal& a, const GroupRingIdeal& b) { return a.contains(b) && b.contains(a); }

  /// One generator per line as a coefficient vector; header names the column order.
  std::string dump() const;

 private:
  std::shared_ptr<const AbelianGroup> G_;
  BaseRing ring_ = BaseRing::integer;
  Int modulus_ = 0;
  std::vector<GroupRingElement> gens_;
  Int den_ = 1;
  std::vector<std::vector<Int>> lattice_;
};

using GroupRingMatrix = std::vector<std::vector<GroupRingElement>>;

/// Determinant over the commutative group ring (Laplace expansion).
GroupRingElement determinant(const GroupRingMatrix& a);

/// Ideal of (n-i) x (n-i) minors of an n x m presentation matrix. For i >= n the
/// empty minor makes it the unit ideal; for n - i > m it is the zero ideal.
GroupRingIdeal fitting_ideal(const GroupRingMatrix& a, int i = 0, const std::shared_ptr<const AbelianGroup>& G = nullptr);

/// Ramification data of a place v: I_v, a Frobenius representative sigma_v and a
/// decomposition I_v = J_1 x ... x J_s into cyclic groups given by generators.
struct InertiaDatum {
  std::vector<int> inertia;
  int frobenius = 0;
  std::vector<int> decomposition;
  std::string label;

  /// G_v = <I_v, sigma_v>.
  std::vector<int> decomposition_group(const AbelianGroup& G) const;
  /// Throws ConfigError unless the cyclic factors generate I_v as a direct product.
  void validate(const AbelianGroup& G) const;
};

/// e_v = N I_v / #I_v.
GroupRingElement inertia_idempotent(const std::shared_ptr<const AbelianGroup>& G, const InertiaDatum& v);
/// (N I_v, 1 - sigma_v e_v).
GroupRingIdeal sku_local_factor(const std::shared_ptr<const AbelianGroup>& G, const InertiaDatum& v);

struct SkuIdeal {
  GroupRingIdeal ideal;
  std::vector<GroupRingElement> generators;  // expanded product, each checked integral
  std::string certificate;
};

/// (theta_sharp) prod_v (N I_v, 1 - sigma_v e_v); InvariantViolation if a generator is not integral.
SkuIdeal sku_ideal(const GroupRingElement& theta_sharp, const std::vector<InertiaDatum>& inertia);

struct AKLocalIdeal {
  std::vector<GroupRingIdeal> Z;  // Z_1, ..., Z_s
  GroupRingIdeal augmentation;    // ker(Z[G] -> Z[G/G_v])
  GroupRingIdeal J;               // sum_i Z_i I^{i-1}
  GroupRingIdeal ideal;           // (N I_v, (1 - e_v sigma_v) J)
};

AKLocalIdeal ak_local_ideal(const std::shared_ptr<const AbelianGroup>& G, const InertiaDatum& v);

/// x (1 - c) / 2, the projection to the minus part for the conjugation c.
GroupRingElement minus_part(const GroupRingElement& x, int c);
GroupRingIdeal minus_part(const GroupRingIdeal& I, int c);

/// e_chi = (1/#G) sum_g chi(g)^{-1} g over Q(zeta_e).
std::vector<Cyclotomic> character_idempotent(const AbelianGroup& G, const Character& chi);

/// Inertia data for the primes dividing the conductor that ramify in the ray class field.
std::vector<InertiaDatum> ramification_data(const RayClassGroup& G);

}  // namespace bstark
