#pragma once

#include "bstark/arith.hpp"
#include "bstark/quad_real.hpp"

#include <array>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace bstark {

/// Element a + b*omega of a real quadratic field, exact rational coordinates.
///
/// omega satisfies omega^2 = tr*omega - nm; the pair (tr, nm) travels with
/// the value so arithmetic needs no field handle.
class FieldElement {
 public:
  FieldElement() = default;
  FieldElement(Rat a, Rat b, long d);

  static FieldElement from_int(long v, long d) { return FieldElement(Rat(v), Rat(0), d); }

  const Rat& a() const { return a_; }
  const Rat& b() const { return b_; }
  long radicand() const { return d_; }

  FieldElement conj() const;
  Rat norm() const;
  Rat trace() const;
  bool is_zero() const { return a_ == 0 && b_ == 0; }
  bool is_rational() const { return b_ == 0; }
  bool is_integral() const { return is_integer(a_) && is_integer(b_); }

  /// Image under the i-th real embedding (i = 0: sqrt d > 0, i = 1: sqrt d < 0).
  QuadReal embed(int i) const;
  int sign(int i) const { return embed(i).sign(); }
  bool totally_positive() const { return sign(0) > 0 && sign(1) > 0; }

  /// max(|a|, |b|), the coordinate height used for canonical choices.
  Rat height() const;

  FieldElement operator-() const { return FieldElement(-a_, -b_, d_); }
  friend FieldElement operator+(const FieldElement& x, const FieldElement& y);
  friend FieldElement operator-(const FieldElement& x, const FieldElement& y);
  friend FieldElement operator*(const FieldElement& x, const FieldElement& y);
  friend FieldElement operator/(const FieldElement& x, const FieldElement& y);
  friend FieldElement operator*(const Rat& s, const FieldElement& x) { return FieldElement(s * x.a_, s * x.b_, x.d_); }
  friend bool operator==(const FieldElement& x, const FieldElement& y) { return x.a_ == y.a_ && x.b_ == y.b_; }

  FieldElement pow(long e) const;

  std::string to_string() const;
  friend std::ostream& operator<<(std::ostream& os, const FieldElement& x) { return os << x.to_string(); }

  long omega_trace() const { return tr_; }
  long omega_norm() const { return nm_; }

 private:
  Rat a_{0};
  Rat b_{0};
  long d_ = 0;
  long tr_ = 0;
  long nm_ = 0;
};

/// Rank-2 sublattice of Q^2 (coordinates w.r.t. 1, omega) in Hermite form:
/// basis e1 = (x1, y1), e2 = (0, y2), x1 > 0, y2 > 0, 0 <= y1 < y2.
struct Lattice2 {
  Rat x1, y1, y2;

  static Lattice2 span(const std::vector<std::array<Rat, 2>>& vectors);
  bool contains(const Rat& a, const Rat& b) const;
  /// Integer coordinates (k1, k2) with (a, b) = k1 e1 + k2 e2; requires membership.
  std::array<Int, 2> coords(const Rat& a, const Rat& b) const;
  Rat covolume() const { return x1 * y2; }
  friend bool operator==(const Lattice2&, const Lattice2&) = default;
};

class QuadField;

/// Fractional ideal of O_F, stored by canonical generator plus Hermite basis.
class IdealF {
 public:
  IdealF() = default;

  const FieldElement& generator() const { return gen_; }
  const Lattice2& basis() const { return basis_; }
  /// Absolute norm (positive rational).
  const Rat& norm() const { return norm_; }
  FieldElement basis_element(int i) const;

  bool is_integral() const;
  bool contains(const FieldElement& x) const { return basis_.contains(x.a(), x.b()); }
  /// this | other, i.e. other is contained in this.
  bool divides(const IdealF& other) const;
  bool is_one() const { return norm_ == 1 && is_integral(); }

  friend bool operator==(const IdealF& x, const IdealF& y) { return x.basis_ == y.basis_; }
  std::string to_string() const;

 private:
  friend class QuadField;
  FieldElement gen_;
  Lattice2 basis_;
  Rat norm_;
};

struct PrimeIdeal {
  IdealF ideal;
  long q = 0;          // rational prime below
  int residue_degree = 1;
  std::string kind;    // "split", "inert", "ramified"
};

/// Exact real quadratic field Q(sqrt d) of class number one.
class QuadField {
 public:
  /// Throws ConfigError for bad d and UnsupportedField for class number > 1.
  explicit QuadField(long d);

  long d() const { return d_; }
  long discriminant() const { return disc_; }
  long omega_trace() const { return tr_; }
  long omega_norm() const { return nm_; }
  const FieldElement& fundamental_unit() const { return eps0_; }

  FieldElement elt(const Rat& a, const Rat& b) const { return FieldElement(a, b, d_); }
  FieldElement elt(long a, long b = 0) const { return FieldElement(Rat(a), Rat(b), d_); }
  FieldElement omega() const { return elt(0, 1); }
  /// p + q sqrt d written in the (1, omega) basis.
  FieldElement from_surd(const Rat& p, const Rat& q) const;

  IdealF ideal(const FieldElement& generator) const;
  IdealF ideal(long n) const { return ideal(elt(n)); }
  IdealF ideal_from_generators(const std::vector<FieldElement>& gens) const;
  IdealF mul(const IdealF& x, const IdealF& y) const { return ideal(x.generator() * y.generator()); }
  IdealF inverse(const IdealF& x) const { return ideal(elt(1) / x.generator()); }

  /// Canonical generator: sigma_1 > 0, minimal height among unit multiples.
  FieldElement canonical_generator(const FieldElement& g) const;

  /// Prime ideals above the rational prime q (one or two).
  std::vector<PrimeIdeal> primes_above(long q) const;
  /// Prime factorisation of an integral ideal.
  std::vector<std::pair<PrimeIdeal, int>> factor(const IdealF& a) const;
  /// Kronecker symbol (disc / q) for odd primes q: 1 split, -1 inert, 0 ramified.
  int splitting_symbol(long q) const;

  /// Element of the (integral) ideal with |N| = N(ideal), or nullopt if non-principal.
  std::optional<FieldElement> find_generator(const Lattice2& lattice, const Rat& norm) const;

  friend bool operator==(const QuadField& x, const QuadField& y) { return x.d_ == y.d_; }

 private:
  void compute_fundamental_unit();
  void verify_class_number_one() const;

  long d_ = 0;
  long disc_ = 0;
  long tr_ = 0;
  long nm_ = 0;
  FieldElement eps0_;
};

/// Residue ring O_F / n for an integral ideal n, elements indexed 0..size-1.
class ResidueRing {
 public:
  ResidueRing(const QuadField& field, const IdealF& modulus);

  long size() const { return size_; }
  const IdealF& modulus() const { return modulus_; }
  /// Index of the residue of an n-integral element; throws if the
  /// denominator shares a factor with N(n).
  long reduce(const FieldElement& x) const;
  FieldElement lift(long index) const;
  long mul(long i, long j) const;
  bool is_unit(long i) const;
  long one() const { return reduce(FieldElement::from_int(1, d_)); }

 private:
  IdealF modulus_;
  long d_ = 0;
  long x1_ = 1, y1_ = 0, y2_ = 1;
  long size_ = 1;
  long level_ = 1;  // N(n), kills O_F / n
  std::vector<long> mul_;
  std::vector<char> unit_;
};

/// Generator of E(n): totally positive units congruent to 1 mod n.
struct ShintaniUnitGroup {
  FieldElement epsilon;
  long index = 0;  // epsilon = eps0^index
};

ShintaniUnitGroup shintani_unit(const QuadField& field, const IdealF& conductor);

}  // namespace bstark
