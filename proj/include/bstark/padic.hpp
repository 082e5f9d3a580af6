#pragma once

#include "bstark/field.hpp"

#include <optional>
#include <string>
#include <vector>

namespace bstark {

/// Element x + y omega of O_p = O_F tensor Z_p (p inert) known modulo p^precision.
class PadicElement {
 public:
  PadicElement() = default;
  PadicElement(const QuadField& field, long p, int precision, const Int& x, const Int& y);
  /// Image of a p-integral field element; throws ConfigError if p divides a denominator.
  static PadicElement from_field(const QuadField& field, long p, int precision, const FieldElement& v);

  long p() const { return p_; }
  int precision() const { return prec_; }
  /// The rational integer v in the same ring.
  PadicElement scalar(const Int& v) const;
  const Int& modulus() const { return pm_; }
  const Int& x() const { return x_; }
  const Int& y() const { return y_; }

  bool is_zero() const { return x_ == 0 && y_ == 0; }
  /// min(v(x), v(y)); equals precision() for zero-to-precision.
  int valuation() const;
  bool is_unit() const { return valuation() == 0; }

  friend PadicElement operator+(const PadicElement& a, const PadicElement& b);
  friend PadicElement operator-(const PadicElement& a, const PadicElement& b);
  friend PadicElement operator*(const PadicElement& a, const PadicElement& b);
  /// Inverse of a unit; throws PrecisionError for non-units.
  PadicElement inverse() const;
  /// Power with an arbitrary integer exponent (negative needs a unit). Units lose no precision.
  PadicElement pow(const Int& k) const;
  /// Exact division by p^k; the absolute precision drops by k.
  PadicElement divide_by_p(int k) const;
  PadicElement with_precision(int m) const;
  /// Image of omega's conjugate action x + y omega -> x + y omega'.
  PadicElement conjugate() const;
  Int norm() const;   // modulo p^precision
  Int trace() const;  // modulo p^precision

  /// Agreement modulo p^m (m at most both precisions).
  bool congruent(const PadicElement& other, int m) const;
  friend bool operator==(const PadicElement& a, const PadicElement& b) {
    return a.prec_ == b.prec_ && a.x_ == b.x_ && a.y_ == b.y_;
  }

  std::string to_string() const;

 private:
  void check_compatible(const PadicElement& o) const;
  void reduce();

  long d_ = 0;
  long tr_ = 0;  // omega^2 = tr omega - nm
  long nm_ = 0;
  long p_ = 0;
  int prec_ = 0;
  Int pm_ = 1;
  Int x_ = 0, y_ = 0;
};

/// p^e u with u a unit of O_p.
struct PadicUnitValue {
  long exponent = 0;
  PadicElement unit;

  friend PadicUnitValue operator*(const PadicUnitValue& a, const PadicUnitValue& b) {
    return {a.exponent + b.exponent, a.unit * b.unit};
  }
  PadicUnitValue inverse() const { return {-exponent, unit.inverse()}; }
  /// Equal exponents and unit parts congruent to the common precision.
  bool matches(const PadicUnitValue& other) const;
  std::string to_string() const;
};

/// Element of F_p^* completed-tensor Z_p: a p-integral exponent and a principal unit (= 1 mod p).
struct HatUnitValue {
  Rat exponent;
  PadicElement principal;

  static HatUnitValue from(const PadicUnitValue& v);
  friend HatUnitValue operator*(const HatUnitValue& a, const HatUnitValue& b);
  HatUnitValue inverse() const;
  /// Power by a p-integral rational.
  HatUnitValue pow(const Rat& r) const;
  HatUnitValue sqrt() const { return pow(Rat(1, 2)); }
  bool matches(const HatUnitValue& other) const;
  bool is_one() const;
  std::string to_string() const;
};

/// Principal part <u> = u / teich(u) of a unit: the unique (p^2-1)-th root of u^(p^2-1) in 1 + p O_p.
PadicElement principal_part(const PadicElement& u);

/// r as an integer exponent acting on 1 + p O_p modulo p^m (r must be p-integral).
Int principal_exponent(const Rat& r, long p, int m);

/// Residue class a = x + y omega, 0 <= x, y < p^m, for a coset index x p^m + y.
PadicElement coset_representative(const QuadField& field, long p, int m, long index);

/// Multiplicative Riemann sum prod_a a^mu(a) over unit cosets of O_p / p^m.
///
/// Cosets with equal mu are multiplied together first, so each coset costs one
/// modular multiplication; partial accumulators from different threads merge exactly.
class RiemannAccumulator {
 public:
  RiemannAccumulator(const QuadField& field, long p, int m);

  /// Accumulate a^mu for the coset with index x p^m + y. Non-unit cosets are rejected.
  void add(long index, long mu);
  void merge(const RiemannAccumulator& other);
  PadicElement result() const;
  long cosets() const { return cosets_; }

 private:
  struct Pair {
    __int128 x = 1, y = 0;
  };
  Pair mul(const Pair& a, const Pair& b) const;

  const QuadField* field_;
  long p_;
  int m_;
  __int128 pm_;
  __int128 tr_, nm_;
  std::vector<std::pair<long, Pair>> by_mu_;  // sorted by mu
  long cosets_ = 0;
};

/// riemann_product with a callable measure mu(index) on all unit cosets at level m.
template <class Mu>
PadicElement riemann_product(const QuadField& field, long p, int m, Mu&& mu) {
  RiemannAccumulator acc(field, p, m);
  long pm = 1;
  for (int i = 0; i < m; ++i) pm *= p;
  for (long x = 0; x < pm; ++x) {
    for (long y = 0; y < pm; ++y) {
      if (x % p == 0 && y % p == 0) continue;
      long idx = x * pm + y;
      acc.add(idx, mu(idx));
    }
  }
  return acc.result();
}

struct Recognition {
  std::optional<FieldElement> value;
  Int bound;          // height bound that produced the value (or the last one tried)
  std::string detail; // diagnostics on failure
};

/// Balanced lift a + b omega with |a|, |b| <= bound matching x; requires p^m > 2 bound^2.
std::optional<FieldElement> recognize(const QuadField& field, const PadicElement& x, const Int& bound);

/// Geometric escalation bound = start, 2 start, ... while 2 bound^2 < p^m; first success wins.
Recognition recognize_escalating(const QuadField& field, const PadicElement& x, const Int& start = 1);

}  // namespace bstark
