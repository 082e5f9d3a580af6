#pragma once

#include "bstark/arith.hpp"

#include <string>
#include <vector>

namespace bstark {

/// Exact arithmetic in Q(zeta_e), elements reduced modulo the e-th cyclotomic polynomial.
class Cyclotomic {
 public:
  explicit Cyclotomic(int e, const Rat& c = 0);
  /// zeta_e^k.
  static Cyclotomic root(int e, long k);

  int order() const { return e_; }
  bool is_zero() const;
  bool is_rational() const;
  Rat rational_value() const;  // requires is_rational()

  friend Cyclotomic operator+(const Cyclotomic& x, const Cyclotomic& y);
  friend Cyclotomic operator-(const Cyclotomic& x, const Cyclotomic& y);
  friend Cyclotomic operator*(const Cyclotomic& x, const Cyclotomic& y);
  friend Cyclotomic operator*(const Rat& s, const Cyclotomic& x);
  Cyclotomic& operator+=(const Cyclotomic& y) { return *this = *this + y; }
  friend bool operator==(const Cyclotomic& x, const Cyclotomic& y) { return (x - y).is_zero(); }

  std::string to_string() const;

 private:
  void reduce(std::vector<Rat>& poly) const;
  int e_ = 1;
  std::vector<Rat> c_;  // length phi(e)
};

/// Integer coefficients of the n-th cyclotomic polynomial, constant term first.
const std::vector<long>& cyclotomic_polynomial(int n);

}  // namespace bstark
