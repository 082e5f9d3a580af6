#include "bstark/cyclotomic.hpp"

#include <map>
#include <mutex>
#include <sstream>

namespace bstark {

const std::vector<long>& cyclotomic_polynomial(int n) {
  static std::map<int, std::vector<long>> cache;
  static std::recursive_mutex mu;
  std::lock_guard<std::recursive_mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  // x^n - 1 divided by Phi_d for every proper divisor d.
  std::vector<long> num(static_cast<std::size_t>(n) + 1, 0);
  num[0] = -1;
  num[static_cast<std::size_t>(n)] = 1;
  for (int d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    std::vector<long> den = cyclotomic_polynomial(d);
    // exact division by a monic polynomial
    std::size_t dn = den.size() - 1;
    std::vector<long> q(num.size() - dn, 0);
    for (std::size_t i = num.size(); i-- > dn;) {
      long coef = num[i];
      q[i - dn] = coef;
      for (std::size_t j = 0; j <= dn; ++j) num[i - dn + j] -= coef * den[j];
    }
    num = q;
  }
  return cache.emplace(n, num).first->second;
}

Cyclotomic::Cyclotomic(int e, const Rat& c) : e_(e) {
  std::size_t deg = cyclotomic_polynomial(e).size() - 1;
  c_.assign(deg, Rat(0));
  c_[0] = c;
}

Cyclotomic Cyclotomic::root(int e, long k) {
  Cyclotomic z(e);
  k = ((k % e) + e) % e;
  std::vector<Rat> poly(static_cast<std::size_t>(k) + 1, Rat(0));
  poly[static_cast<std::size_t>(k)] = 1;
  z.reduce(poly);
  z.c_ = poly;
  return z;
}

void Cyclotomic::reduce(std::vector<Rat>& poly) const {
  const auto& phi = cyclotomic_polynomial(e_);
  std::size_t deg = phi.size() - 1;
  for (std::size_t i = poly.size(); i-- > deg;) {
    Rat coef = poly[i];
    if (coef == 0) continue;
    for (std::size_t j = 0; j <= deg; ++j) poly[i - deg + j] -= coef * phi[j];
  }
  poly.resize(deg, Rat(0));
}

bool Cyclotomic::is_zero() const {
  for (const auto& x : c_)
    if (x != 0) return false;
  return true;
}

bool Cyclotomic::is_rational() const {
  for (std::size_t i = 1; i < c_.size(); ++i)
    if (c_[i] != 0) return false;
  return true;
}

Rat Cyclotomic::rational_value() const {
  if (!is_rational()) throw std::logic_error("Cyclotomic: value is not rational");
  return c_[0];
}

Cyclotomic operator+(const Cyclotomic& x, const Cyclotomic& y) {
  Cyclotomic r = x;
  for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] += y.c_[i];
  return r;
}

Cyclotomic operator-(const Cyclotomic& x, const Cyclotomic& y) {
  Cyclotomic r = x;
  for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] -= y.c_[i];
  return r;
}

Cyclotomic operator*(const Cyclotomic& x, const Cyclotomic& y) {
  std::vector<Rat> prod(x.c_.size() + y.c_.size(), Rat(0));
  for (std::size_t i = 0; i < x.c_.size(); ++i) {
    if (x.c_[i] == 0) continue;
    for (std::size_t j = 0; j < y.c_.size(); ++j) prod[i + j] += x.c_[i] * y.c_[j];
  }
  Cyclotomic r(x.e_);
  r.reduce(prod);
  r.c_ = prod;
  return r;
}

Cyclotomic operator*(const Rat& s, const Cyclotomic& x) {
  Cyclotomic r = x;
  for (auto& c : r.c_) c *= s;
  return r;
}

std::string Cyclotomic::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    if (!first) os << " + ";
    os << c_[i];
    if (i > 0) os << "*z^" << i;
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

}  // namespace bstark
