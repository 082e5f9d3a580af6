#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace bstark {

using Int = mpz_class;
using Rat = mpq_class;

/// Engine-level failures. Each maps to a distinct CLI exit code.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnsupportedField : ConfigError {
  using ConfigError::ConfigError;
};
struct PrecisionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvariantViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Rat make_rat(long n, long d = 1) {
  Rat r(n, d);
  r.canonicalize();
  return r;
}

inline Rat make_rat(const Int& n, const Int& d) {
  Rat r(n, d);
  r.canonicalize();
  return r;
}

inline Int floor_div(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

/// Non-negative residue of a modulo m (m > 0).
inline Int mod_pos(const Int& a, const Int& m) {
  Int r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

inline Int floor_rat(const Rat& q) {
  return floor_div(q.get_num(), q.get_den());
}

inline bool is_integer(const Rat& q) { return q.get_den() == 1; }

inline Int gcd(const Int& a, const Int& b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline Int lcm(const Int& a, const Int& b) {
  Int l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

/// Inverse of a modulo m; throws if not invertible.
inline Int inv_mod(const Int& a, const Int& m) {
  Int r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
    throw std::domain_error("inv_mod: not invertible");
  return r;
}

/// Image of a rational with denominator prime to m in Z/m.
inline Int rat_mod(const Rat& q, const Int& m) {
  return mod_pos(q.get_num() * inv_mod(q.get_den(), m), m);
}

inline Int ipow(const Int& b, unsigned long e) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

inline bool is_square(const Int& n, Int* root = nullptr) {
  if (n < 0) return false;
  if (mpz_perfect_square_p(n.get_mpz_t()) == 0) return false;
  if (root) mpz_sqrt(root->get_mpz_t(), n.get_mpz_t());
  return true;
}

inline bool is_prime(const Int& n) { return mpz_probab_prime_p(n.get_mpz_t(), 30) > 0; }

inline bool is_squarefree(long n) {
  if (n == 0) return false;
  if (n < 0) n = -n;
  for (long q = 2; q * q <= n; ++q) {
    if (n % (q * q) == 0) return false;
  }
  return true;
}

/// Rational prime factors of |n| with multiplicity.
std::vector<std::pair<long, int>> factor_small(long n);

inline Int to_int(__int128 v) {
  bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-v) : static_cast<unsigned __int128>(v);
  Int hi(static_cast<unsigned long>(u >> 64));
  Int lo(static_cast<unsigned long>(u & ~0ULL));
  Int r = (hi << 64) + lo;
  return neg ? Int(-r) : r;
}

/// Exact conversion; throws std::overflow_error beyond 120 bits.
inline __int128 to_i128(const Int& v) {
  if (mpz_sizeinbase(v.get_mpz_t(), 2) > 120) throw std::overflow_error("value exceeds 120 bits");
  Int a = abs(v);
  unsigned long lo = mpz_get_ui(Int(a & Int("18446744073709551615")).get_mpz_t());
  Int hi_z = a >> 64;
  unsigned long hi = mpz_get_ui(hi_z.get_mpz_t());
  __int128 r = (static_cast<__int128>(hi) << 64) | lo;
  return v < 0 ? -r : r;
}

inline long to_long(const Int& v) {
  if (!v.fits_slong_p()) throw std::overflow_error("integer does not fit in 64 bits: " + v.get_str());
  return v.get_si();
}

inline std::string str(const Rat& q) { return q.get_str(); }

}  // namespace bstark
