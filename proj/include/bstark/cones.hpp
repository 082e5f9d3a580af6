#pragma once

#include "bstark/arith.hpp"
#include "bstark/quad_real.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <vector>

namespace bstark {

template <class S>
using ExactVector = std::vector<S>;

inline int scalar_sign(const Rat& x) { return sgn(x); }
inline int scalar_sign(const QuadReal& x) { return x.sign(); }

inline void scalar_to_mpfr(mpfr_t out, const Rat& x) { mpfr_set_q(out, x.get_mpq_t(), MPFR_RNDN); }
inline void scalar_to_mpfr(mpfr_t out, const QuadReal& x) {
  mpfr_prec_t prec = mpfr_get_prec(out);
  mpfr_t t;
  mpfr_init2(t, prec);
  mpfr_set_si(t, x.radicand(), MPFR_RNDN);
  mpfr_sqrt(t, t, MPFR_RNDN);
  mpfr_mul_q(t, t, x.surd_part().get_mpq_t(), MPFR_RNDN);
  mpfr_add_q(out, t, x.rational_part().get_mpq_t(), MPFR_RNDN);
  mpfr_clear(t);
}

inline double scalar_to_double(const Rat& x) { return x.get_d(); }
inline double scalar_to_double(const QuadReal& x) { return x.to_double(); }

template <class S>
bool all_positive(const ExactVector<S>& v) {
  return std::all_of(v.begin(), v.end(), [](const S& c) { return scalar_sign(c) > 0; });
}

template <class S>
ExactVector<S> componentwise(const ExactVector<S>& x, const ExactVector<S>& y) {
  ExactVector<S> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] * y[i];
  return out;
}

/// Coefficients t with sum_i t_i cols[i] = x, or nullopt if x is outside the span.
/// Throws ConfigError when the columns are linearly dependent.
template <class S>
std::optional<std::vector<S>> solve_columns(const std::vector<ExactVector<S>>& cols, const ExactVector<S>& x) {
  const std::size_t r = cols.size();
  const std::size_t n = x.size();
  std::vector<std::vector<S>> m(n, std::vector<S>(r + 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < r; ++j) m[i][j] = cols[j][i];
    m[i][r] = x[i];
  }
  std::vector<std::size_t> pivot_row(r);
  std::size_t row = 0;
  for (std::size_t j = 0; j < r; ++j) {
    std::size_t p = row;
    while (p < n && scalar_sign(m[p][j]) == 0) ++p;
    if (p == n) throw ConfigError("cone generators are linearly dependent");
    std::swap(m[p], m[row]);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == row || scalar_sign(m[i][j]) == 0) continue;
      S f = m[i][j] / m[row][j];
      for (std::size_t k = j; k <= r; ++k) m[i][k] = m[i][k] - f * m[row][k];
    }
    pivot_row[j] = row++;
  }
  for (std::size_t i = row; i < n; ++i)
    if (scalar_sign(m[i][r]) != 0) return std::nullopt;
  std::vector<S> t(r);
  for (std::size_t j = 0; j < r; ++j) t[j] = m[pivot_row[j]][r] / m[pivot_row[j]][j];
  return t;
}

template <class S>
int determinant_sign(std::vector<ExactVector<S>> rows) {
  const std::size_t n = rows.size();
  int sign = 1;
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t p = j;
    while (p < n && scalar_sign(rows[p][j]) == 0) ++p;
    if (p == n) return 0;
    if (p != j) {
      std::swap(rows[p], rows[j]);
      sign = -sign;
    }
    sign *= scalar_sign(rows[j][j]);
    for (std::size_t i = j + 1; i < n; ++i) {
      if (scalar_sign(rows[i][j]) == 0) continue;
      S f = rows[i][j] / rows[j][j];
      for (std::size_t k = j; k < n; ++k) rows[i][k] = rows[i][k] - f * rows[j][k];
    }
  }
  return sign;
}

/// Open cone {sum t_i v_i : t_i > 0} on linearly independent, totally positive generators.
template <class S>
class SimplicialCone {
 public:
  explicit SimplicialCone(std::vector<ExactVector<S>> generators) : gens_(std::move(generators)) {
    if (gens_.empty()) throw ConfigError("cone needs at least one generator");
    for (const auto& v : gens_)
      if (!all_positive(v)) throw ConfigError("cone generators must be totally positive");
    solve_columns(gens_, gens_[0]);  // rank check
  }

  const std::vector<ExactVector<S>>& generators() const { return gens_; }
  std::size_t rank() const { return gens_.size(); }

  bool contains(const ExactVector<S>& x) const {
    auto t = solve_columns(gens_, x);
    if (!t) return false;
    return std::all_of(t->begin(), t->end(), [](const S& c) { return scalar_sign(c) > 0; });
  }

 private:
  std::vector<ExactVector<S>> gens_;
};

/// C*(v_1..v_n): the open cone together with those faces C(v_J) for which
/// every q_i outside J is positive, where e_n = sum q_i v_i.
template <class S>
struct ColmezClosure {
  std::vector<ExactVector<S>> base;
  std::vector<S> q;
  std::vector<std::vector<int>> positive_subsets;  // 0-based, sorted, full set first
  bool boundary = false;                           // some q_i vanished

  std::vector<SimplicialCone<S>> faces() const {
    std::vector<SimplicialCone<S>> out;
    for (const auto& J : positive_subsets) {
      std::vector<ExactVector<S>> g;
      for (int i : J) g.push_back(base[static_cast<std::size_t>(i)]);
      out.emplace_back(std::move(g));
    }
    return out;
  }

  int multiplicity(const ExactVector<S>& x) const {
    int c = 0;
    for (const auto& f : faces()) c += f.contains(x) ? 1 : 0;
    return c;
  }
  bool contains(const ExactVector<S>& x) const { return multiplicity(x) > 0; }
};

template <class S>
ColmezClosure<S> colmez_closure(const std::vector<ExactVector<S>>& generators) {
  const std::size_t n = generators.size();
  if (n == 0 || generators[0].size() != n) throw ConfigError("colmez_closure: need n generators in dimension n");
  for (const auto& v : generators)
    if (!all_positive(v)) throw ConfigError("colmez_closure: generators must be totally positive");
  ExactVector<S> en(n, S(0));
  en[n - 1] = S(1);
  auto q = solve_columns(generators, en);
  if (!q) throw ConfigError("colmez_closure: singular generator matrix");
  ColmezClosure<S> C;
  C.base = generators;
  C.q = *q;
  for (const auto& qi : C.q) C.boundary = C.boundary || scalar_sign(qi) == 0;
  const unsigned full = (1u << n) - 1;
  for (unsigned mask = full; mask >= 1; --mask) {
    bool ok = true;
    std::vector<int> J;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i))
        J.push_back(static_cast<int>(i));
      else if (scalar_sign(C.q[i]) <= 0)
        ok = false;
    }
    if (ok) C.positive_subsets.push_back(std::move(J));
  }
  return C;
}

template <class S>
struct SignedDomainTerm {
  int weight = 0;
  std::vector<int> permutation;
  /// v_i as the list of unit indices whose product it is (v_1 = empty list).
  std::vector<std::vector<int>> unit_products;
  ColmezClosure<S> closure;
};

template <class S>
struct SignedDomain {
  std::size_t n = 1;
  std::vector<ExactVector<S>> units;
  int orientation = 1;  // w_eps
  std::vector<SignedDomainTerm<S>> terms;
};

namespace detail {

// Sign of det(log eps_{i,j}) for i, j < n-1; precision escalates until the
// value clears the working-precision noise floor by a wide margin.
template <class S>
int log_determinant_sign(const std::vector<ExactVector<S>>& units) {
  const std::size_t m = units.size();
  if (m == 0) return 1;
  for (mpfr_prec_t prec = 128; prec <= 8192; prec *= 2) {
    std::vector<std::vector<mpfr_t>> a(m);
    for (std::size_t i = 0; i < m; ++i) {
      a[i] = std::vector<mpfr_t>(m);
      for (std::size_t j = 0; j < m; ++j) {
        mpfr_init2(a[i][j], prec);
        scalar_to_mpfr(a[i][j], units[i][j]);
        mpfr_log(a[i][j], a[i][j], MPFR_RNDN);
      }
    }
    mpfr_t f, t, det;
    mpfr_inits2(prec, f, t, det, static_cast<mpfr_ptr>(nullptr));
    mpfr_set_ui(det, 1, MPFR_RNDN);
    bool singular = false;
    for (std::size_t j = 0; j < m && !singular; ++j) {
      std::size_t p = j;
      for (std::size_t i = j + 1; i < m; ++i)
        if (mpfr_cmpabs(a[i][j], a[p][j]) > 0) p = i;
      if (mpfr_zero_p(a[p][j])) {
        singular = true;
        break;
      }
      if (p != j) {
        std::swap(a[p], a[j]);
        mpfr_neg(det, det, MPFR_RNDN);
      }
      mpfr_mul(det, det, a[j][j], MPFR_RNDN);
      for (std::size_t i = j + 1; i < m; ++i) {
        mpfr_div(f, a[i][j], a[j][j], MPFR_RNDN);
        for (std::size_t k = j; k < m; ++k) {
          mpfr_mul(t, f, a[j][k], MPFR_RNDN);
          mpfr_sub(a[i][k], a[i][k], t, MPFR_RNDN);
        }
      }
    }
    int s = 0;
    bool certain = false;
    if (!singular) {
      s = mpfr_sgn(det);
      mpfr_abs(t, det, MPFR_RNDN);
      // Accept once |det| exceeds 2^(-prec/2).
      certain = mpfr_get_exp(t) > -static_cast<long>(prec / 2);
    }
    mpfr_clears(f, t, det, static_cast<mpfr_ptr>(nullptr));
    for (auto& row : a)
      for (auto& x : row) mpfr_clear(x);
    if (certain) return s;
  }
  throw PrecisionError("orientation: units appear multiplicatively dependent");
}

}  // namespace detail

/// Signed fundamental domain for the group generated by totally positive
/// units eps_1..eps_{n-1}, each given by its n real embeddings.
template <class S>
SignedDomain<S> signed_fundamental_domain(const std::vector<ExactVector<S>>& units, std::size_t n) {
  if (units.size() + 1 != n) throw ConfigError("signed_fundamental_domain: need n-1 units");
  for (const auto& u : units)
    if (u.size() != n || !all_positive(u)) throw ConfigError("signed_fundamental_domain: units must be totally positive");
  SignedDomain<S> D;
  D.n = n;
  D.units = units;
  D.orientation = detail::log_determinant_sign(units);
  std::vector<int> sigma(n - 1);
  std::iota(sigma.begin(), sigma.end(), 0);
  do {
    int inversions = 0;
    for (std::size_t i = 0; i < sigma.size(); ++i)
      for (std::size_t j = i + 1; j < sigma.size(); ++j) inversions += sigma[i] > sigma[j] ? 1 : 0;
    std::vector<ExactVector<S>> v{ExactVector<S>(n, S(1))};
    std::vector<std::vector<int>> prods{{}};
    for (std::size_t i = 0; i + 1 < n; ++i) {
      v.push_back(componentwise(v.back(), units[static_cast<std::size_t>(sigma[i])]));
      auto p = prods.back();
      p.push_back(sigma[i]);
      prods.push_back(std::move(p));
    }
    int w = ((n - 1) % 2 ? -1 : 1) * D.orientation * (inversions % 2 ? -1 : 1) * determinant_sign(v);
    if (w != 0) D.terms.push_back({w, sigma, std::move(prods), colmez_closure(v)});
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return D;
}

namespace detail {

template <class S>
S unit_power(const ExactVector<S>& u, long k, std::size_t j) {
  S base = k >= 0 ? u[j] : S(1) / u[j];
  S r(1);
  for (long i = 0; i < std::labs(k); ++i) r = r * base;
  return r;
}

template <class S>
long weight_at(const SignedDomain<S>& D, const ExactVector<S>& y) {
  long total = 0;
  for (const auto& t : D.terms) total += t.weight * t.closure.multiplicity(y);
  return total;
}

}  // namespace detail

/// sum over units u in <eps_1..eps_{n-1}> of sum_i a_i 1_{C_i}(u x).
template <class S>
long weight_sum(const ExactVector<S>& x, const SignedDomain<S>& D) {
  const std::size_t n = D.n;
  if (!all_positive(x)) throw std::invalid_argument("weight_sum: x must be totally positive");
  if (n == 1) return detail::weight_at(D, x);

  // Every generator ratio y_j / y_{n-1} of the support lies in [lo_j, hi_j].
  std::vector<ExactVector<S>> rays;
  for (const auto& t : D.terms)
    for (const auto& v : t.closure.base) rays.push_back(v);

  if (n == 2) {
    S lo = rays[0][0] / rays[0][1], hi = lo;
    for (const auto& v : rays) {
      S r = v[0] / v[1];
      if (r < lo) lo = r;
      if (r > hi) hi = r;
    }
    const auto& e = D.units[0];
    S lambda = e[0] / e[1];
    bool increasing = lambda > S(1);
    S r0 = x[0] / x[1];
    // ratio at k is r0 * lambda^k, monotone in k
    double dl = std::log(scalar_to_double(lambda));
    double k0 = (std::log(scalar_to_double(lo)) - std::log(scalar_to_double(r0))) / dl;
    double k1 = (std::log(scalar_to_double(hi)) - std::log(scalar_to_double(r0))) / dl;
    if (!std::isfinite(k0) || !std::isfinite(k1)) k0 = k1 = 0;
    long kmin = static_cast<long>(std::floor(std::min(k0, k1))) - 2;
    long kmax = static_cast<long>(std::ceil(std::max(k0, k1))) + 2;
    auto ratio = [&](long k) -> S { return r0 * detail::unit_power(ExactVector<S>{lambda}, k, 0); };
    // Certify the window: strictly below lo at one end, above hi at the other.
    auto outside_low = [&](long k) {
      S r = ratio(k);
      return increasing ? r < lo : r > hi;
    };
    auto outside_high = [&](long k) {
      S r = ratio(k);
      return increasing ? r > hi : r < lo;
    };
    while (!outside_low(kmin)) kmin -= 4;
    while (!outside_high(kmax)) kmax += 4;
    long total = 0;
    for (long k = kmin + 1; k < kmax; ++k) {
      ExactVector<S> y{x[0] * detail::unit_power(e, k, 0), x[1] * detail::unit_power(e, k, 1)};
      total += detail::weight_at(D, y);
    }
    return total;
  }

  // n >= 3: bounding box in log coordinates with a safety margin.
  const std::size_t m = n - 1;
  std::vector<double> lo(m, 1e300), hi(m, -1e300);
  for (const auto& v : rays) {
    for (std::size_t j = 0; j < m; ++j) {
      double r = std::log(scalar_to_double(v[j])) - std::log(scalar_to_double(v[m]));
      lo[j] = std::min(lo[j], r);
      hi[j] = std::max(hi[j], r);
    }
  }
  std::vector<std::vector<double>> M(m, std::vector<double>(m));
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = 0; i < m; ++i)
      M[j][i] = std::log(scalar_to_double(D.units[i][j])) - std::log(scalar_to_double(D.units[i][m]));
  std::vector<double> c(m);
  for (std::size_t j = 0; j < m; ++j) c[j] = std::log(scalar_to_double(x[j])) - std::log(scalar_to_double(x[m]));
  // Invert M by Gauss-Jordan.
  std::vector<std::vector<double>> inv(m, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < m; ++i) inv[i][i] = 1.0;
  for (std::size_t j = 0; j < m; ++j) {
    std::size_t p = j;
    for (std::size_t i = j + 1; i < m; ++i)
      if (std::fabs(M[i][j]) > std::fabs(M[p][j])) p = i;
    std::swap(M[p], M[j]);
    std::swap(inv[p], inv[j]);
    double piv = M[j][j];
    for (std::size_t k = 0; k < m; ++k) {
      M[j][k] /= piv;
      inv[j][k] /= piv;
    }
    for (std::size_t i = 0; i < m; ++i) {
      if (i == j) continue;
      double f = M[i][j];
      for (std::size_t k = 0; k < m; ++k) {
        M[i][k] -= f * M[j][k];
        inv[i][k] -= f * inv[j][k];
      }
    }
  }
  std::vector<long> kmin(m, 0), kmax(m, 0);
  std::vector<double> kl(m, 1e300), kh(m, -1e300);
  for (unsigned corner = 0; corner < (1u << m); ++corner) {
    std::vector<double> b(m);
    for (std::size_t j = 0; j < m; ++j) b[j] = ((corner >> j) & 1 ? hi[j] : lo[j]) - c[j];
    for (std::size_t i = 0; i < m; ++i) {
      double k = 0;
      for (std::size_t j = 0; j < m; ++j) k += inv[i][j] * b[j];
      kl[i] = std::min(kl[i], k);
      kh[i] = std::max(kh[i], k);
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    kmin[i] = static_cast<long>(std::floor(kl[i])) - 2;
    kmax[i] = static_cast<long>(std::ceil(kh[i])) + 2;
  }
  long total = 0;
  std::vector<long> k = kmin;
  while (true) {
    ExactVector<S> y = x;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) y[j] = y[j] * detail::unit_power(D.units[i], k[i], j);
    total += detail::weight_at(D, y);
    std::size_t i = 0;
    while (i < m && ++k[i] > kmax[i]) {
      k[i] = kmin[i];
      ++i;
    }
    if (i == m) break;
  }
  return total;
}

}  // namespace bstark
