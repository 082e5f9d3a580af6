#include "bstark/pipeline.hpp"

#include <algorithm>
#include <climits>
#include <sstream>

namespace bstark {

Pipeline::Pipeline(const ZetaConfig& cfg, PipelineOptions options)
    : cfg_(cfg),
      options_(options),
      group_(cfg.field, cfg.conductor),
      engine_(cfg.field, cfg.conductor, shintani_unit(cfg.field, cfg.conductor).epsilon),
      theta_(stickelberger(cfg_, engine_, group_)) {}

IdealF Pipeline::class_ideal(int cls) const {
  return group_.ideal_in_class(cls, cfg_.conductor.norm().get_num() * cfg_.ell * cfg_.p);
}

IdealF Pipeline::conjugation_ideal() const { return class_ideal(conjugation()); }

void Pipeline::set_mutation(std::optional<MeasureMutation> mutation) {
  std::lock_guard<std::mutex> lock(mu_);
  mutation_ = std::move(mutation);
  integrals_.clear();
}

PadicElement Pipeline::integral(const IdealF& b, int m) const {
  const std::string key = b.to_string() + "@" + std::to_string(m);
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = integrals_.find(key);
    if (it != integrals_.end()) return it->second;
  }
  PadicLevel level(cfg_.p, m);
  PadicElement value;
  if (level.count <= options_.table_limit) {
    MeasureTable t = measure_table(cfg_, engine_.domain(), b, m, options_.workers, false, options_.cache);
    if (mutation_ && mutation_->ideal == b) t.values.at(static_cast<std::size_t>(mutation_->coset)) += static_cast<std::int32_t>(mutation_->delta);
    value = table_integral(cfg_.field, t);
  } else {
    value = stream_integral(cfg_, engine_.domain(), b, m, options_.workers).product;
    // A perturbed coset value multiplies the Riemann product by a^delta.
    if (mutation_ && mutation_->ideal == b)
      value = value * coset_representative(cfg_.field, cfg_.p, m, mutation_->coset).pow(Int(mutation_->delta));
  }
  std::lock_guard<std::mutex> lock(mu_);
  integrals_.emplace(key, value);
  return value;
}

// ---------------------------------------------------------------------------

AnalyticUnit analytic_unit(const Pipeline& pl, const IdealF& b, int m) {
  if (m < 1) throw ConfigError("analytic_unit: precision must be at least 1");
  AnalyticUnit u;
  u.cls = pl.group().class_of(b);
  u.ideal = b;
  u.m = m;
  const Rat& e = pl.theta().coefficients[static_cast<std::size_t>(u.cls)];
  if (!is_integer(e)) throw InvariantViolation("analytic_unit: non-integral exponent " + e.get_str());
  u.value = PadicUnitValue{to_long(e.get_num()), pl.integral(b, m)};
  std::ostringstream os;
  os << "b=" << b.to_string() << " z=canonical D=" << pl.engine().domain().descriptor << " reps=lexicographic m=" << m;
  u.provenance = os.str();
  return u;
}

std::vector<AnalyticUnit> analytic_units(const Pipeline& pl, int m) {
  std::vector<AnalyticUnit> out;
  for (int s = 0; s < pl.group().size(); ++s) out.push_back(analytic_unit(pl, pl.class_ideal(s), m));
  return out;
}

HatUnitValue v_unit(const Pipeline& pl, const IdealF& b, const IdealF& q, int m) {
  if (pl.group().class_of(q) != pl.conjugation()) throw ConfigError("v_unit: q must lie in the class of c");
  if (m < 2) throw ConfigError("v_unit: precision must be at least 2");
  AnalyticUnit ub = analytic_unit(pl, b, m);
  AnalyticUnit ubq = analytic_unit(pl, pl.field().mul(b, q), m);
  return HatUnitValue::from(ub.value * ubq.value.inverse()).sqrt();
}

// ---------------------------------------------------------------------------

std::vector<PadicElement> cleared_polynomial(const std::vector<AnalyticUnit>& roots, long& p_exponent) {
  if (roots.empty()) throw std::invalid_argument("cleared_polynomial: no roots");
  const PadicElement& any = roots.front().value.unit;
  const int m = any.precision();
  const long p = any.p();
  const PadicElement zero = any.scalar(0);
  const PadicElement one = any.scalar(1);
  std::vector<PadicElement> poly{one};
  p_exponent = 0;
  for (const auto& r : roots) {
    if (r.value.unit.precision() != m) throw PrecisionError("cleared_polynomial: roots at different precisions");
    const long e = r.value.exponent;
    PadicElement a1 = one, a0 = zero - r.value.unit;
    if (e < 0) {
      p_exponent += -e;
      a1 = one.scalar(ipow(Int(p), static_cast<unsigned long>(-e)));
    } else {
      a0 = a0 * one.scalar(ipow(Int(p), static_cast<unsigned long>(e)));
    }
    std::vector<PadicElement> next(poly.size() + 1, zero);
    for (std::size_t i = 0; i < poly.size(); ++i) {
      next[i] = next[i] + poly[i] * a0;
      next[i + 1] = next[i + 1] + poly[i] * a1;
    }
    poly = std::move(next);
  }
  return poly;
}

BSPolynomial bs_polynomial(const QuadField& field, const std::vector<AnalyticUnit>& roots) {
  BSPolynomial P;
  P.cleared = cleared_polynomial(roots, P.p_exponent);
  P.precision = roots.front().m;
  const long p = roots.front().value.unit.p();
  const Rat scale(ipow(Int(p), static_cast<unsigned long>(P.p_exponent)));
  const std::size_t n = roots.size();
  for (std::size_t k = 0; k < n; ++k) {
    Recognition rec = recognize_escalating(field, P.cleared[k]);
    if (!rec.value)
      throw PrecisionError("insufficient precision: coefficient " + std::to_string(k) + " not recognised (" +
                           rec.detail + ")");
    P.coefficients.push_back(field.elt(rec.value->a() / scale, rec.value->b() / scale));
  }
  P.coefficients.push_back(field.elt(1));  // p^N exactly, known without loss
  return P;
}

namespace {

// Generator of mu_{p^2-1} in O_p / p^m: Teichmueller lift of a generator of F_{p^2}^*.
PadicElement teichmuller_generator(const QuadField& field, long p, int m) {
  const long q1 = p * p - 1;
  std::vector<long> primes;
  for (const auto& [r, k] : factor_small(q1)) primes.push_back(r);
  PadicElement one1(field, p, 1, 1, 0);
  for (long x = 0; x < p; ++x) {
    for (long y = 1; y < p; ++y) {
      PadicElement r(field, p, 1, x, y);
      bool gen = true;
      for (long r0 : primes)
        if (r.pow(Int(q1 / r0)) == one1) gen = false;
      if (!gen) continue;
      PadicElement lift(field, p, m, x, y);
      return lift.pow(ipow(Int(p * p), static_cast<unsigned long>(std::max(m - 1, 0))));
    }
  }
  throw InvariantViolation("teichmuller_generator: none found");
}

}  // namespace

BSPolynomial bs_polynomial_adjusted(const Pipeline& pl, const std::vector<AnalyticUnit>& roots) {
  auto acceptable = [&](const std::vector<AnalyticUnit>& rs, BSPolynomial& out) {
    try {
      out = bs_polynomial(pl.field(), rs);
    } catch (const PrecisionError&) {
      return false;
    }
    VerificationReport rep = verify_bs(pl, out, rs);
    return rep.get("c_T_congruence").passed && rep.get("d_splitting_law").passed;
  };
  BSPolynomial P;
  if (acceptable(roots, P)) return P;
  const long p = pl.config().p;
  const int m = roots.front().m;
  PadicElement zeta = teichmuller_generator(pl.field(), p, m);
  for (std::size_t i = 0; i < roots.size(); ++i) {
    PadicElement z = zeta;
    for (long k = 1; k < p * p - 1; ++k, z = z * zeta) {
      auto rs = roots;
      rs[i].value.unit = rs[i].value.unit * z;
      BSPolynomial Q;
      if (acceptable(rs, Q)) {
        Q.adjustment = "root of class " + pl.group().group().label(rs[i].cls) + " multiplied by zeta_" +
                       std::to_string(p * p - 1) + "^" + std::to_string(k);
        return Q;
      }
    }
  }
  return bs_polynomial(pl.field(), roots);  // rethrows the precision failure if any
}

// ---------------------------------------------------------------------------

long field_valuation(const FieldElement& x, long p) {
  auto v = [p](const Rat& r) -> long {
    if (r == 0) return LONG_MAX;
    long k = 0;
    Int n = r.get_num(), d = r.get_den();
    while (mpz_divisible_ui_p(n.get_mpz_t(), static_cast<unsigned long>(p))) {
      n /= p;
      ++k;
    }
    while (mpz_divisible_ui_p(d.get_mpz_t(), static_cast<unsigned long>(p))) {
      d /= p;
      --k;
    }
    return k;
  };
  return std::min(v(x.a()), v(x.b()));
}

namespace {

// Residue field of a prime of degree 1 or 2: elements u0 + u1 t, t the image of omega.
struct ResidueField {
  long q = 2;
  int f = 1;
  long root = 0;  // f = 1: image of omega
  long tr = 0, nm = 0;
  using E = std::pair<long, long>;

  long md(long a) const {
    a %= q;
    return a < 0 ? a + q : a;
  }
  E add(E a, E b) const { return {md(a.first + b.first), md(a.second + b.second)}; }
  E sub(E a, E b) const { return {md(a.first - b.first), md(a.second - b.second)}; }
  E mul(E a, E b) const {
    if (f == 1) return {md(a.first * b.first), 0};
    long bd = md(a.second * b.second);
    return {md(a.first * b.first - nm * bd), md(a.first * b.second + a.second * b.first + tr * bd)};
  }
  E pw(E a, long e) const {
    E r{1, 0};
    while (e > 0) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }
  E inv(E a) const { return pw(a, size() - 2); }
  long size() const { return f == 1 ? q : q * q; }
  bool zero(E a) const { return a.first == 0 && a.second == 0; }
  E of(const FieldElement& x) const {
    Int qq(q);
    long a = to_long(rat_mod(x.a(), qq)), b = to_long(rat_mod(x.b(), qq));
    if (f == 1) return {md(a + md(b * root)), 0};
    return {a, b};
  }
};

using Poly = std::vector<ResidueField::E>;

void trim(const ResidueField& K, Poly& a) {
  while (!a.empty() && K.zero(a.back())) a.pop_back();
}

Poly poly_mod(const ResidueField& K, Poly a, const Poly& m) {
  trim(K, a);
  const auto lead_inv = K.inv(m.back());
  while (a.size() >= m.size()) {
    auto c = K.mul(a.back(), lead_inv);
    std::size_t shift = a.size() - m.size();
    for (std::size_t i = 0; i < m.size(); ++i) a[shift + i] = K.sub(a[shift + i], K.mul(c, m[i]));
    trim(K, a);
  }
  return a;
}

Poly poly_mulmod(const ResidueField& K, const Poly& a, const Poly& b, const Poly& m) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, {0, 0});
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = K.add(r[i + j], K.mul(a[i], b[j]));
  return poly_mod(K, r, m);
}

Poly poly_powmod(const ResidueField& K, Poly base, long e, const Poly& m) {
  Poly r{{1, 0}};
  base = poly_mod(K, base, m);
  while (e > 0) {
    if (e & 1) r = poly_mulmod(K, r, base, m);
    base = poly_mulmod(K, base, base, m);
    e >>= 1;
  }
  return r;
}

Poly poly_gcd(const ResidueField& K, Poly a, Poly b) {
  trim(K, a);
  trim(K, b);
  while (!b.empty()) {
    Poly r = poly_mod(K, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

Poly poly_div(const ResidueField& K, Poly a, const Poly& m) {
  trim(K, a);
  Poly q(a.size() >= m.size() ? a.size() - m.size() + 1 : 0, {0, 0});
  const auto lead_inv = K.inv(m.back());
  while (a.size() >= m.size()) {
    auto c = K.mul(a.back(), lead_inv);
    std::size_t shift = a.size() - m.size();
    q[shift] = c;
    for (std::size_t i = 0; i < m.size(); ++i) a[shift + i] = K.sub(a[shift + i], K.mul(c, m[i]));
    trim(K, a);
  }
  return q;
}

}  // namespace

std::optional<std::vector<int>> factor_degrees_mod(const QuadField& field, const std::vector<FieldElement>& P,
                                                   const PrimeIdeal& Q) {
  ResidueField K;
  K.q = Q.q;
  K.f = Q.residue_degree;
  K.tr = field.omega_trace();
  K.nm = field.omega_norm();
  if (K.f == 1) {
    bool found = false;
    for (long r = 0; r < K.q && !found; ++r) {
      if (Q.ideal.contains(field.omega() - field.elt(r))) {
        K.root = r;
        found = true;
      }
    }
    if (!found) throw InvariantViolation("factor_degrees_mod: no root of omega modulo the prime");
  }
  Poly f;
  for (const auto& c : P) f.push_back(K.of(c));
  trim(K, f);
  if (f.size() != P.size()) return std::nullopt;  // leading coefficient vanished
  Poly df;
  for (std::size_t i = 1; i < f.size(); ++i) df.push_back(K.mul({static_cast<long>(i) % K.q, 0}, f[i]));
  trim(K, df);
  if (df.empty() || poly_gcd(K, f, df).size() != 1) return std::nullopt;

  std::vector<int> degrees;
  Poly rest = f;
  Poly x{{0, 0}, {1, 0}};
  Poly h = x;
  for (int k = 1; rest.size() > 1; ++k) {
    h = poly_powmod(K, h, K.size(), rest);
    Poly hx = h;
    if (hx.size() < 2) hx.resize(2, {0, 0});
    hx[1] = K.sub(hx[1], {1, 0});
    trim(K, hx);
    Poly g = poly_gcd(K, rest, hx);
    const int dg = static_cast<int>(g.size()) - 1;
    if (dg > 0) {
      for (int i = 0; i < dg / k; ++i) degrees.push_back(k);
      rest = poly_div(K, rest, g);
      h = poly_mod(K, h, rest);
    }
    if (k > 64) throw InvariantViolation("factor_degrees_mod: degree bound exceeded");
  }
  std::sort(degrees.begin(), degrees.end());
  return degrees;
}

// ---------------------------------------------------------------------------

const PredicateResult& VerificationReport::get(const std::string& name) const {
  for (const auto& p : predicates)
    if (p.name == name) return p;
  throw std::out_of_range("VerificationReport: no predicate " + name);
}

bool VerificationReport::all_passed() const {
  return std::all_of(predicates.begin(), predicates.end(), [](const PredicateResult& p) { return p.passed; });
}

std::string VerificationReport::to_string() const {
  std::ostringstream os;
  for (const auto& p : predicates) os << p.name << ": " << (p.passed ? "pass" : "fail") << " | " << p.witness << "\n";
  return os.str();
}

namespace {

std::vector<Rat> newton_slopes(const std::vector<long>& v) {
  // Lower convex hull of (k, v_k) over finite v_k; each segment contributes
  // (length) roots of valuation -slope.
  std::vector<std::pair<long, long>> pts;
  for (std::size_t k = 0; k < v.size(); ++k)
    if (v[k] != LONG_MAX) pts.emplace_back(static_cast<long>(k), v[k]);
  std::vector<std::pair<long, long>> hull;
  for (const auto& pt : pts) {
    while (hull.size() >= 2) {
      auto [x1, y1] = hull[hull.size() - 2];
      auto [x2, y2] = hull.back();
      // drop the middle point when it lies on or above the chord
      if ((y2 - y1) * (pt.first - x1) >= (pt.second - y1) * (x2 - x1)) hull.pop_back();
      else break;
    }
    hull.push_back(pt);
  }
  std::vector<Rat> out;
  for (std::size_t i = 1; i < hull.size(); ++i) {
    Rat s = make_rat(hull[i].second - hull[i - 1].second, hull[i].first - hull[i - 1].first);
    for (long j = hull[i - 1].first; j < hull[i].first; ++j) out.push_back(-s);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

VerificationReport verify_bs(const Pipeline& pl, const BSPolynomial& P, const std::vector<AnalyticUnit>& units) {
  VerificationReport rep;
  const QuadField& F = pl.field();
  const ZetaConfig& cfg = pl.config();
  const RayClassGroup& G = pl.group();
  const AbelianGroup& A = G.group();
  const std::size_t n = P.coefficients.size() - 1;

  {  // (a) Newton polygon against the Stickelberger coefficients
    std::vector<long> vals;
    for (const auto& c : P.coefficients) vals.push_back(field_valuation(c, cfg.p));
    std::vector<Rat> slopes = newton_slopes(vals);
    std::vector<Rat> expected(pl.theta().coefficients.begin(), pl.theta().coefficients.end());
    std::sort(expected.begin(), expected.end());
    std::ostringstream w;
    w << "root valuations {";
    for (std::size_t i = 0; i < slopes.size(); ++i) w << (i ? ", " : "") << slopes[i].get_str();
    w << "} vs zeta_{S,T} {";
    for (std::size_t i = 0; i < expected.size(); ++i) w << (i ? ", " : "") << expected[i].get_str();
    w << "}";
    rep.predicates.push_back({"a_valuations", slopes == expected, w.str()});
  }

  {  // (b) inversion symmetry after killing torsion, plus the unconditional v-identity
    int closed = 0;
    for (const auto& u : units) {
      int ci = A.mul(pl.conjugation(), u.cls);
      auto it = std::find_if(units.begin(), units.end(), [&](const AnalyticUnit& x) { return x.cls == ci; });
      if (it == units.end()) continue;
      if ((HatUnitValue::from(u.value) * HatUnitValue::from(it->value)).is_one()) ++closed;
    }
    std::ostringstream w;
    w << "hat(u_sigma) hat(u_{c sigma}) = 1 for " << closed << "/" << units.size() << " classes";
    rep.predicates.push_back({"b_inversion_symmetry", closed == static_cast<int>(units.size()), w.str()});
  }

  {  // (c) T-congruence modulo l (the prime in T); the conjugate prime is reported only
    auto check = [&](const IdealF& l) {
      ResidueRing R(F, l);
      for (std::size_t k = 0; k <= n; ++k) {
        Int binom;
        mpz_bin_uiui(binom.get_mpz_t(), n, k);
        if ((n - k) % 2) binom = -binom;
        if (R.reduce(P.coefficients[k]) != R.reduce(F.elt(Rat(binom), Rat(0)))) return false;
      }
      return true;
    };
    bool main_ok = check(cfg.ell_prime);
    std::ostringstream w;
    w << "P = (X-1)^" << n << " mod " << cfg.ell_prime.to_string() << ": " << (main_ok ? "yes" : "no");
    for (const auto& Q : F.primes_above(cfg.ell)) {
      if (Q.ideal == cfg.ell_prime) continue;
      w << "; mod conjugate " << Q.ideal.to_string() << " (not in T): " << (check(Q.ideal) ? "yes" : "no");
    }
    rep.predicates.push_back({"c_T_congruence", main_ok, w.str()});
  }

  {  // (d) splitting law at the first 20 usable rational primes
    int used = 0;
    bool ok = true;
    std::ostringstream w;
    std::vector<long> skipped;
    const Int bad = Int(F.discriminant()) * cfg.conductor.norm().get_num() * cfg.p * cfg.ell;
    for (long q = 2; used < 20 && q < 100000; ++q) {
      if (!is_prime(Int(q)) || bad % q == 0) continue;
      bool usable = true;
      std::vector<std::pair<std::vector<int>, int>> results;
      for (const auto& Q : F.primes_above(q)) {
        auto deg = factor_degrees_mod(F, P.coefficients, Q);
        if (!deg) {
          usable = false;
          break;
        }
        results.emplace_back(*deg, A.order(G.class_of(Q.ideal)));
      }
      if (!usable) {
        skipped.push_back(q);
        continue;
      }
      ++used;
      for (const auto& [deg, ord] : results) {
        for (int dg : deg) {
          if (dg != ord) {
            if (ok) w << "first mismatch at q=" << q << ": factor degree " << dg << " vs Frobenius order " << ord << "; ";
            ok = false;
          }
        }
      }
    }
    w << used << " primes checked";
    if (!skipped.empty()) {
      w << ", skipped (inseparable or non-integral):";
      for (long q : skipped) w << " " << q;
    }
    rep.predicates.push_back({"d_splitting_law", ok && used >= 20, w.str()});
  }

  {  // (e) the constant term generates a pure power of (p)
    const FieldElement& c0 = P.coefficients.front();
    bool ok = !c0.is_zero();
    std::ostringstream w;
    if (ok) {
      long v = field_valuation(c0, cfg.p);
      Rat pv = v >= 0 ? Rat(ipow(Int(cfg.p), static_cast<unsigned long>(v)))
                      : Rat(1) / Rat(ipow(Int(cfg.p), static_cast<unsigned long>(-v)));
      FieldElement rest = c0 / F.elt(pv, Rat(0));
      ok = rest.is_integral() && abs(rest.norm()) == 1;
      w << "P(0) = " << c0.to_string() << " = " << cfg.p << "^" << v << " * " << rest.to_string()
        << (ok ? " (unit)" : " (not a unit)");
      for (const auto& c : P.coefficients) {
        Int den = lcm(c.a().get_den(), c.b().get_den());
        while (mpz_divisible_ui_p(den.get_mpz_t(), static_cast<unsigned long>(cfg.p))) den /= cfg.p;
        if (den != 1) {
          ok = false;
          w << "; coefficient " << c.to_string() << " has denominators away from p";
        }
      }
    } else {
      w << "P(0) = 0";
    }
    rep.predicates.push_back({"e_unit_outside_p", ok, w.str()});
  }
  return rep;
}

}  // namespace bstark
