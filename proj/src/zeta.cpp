#include "bstark/zeta.hpp"

#include "bstark/cyclotomic.hpp"

#include <algorithm>
#include <sstream>

namespace bstark {

namespace {

Int rat_gcd(const Rat& x, const Rat& y, Int& den_out) {
  den_out = lcm(x.get_den(), y.get_den());
  return gcd(Int(x.get_num() * (den_out / x.get_den())), Int(y.get_num() * (den_out / y.get_den())));
}

// Rational coordinates (k1, k2) with (a, b) = k1 e1 + k2 e2.
std::array<Rat, 2> lattice_coordinates(const Lattice2& L, const FieldElement& x) {
  Rat k1 = x.a() / L.x1;
  Rat k2 = (x.b() - k1 * L.y1) / L.y2;
  return {k1, k2};
}

__int128 mod128(__int128 a, __int128 m) {
  __int128 r = a % m;
  return r < 0 ? r + m : r;
}

}  // namespace

Rat bernoulli_poly(int k, const Rat& x) {
  if (k == 1) return x - Rat(1, 2);
  if (k == 2) return x * x - x + Rat(1, 6);
  throw std::invalid_argument("bernoulli_poly: only k = 1, 2");
}

Rat frac_up(const Rat& x) {
  Rat f = x - Rat(floor_rat(x));
  return f == 0 ? Rat(1) : f;
}

// ---------------------------------------------------------------------------
// ConePlan

ConePlan::ConePlan(const QuadField& field, std::vector<FieldElement> generators, const Lattice2& lattice)
    : d_(field.d()) {
  if (generators.empty() || generators.size() > 2) throw std::invalid_argument("ConePlan: rank must be 1 or 2");
  for (const auto& v : generators) {
    if (!v.totally_positive()) throw ConfigError("ConePlan: generators must be totally positive");
    auto k = lattice_coordinates(lattice, v);
    Int den;
    Int g = rat_gcd(k[0], k[1], den);
    w_.push_back(make_rat(den, g) * v);
  }
  if (w_.size() == 2) {
    const FieldElement& w1 = w_[0];
    const FieldElement& w2 = w_[1];
    Rat det = w1.a() * w2.b() - w2.a() * w1.b();
    if (det == 0) throw ConfigError("ConePlan: generators lie on one ray");
    inv_[0][0] = w2.b() / det;
    inv_[0][1] = -w2.a() / det;
    inv_[1][0] = -w1.b() / det;
    inv_[1][1] = w1.a() / det;
    t12_ = (w1 / w2).trace();
    t21_ = (w2 / w1).trace();
    // T(lattice) contains Z^2; enumerate T(lattice) / Z^2.
    FieldElement e1(lattice.x1, lattice.y1, d_), e2(Rat(0), lattice.y2, d_);
    auto t1 = coords(e1), t2 = coords(e2);
    Int den = 1;
    for (const auto& c : {t1[0], t1[1], t2[0], t2[1]}) den = lcm(den, c.get_den());
    Lattice2 H = Lattice2::span({{t1[0] * den, t1[1] * den}, {t2[0] * den, t2[1] * den}});
    Int n1 = den / H.x1.get_num();
    Int n2 = den / H.y2.get_num();
    if (n1 * H.x1 != den || n2 * H.y2 != den) throw InvariantViolation("ConePlan: lattice does not contain the cone basis");
    for (Int i = 0; i < n1; ++i) {
      for (Int j = 0; j < n2; ++j) {
        reps_.push_back({make_rat(i * H.x1.get_num(), den), make_rat(i * H.y1.get_num() + j * H.y2.get_num(), den)});
        reps_.back()[0].canonicalize();
        reps_.back()[1].canonicalize();
      }
    }
  } else {
    auto m = lattice_coordinates(lattice, w_[0]);
    Int m1 = m[0].get_num(), m2 = m[1].get_num();
    Int g, r, s;
    mpz_gcdext(g.get_mpz_t(), r.get_mpz_t(), s.get_mpz_t(), m1.get_mpz_t(), m2.get_mpz_t());
    if (g != 1) throw InvariantViolation("ConePlan: ray generator is not primitive");
    FieldElement e1(lattice.x1, lattice.y1, d_), e2(Rat(0), lattice.y2, d_);
    u_ = Rat(-s) * e1 + Rat(r) * e2;
    const FieldElement& w = w_[0];
    Rat det = w.a() * u_.b() - u_.a() * w.b();
    inv_[0][0] = u_.b() / det;
    inv_[0][1] = -u_.a() / det;
    inv_[1][0] = -w.b() / det;
    inv_[1][1] = w.a() / det;
    reps_.push_back({Rat(0), Rat(0)});
  }
}

std::array<Rat, 2> ConePlan::coords(const FieldElement& x) const {
  return {inv_[0][0] * x.a() + inv_[0][1] * x.b(), inv_[1][0] * x.a() + inv_[1][1] * x.b()};
}

std::vector<std::vector<Rat>> ConePlan::fractional_points(const FieldElement& shift) const {
  auto s = coords(shift);
  std::vector<std::vector<Rat>> out;
  if (rank() == 1) {
    if (is_integer(s[1])) out.push_back({frac_up(s[0])});
    return out;
  }
  for (const auto& r : reps_) out.push_back({frac_up(s[0] + r[0]), frac_up(s[1] + r[1])});
  return out;
}

Rat ConePlan::value(const FieldElement& shift) const {
  Rat total = 0;
  for (const auto& x : fractional_points(shift)) {
    if (rank() == 1) {
      total -= bernoulli_poly(1, x[0]);
    } else {
      total += bernoulli_poly(1, x[0]) * bernoulli_poly(1, x[1]) +
               (bernoulli_poly(2, x[0]) * t12_ + bernoulli_poly(2, x[1]) * t21_) / 4;
    }
  }
  return total;
}

Rat cone_zeta_at_zero(const QuadField& field, const std::vector<FieldElement>& generators, const Lattice2& lattice,
                      const FieldElement& shift) {
  return ConePlan(field, generators, lattice).value(shift);
}

// ---------------------------------------------------------------------------
// Domain and shift

ShintaniDomain make_shintani_domain(const QuadField& field, const FieldElement& epsilon) {
  ShintaniDomain D;
  D.epsilon = epsilon;
  D.domain = signed_fundamental_domain<QuadReal>({{epsilon.embed(0), epsilon.embed(1)}}, 2);
  std::ostringstream desc;
  desc << "eps=" << epsilon.to_string() << ";w=" << D.domain.orientation;
  for (const auto& term : D.domain.terms) {
    std::vector<FieldElement> v;
    for (const auto& prod : term.unit_products) {
      FieldElement x = field.elt(1);
      for (int i : prod) x = x * (i == 0 ? epsilon : field.elt(1));
      v.push_back(x);
    }
    for (const auto& J : term.closure.positive_subsets) {
      DomainFace f;
      f.weight = term.weight;
      desc << ";" << term.weight << ":";
      for (int j : J) {
        f.generators.push_back(v[static_cast<std::size_t>(j)]);
        desc << j;
      }
      D.faces.push_back(std::move(f));
    }
  }
  D.descriptor = desc.str();
  return D;
}

FieldElement canonical_shift(const QuadField& field, const IdealF& b, const IdealF& conductor) {
  ResidueRing R(field, conductor);
  FieldElement h = field.elt(1) / b.generator();
  FieldElement z0 = h * R.lift(R.reduce(b.generator()));
  IdealF L = field.mul(field.inverse(b), conductor);
  const Lattice2& B = L.basis();
  // Minimise (height, a, b) over z0 + L: the height bounds |a|, so k1 is
  // searched outward until |a| alone exceeds the best height.
  auto best_for = [&](const Int& k1, std::optional<FieldElement>& best) {
    Rat a = z0.a() - B.x1 * k1;
    Rat b0 = z0.b() - B.y1 * k1;
    Int k2c = floor_rat(b0 / B.y2);
    for (Int k2 = k2c - 1; k2 <= k2c + 2; ++k2) {
      FieldElement cand(a, b0 - B.y2 * k2, field.d());
      if (!best) {
        best = cand;
        continue;
      }
      int c = cmp(cand.height(), best->height());
      if (c < 0 || (c == 0 && (cand.a() < best->a() || (cand.a() == best->a() && cand.b() < best->b())))) best = cand;
    }
  };
  std::optional<FieldElement> best;
  Int k0 = floor_rat(z0.a() / B.x1);
  best_for(k0, best);
  for (Int step = 1;; ++step) {
    bool any = false;
    for (Int k1 : {Int(k0 - step), Int(k0 + step)}) {
      Rat a = abs(z0.a() - B.x1 * k1);
      if (a > best->height()) continue;
      any = true;
      best_for(k1, best);
    }
    if (!any) break;
  }
  return *best;
}

PadicLevel::PadicLevel(long p_, int m_) : p(p_), m(m_) {
  pm = 1;
  for (int i = 0; i < m; ++i) pm *= p;
  count = pm * pm;
}

// ---------------------------------------------------------------------------
// CosetZeta

CosetZeta::CosetZeta(const QuadField& field, const IdealF& b, const IdealF& conductor, const ShintaniDomain& D,
                     const PadicLevel& level, const std::optional<FieldElement>& shift)
    : field_(field), level_(level) {
  lattice_ideal_ = field.mul(field.inverse(b), conductor);
  if (shift) {
    if (!field.inverse(b).contains(*shift) || !lattice_ideal_.contains(*shift - field.elt(1)))
      throw ConfigError("CosetZeta: shift must lie in b^{-1} and be congruent to 1 mod n");
    z_ = *shift;
  } else {
    z_ = canonical_shift(field, b, conductor);
  }
  const Lattice2& B = lattice_ideal_.basis();
  for (const auto& f : D.faces) {
    plans_.push_back(std::make_unique<ConePlan>(field, f.generators, B));
    weights_.push_back(f.weight);
  }
  const Int pm(level.pm);
  if (level.m > 0) {
    if (gcd(lattice_ideal_.norm().get_num() * lattice_ideal_.norm().get_den(), pm) != 1)
      throw ConfigError("CosetZeta: p must be coprime to b and n");
    // B = [[x1, 0], [y1, y2]] in (a, b) coordinates; inverse reduced mod p^m.
    binv_[0][0] = to_long(rat_mod(1 / B.x1, pm));
    binv_[0][1] = 0;
    binv_[1][0] = to_long(rat_mod(-B.y1 / (B.x1 * B.y2), pm));
    binv_[1][1] = to_long(rat_mod(1 / B.y2, pm));
    zmod_[0] = to_long(rat_mod(z_.a(), pm));
    zmod_[1] = to_long(rat_mod(z_.b(), pm));
  }

  // Integer fast path: plan coordinates of z and of the lattice basis over a
  // common denominator Q0 per face.
  try {
    FieldElement e1(B.x1, B.y1, field.d()), e2(Rat(0), B.y2, field.d());
    Int qall = 1, lall = 1;
    std::vector<Int> q0s, ls;
    for (const auto& plan : plans_) {
      auto cz = plan->coords(z_), c1 = plan->coords(e1), c2 = plan->coords(e2);
      Int q0 = 1;
      for (const auto& c : {cz[0], cz[1], c1[0], c1[1], c2[0], c2[1]}) q0 = lcm(q0, c.get_den());
      for (const auto& r : plan->representatives()) {
        q0 = lcm(q0, r[0].get_den());
        q0 = lcm(q0, r[1].get_den());
      }
      Int L = plan->rank() == 2 ? lcm(plan->trace12().get_den(), plan->trace21().get_den()) : Int(1);
      q0s.push_back(q0);
      ls.push_back(L);
      qall = lcm(qall, q0);
      lall = lcm(lall, L);
    }
    qall *= pm;
    denominator_ = 24 * qall * qall * lall;
    Int bound = 0;
    for (std::size_t i = 0; i < plans_.size(); ++i) {
      const auto& plan = *plans_[i];
      FaceData fd;
      fd.weight = weights_[i];
      fd.rank = static_cast<int>(plan.rank());
      Int q = q0s[i] * pm;
      fd.q = to_i128(q);
      auto put = [&](__int128* dst, const std::array<Rat, 2>& c) {
        dst[0] = to_i128(mod_pos(Int(c[0] * Rat(q0s[i])), q));
        dst[1] = to_i128(mod_pos(Int(c[1] * Rat(q0s[i])), q));
      };
      put(fd.z, plan.coords(z_));
      put(fd.e1, plan.coords(e1));
      put(fd.e2, plan.coords(e2));
      Int qs = qall / q;
      Int coeff_max;
      if (fd.rank == 2) {
        for (const auto& r : plan.representatives()) {
          fd.reps1.push_back(to_long(mod_pos(Int(r[0] * Rat(q0s[i])) * pm, q)));
          fd.reps2.push_back(to_long(mod_pos(Int(r[1] * Rat(q0s[i])) * pm, q)));
        }
        Int L = ls[i];
        fd.c_a = to_i128(6 * L);
        fd.c_b1 = to_i128(Int(plan.trace12() * Rat(L)));
        fd.c_b2 = to_i128(Int(plan.trace21() * Rat(L)));
        fd.scale = to_i128(qs * qs * (lall / L));
        // 64-bit inner loop when 7 q^2 per point summed over all points stays below 2^62
        fd.small = mpz_sizeinbase(Int(7 * q * q * Int(plan.point_classes())).get_mpz_t(), 2) < 62;
        coeff_max = 6 * L + abs(Int(plan.trace12() * Rat(L))) + abs(Int(plan.trace21() * Rat(L)));
        bound += coeff_max * q * q * Int(plan.point_classes()) * qs * qs * (lall / L);
      } else {
        fd.scale = to_i128(qs * qs * lall);
        bound += 12 * q * q * qs * qs * lall;
      }
      faces_.push_back(std::move(fd));
    }
    fast_ = mpz_sizeinbase(bound.get_mpz_t(), 2) < 118 && mpz_sizeinbase(qall.get_mpz_t(), 2) < 40;
  } catch (const std::overflow_error&) {
    fast_ = false;
  }
}

std::array<long, 2> CosetZeta::lattice_coords(long coset) const {
  if (level_.m == 0) return {0, 0};
  auto [ax, ay] = level_.coords(coset);
  const __int128 pm = level_.pm;
  __int128 dx = mod128(ax - zmod_[0], pm);
  __int128 dy = mod128(ay - zmod_[1], pm);
  long c1 = static_cast<long>(mod128(binv_[0][0] * dx + binv_[0][1] * dy, pm));
  long c2 = static_cast<long>(mod128(binv_[1][0] * dx + binv_[1][1] * dy, pm));
  return {c1, c2};
}

FieldElement CosetZeta::coset_shift(long coset) const {
  auto c = lattice_coords(coset);
  const Lattice2& B = lattice_ideal_.basis();
  FieldElement e1(B.x1, B.y1, field_.d()), e2(Rat(0), B.y2, field_.d());
  FieldElement za = z_ + Rat(c[0]) * e1 + Rat(c[1]) * e2;
  return make_rat(1, level_.pm) * za;
}

Int CosetZeta::slow_numerator(long coset) const {
  FieldElement s = coset_shift(coset);
  Rat total = 0;
  for (std::size_t i = 0; i < plans_.size(); ++i) total += weights_[i] * plans_[i]->value(s);
  Rat scaled = total * Rat(denominator_);
  if (!is_integer(scaled)) throw InvariantViolation("CosetZeta: value outside the common denominator");
  return scaled.get_num();
}

Int CosetZeta::numerator(long coset) const {
  if (coset < 0 || coset >= level_.count) throw std::out_of_range("CosetZeta: coset index");
  if (!fast_) return slow_numerator(coset);
  return to_int(fast_numerator(coset));
}

__int128 CosetZeta::fast_numerator(long coset) const {
  auto c = lattice_coords(coset);
  __int128 total = 0;
  for (const auto& f : faces_) {
    const __int128 q = f.q;
    __int128 n1 = mod128(f.z[0] + c[0] * f.e1[0] + c[1] * f.e2[0], q);
    __int128 n2 = mod128(f.z[1] + c[0] * f.e1[1] + c[1] * f.e2[1], q);
    if (f.rank == 1) {
      if (n2 != 0) continue;  // second coordinate must be an integer
      __int128 x = n1 == 0 ? q : n1;
      total += f.weight * f.scale * 12 * q * (q - 2 * x);
      continue;
    }
    __int128 A = 0, B1 = 0, B2 = 0;
    if (f.small) {
      const long long qs = static_cast<long long>(q), m1 = static_cast<long long>(n1), m2 = static_cast<long long>(n2);
      long long a = 0, b1 = 0, b2 = 0;
      for (std::size_t k = 0; k < f.reps1.size(); ++k) {
        long long x1 = m1 + f.reps1[k];
        long long x2 = m2 + f.reps2[k];
        if (x1 > qs) x1 -= qs;
        if (x2 > qs) x2 -= qs;
        if (x1 == 0) x1 = qs;
        if (x2 == 0) x2 = qs;
        a += (2 * x1 - qs) * (2 * x2 - qs);
        b1 += 6 * x1 * (x1 - qs) + qs * qs;
        b2 += 6 * x2 * (x2 - qs) + qs * qs;
      }
      total += f.weight * f.scale * (f.c_a * a + f.c_b1 * b1 + f.c_b2 * b2);
      continue;
    }
    for (std::size_t k = 0; k < f.reps1.size(); ++k) {
      __int128 x1 = n1 + f.reps1[k];
      __int128 x2 = n2 + f.reps2[k];
      if (x1 > q) x1 -= q;
      if (x2 > q) x2 -= q;
      if (x1 >= q) x1 -= q;
      if (x2 >= q) x2 -= q;
      if (x1 == 0) x1 = q;
      if (x2 == 0) x2 = q;
      A += (2 * x1 - q) * (2 * x2 - q);
      B1 += 6 * x1 * x1 - 6 * x1 * q + q * q;
      B2 += 6 * x2 * x2 - 6 * x2 * q + q * q;
    }
    total += f.weight * f.scale * (f.c_a * A + f.c_b1 * B1 + f.c_b2 * B2);
  }
  return total;
}

// ---------------------------------------------------------------------------
// ZetaEngine

ZetaEngine::ZetaEngine(const QuadField& field, const IdealF& conductor, const FieldElement& epsilon,
                       ShiftChoice shift)
    : field_(field), conductor_(conductor), domain_(make_shintani_domain(field, epsilon)), shift_(shift) {}

FieldElement ZetaEngine::shift_for(const IdealF& b) const {
  FieldElement z = canonical_shift(field_, b, conductor_);
  if (shift_ == ShiftChoice::translated) z = z + field_.elt(2, 1) * field_.mul(field_.inverse(b), conductor_).generator();
  return z;
}

Rat ZetaEngine::zeta_all(const IdealF& b) const {
  std::string key = b.generator().to_string();
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
  }
  CosetZeta cz(field_, b, conductor_, domain_, PadicLevel(2, 0), shift_for(b));
  Rat v = cz.value(0);
  std::lock_guard<std::mutex> lock(mu_);
  memo_.emplace(key, v);
  return v;
}

Rat ZetaEngine::zeta_coset(const IdealF& b, const PadicLevel& level, long coset) const {
  CosetZeta cz(field_, b, conductor_, domain_, level, shift_for(b));
  return cz.value(coset);
}

// ---------------------------------------------------------------------------
// Stickelberger elements

std::vector<Rat> StickelbergerElement::group_ring(const AbelianGroup& G) const {
  std::vector<Rat> out(coefficients.size());
  for (int g = 0; g < G.size(); ++g) out[static_cast<std::size_t>(g)] = coefficients[static_cast<std::size_t>(G.inv(g))];
  return out;
}

ZetaConfig make_zeta_config(const QuadField& field, const IdealF& conductor, long p, long ell) {
  auto l = degree_one_prime(field, ell);
  if (!l) throw ConfigError("ell_degree_one: no degree-one prime above " + std::to_string(ell));
  ConfigReport rep = validate_config(field, conductor, p, *l);
  if (!rep.ok()) throw ConfigError("invalid configuration: " + rep.failures());
  return ZetaConfig{field, conductor, p, *l, ell};
}

std::vector<Rat> partial_zeta_values(const ZetaEngine& engine, const RayClassGroup& G, const Int& avoid) {
  std::vector<Rat> out;
  for (int s = 0; s < G.size(); ++s) out.push_back(engine.zeta_all(G.ideal_in_class(s, avoid)));
  return out;
}

std::string stickelberger_violation(const StickelbergerElement& theta, const RayClassGroup& G, bool require_integral) {
  const auto& c = theta.coefficients;
  const AbelianGroup& A = G.group();
  if (c.size() != static_cast<std::size_t>(A.size()))
    return "Theta has " + std::to_string(c.size()) + " coefficients for a group of order " + std::to_string(A.size());
  Rat aug = 0;
  for (const auto& x : c) aug += x;
  if (aug != 0) return "augmentation is " + aug.get_str() + ", expected 0";
  if (require_integral) {
    for (int s = 0; s < A.size(); ++s)
      if (!is_integer(c[static_cast<std::size_t>(s)]))
        return "coefficient at " + A.label(s) + " is " + c[static_cast<std::size_t>(s)].get_str() + ", not an integer";
  }
  for (int cv : {G.c_v1(), G.c_v2()}) {
    for (int s = 0; s < A.size(); ++s) {
      if (c[static_cast<std::size_t>(s)] + c[static_cast<std::size_t>(A.mul(cv, s))] != 0)
        return "(1 + c)Theta is nonzero at " + A.label(s) + " for c = " + A.label(cv);
    }
  }
  auto theta_g = theta.group_ring(A);
  for (const auto& chi : characters(A)) {
    if (chi.value(G.c_v1()) != 0 && chi.value(G.c_v2()) != 0) continue;
    Cyclotomic v(chi.e);
    for (int g = 0; g < A.size(); ++g) v += theta_g[static_cast<std::size_t>(g)] * Cyclotomic::root(chi.e, chi.value(g));
    if (!v.is_zero()) return "chi(Theta) = " + v.to_string() + " for a character even at a real place";
  }
  return {};
}

StickelbergerElement stickelberger(const ZetaConfig& cfg, const ZetaEngine& engine, const RayClassGroup& G) {
  Int avoid = cfg.conductor.norm().get_num() * cfg.ell * cfg.p;
  auto zs = partial_zeta_values(engine, G, avoid);
  int sl = G.class_of(cfg.ell_prime);
  const AbelianGroup& A = G.group();
  StickelbergerElement theta;
  for (int s = 0; s < A.size(); ++s) {
    int shifted = A.mul(s, A.inv(sl));
    theta.coefficients.push_back(zs[static_cast<std::size_t>(s)] - cfg.ell * zs[static_cast<std::size_t>(shifted)]);
  }
  std::string bad = stickelberger_violation(theta, G, true);
  if (!bad.empty()) throw InvariantViolation("stickelberger: " + bad);
  return theta;
}

StickelbergerElement stickelberger(const ZetaConfig& cfg) {
  RayClassGroup G(cfg.field, cfg.conductor);
  ZetaEngine engine(cfg.field, cfg.conductor, shintani_unit(cfg.field, cfg.conductor).epsilon);
  return stickelberger(cfg, engine, G);
}

StickelbergerElement stickelberger_at_level(const ZetaConfig& cfg, const IdealF& f, const RayClassGroup& Gf) {
  if (!f.divides(cfg.conductor)) throw ConfigError("stickelberger_at_level: level must divide the conductor");
  ZetaEngine engine(cfg.field, f, shintani_unit(cfg.field, f).epsilon);
  return stickelberger(cfg, engine, Gf);
}

std::vector<IdealF> ideal_divisors(const QuadField& field, const IdealF& n) {
  std::vector<IdealF> out{field.ideal(1)};
  for (const auto& [P, e] : field.factor(n)) {
    std::vector<IdealF> next;
    for (const auto& d : out) {
      IdealF cur = d;
      next.push_back(cur);
      for (int k = 1; k <= e; ++k) {
        cur = field.mul(cur, P.ideal);
        next.push_back(cur);
      }
    }
    out = std::move(next);
  }
  std::stable_sort(out.begin(), out.end(), [](const IdealF& x, const IdealF& y) { return x.norm() < y.norm(); });
  return out;
}

IdealF character_conductor(const RayClassGroup& G, const Character& chi) {
  const QuadField& F = G.field();
  for (const auto& f : ideal_divisors(F, G.conductor())) {
    RayClassGroup Gf(F, f);
    auto proj = G.projection_to(Gf);
    bool trivial_on_kernel = true;
    for (int s = 0; s < G.size() && trivial_on_kernel; ++s)
      if (proj[static_cast<std::size_t>(s)] == 0 && chi.value(s) != 0) trivial_on_kernel = false;
    if (trivial_on_kernel) return f;
  }
  return G.conductor();
}

Cyclotomic character_value(const Character& chi, const std::vector<Rat>& x) {
  Cyclotomic v(chi.e);
  for (std::size_t g = 0; g < x.size(); ++g) {
    if (x[g] != 0) v += x[g] * Cyclotomic::root(chi.e, chi.value(static_cast<int>(g)));
  }
  return v;
}

StickelbergerElement stickelberger_infinite(const ZetaConfig& cfg) {
  RayClassGroup G(cfg.field, cfg.conductor);
  const AbelianGroup& A = G.group();
  const auto chars = characters(A);
  struct Level {
    std::unique_ptr<RayClassGroup> group;
    std::vector<int> projection;
    std::vector<Rat> theta;  // group-ring coefficients over G_f
  };
  std::map<std::string, Level> levels;
  std::vector<Cyclotomic> values;  // chi(Theta_{S_infinity,T})
  for (const auto& chi : chars) {
    IdealF f = character_conductor(G, chi);
    auto key = f.to_string();
    auto it = levels.find(key);
    if (it == levels.end()) {
      Level lv;
      lv.group = std::make_unique<RayClassGroup>(cfg.field, f);
      lv.projection = G.projection_to(*lv.group);
      lv.theta = stickelberger_at_level(cfg, f, *lv.group).group_ring(lv.group->group());
      it = levels.emplace(key, std::move(lv)).first;
    }
    const Level& lv = it->second;
    // chi factors through G_f; evaluate it there via any preimage.
    Character chi_f;
    chi_f.e = chi.e;
    chi_f.values.assign(static_cast<std::size_t>(lv.group->size()), 0);
    for (int s = 0; s < A.size(); ++s) chi_f.values[static_cast<std::size_t>(lv.projection[static_cast<std::size_t>(s)])] = chi.value(s);
    values.push_back(character_value(chi_f, lv.theta));
  }
  StickelbergerElement out;
  const int n = A.size();
  std::vector<Rat> theta_g(static_cast<std::size_t>(n));
  for (int g = 0; g < n; ++g) {
    // coefficient of g in sum_chi chi(Theta) e_chi, e_chi = (1/|G|) sum_g chi(g^{-1}) g
    Cyclotomic acc(chars.front().e);
    for (std::size_t i = 0; i < chars.size(); ++i)
      acc += values[i] * Cyclotomic::root(chars[i].e, chars[i].conj_value(g));
    if (!acc.is_rational()) throw InvariantViolation("stickelberger_infinite: irrational coefficient");
    theta_g[static_cast<std::size_t>(g)] = acc.rational_value() / n;
  }
  for (int s = 0; s < n; ++s) out.coefficients.push_back(theta_g[static_cast<std::size_t>(A.inv(s))]);
  return out;
}

Cyclotomic odd_character_product(const std::vector<Rat>& x, const RayClassGroup& G) {
  const auto chars = characters(G.group());
  Cyclotomic prod(chars.front().e, Rat(1));
  for (const auto& chi : chars) {
    if (2 * chi.value(G.c_v1()) != chi.e || 2 * chi.value(G.c_v2()) != chi.e) continue;
    prod = prod * character_value(chi, x);
  }
  return prod;
}

}  // namespace bstark
