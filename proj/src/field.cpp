#include "bstark/field.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bstark {

namespace {

void omega_poly(long d, long& tr, long& nm) {
  if (((d % 4) + 4) % 4 == 1) {
    tr = 1;
    nm = (1 - d) / 4;
  } else {
    tr = 0;
    nm = -d;
  }
}

int cmp_abs(const Rat& x, const Rat& y) { return cmp(abs(x), abs(y)); }

}  // namespace

// ---------------------------------------------------------------------------
// FieldElement

FieldElement::FieldElement(Rat a, Rat b, long d) : a_(std::move(a)), b_(std::move(b)), d_(d) {
  a_.canonicalize();
  b_.canonicalize();
  omega_poly(d, tr_, nm_);
}

FieldElement operator+(const FieldElement& x, const FieldElement& y) {
  return FieldElement(x.a_ + y.a_, x.b_ + y.b_, x.d_);
}

FieldElement operator-(const FieldElement& x, const FieldElement& y) {
  return FieldElement(x.a_ - y.a_, x.b_ - y.b_, x.d_);
}

FieldElement operator*(const FieldElement& x, const FieldElement& y) {
  Rat bb = x.b_ * y.b_;
  return FieldElement(x.a_ * y.a_ - bb * x.nm_, x.a_ * y.b_ + x.b_ * y.a_ + bb * x.tr_, x.d_);
}

FieldElement operator/(const FieldElement& x, const FieldElement& y) {
  Rat n = y.norm();
  if (n == 0) throw std::domain_error("FieldElement: division by zero");
  FieldElement num = x * y.conj();
  return FieldElement(num.a_ / n, num.b_ / n, x.d_);
}

FieldElement FieldElement::conj() const { return FieldElement(a_ + b_ * tr_, -b_, d_); }

Rat FieldElement::norm() const { return a_ * a_ + a_ * b_ * tr_ + b_ * b_ * nm_; }

Rat FieldElement::trace() const { return 2 * a_ + b_ * tr_; }

QuadReal FieldElement::embed(int i) const {
  Rat p = a_;
  Rat q = b_;
  if (tr_ == 1) {
    p += b_ / 2;
    q = b_ / 2;
  }
  if (i == 1) q = -q;
  return QuadReal(p, q, d_);
}

Rat FieldElement::height() const { return cmp_abs(a_, b_) >= 0 ? Rat(abs(a_)) : Rat(abs(b_)); }

FieldElement FieldElement::pow(long e) const {
  FieldElement base = *this;
  if (e < 0) {
    base = FieldElement::from_int(1, d_) / base;
    e = -e;
  }
  FieldElement r = FieldElement::from_int(1, d_);
  while (e > 0) {
    if (e & 1) r = r * base;
    base = base * base;
    e >>= 1;
  }
  return r;
}

std::string FieldElement::to_string() const {
  std::ostringstream os;
  os << a_;
  if (b_ != 0) {
    if (b_ > 0)
      os << "+" << b_ << "*w";
    else
      os << "-" << Rat(-b_) << "*w";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Lattice2

Lattice2 Lattice2::span(const std::vector<std::array<Rat, 2>>& vectors) {
  Int den = 1;
  for (const auto& v : vectors) {
    den = lcm(den, v[0].get_den());
    den = lcm(den, v[1].get_den());
  }
  Int x1 = 0, y1 = 0, y2 = 0;
  for (const auto& v : vectors) {
    Int a = Rat(v[0] * den).get_num();
    Int b = Rat(v[1] * den).get_num();
    if (a == 0) {
      y2 = gcd(y2, b);
      continue;
    }
    if (x1 == 0) {
      x1 = a;
      y1 = b;
      continue;
    }
    Int g, u, w;
    mpz_gcdext(g.get_mpz_t(), u.get_mpz_t(), w.get_mpz_t(), x1.get_mpz_t(), a.get_mpz_t());
    Int kern = (a / g) * y1 - (x1 / g) * b;
    Int ny1 = u * y1 + w * b;
    x1 = g;
    y1 = ny1;
    y2 = gcd(y2, kern);
  }
  if (x1 == 0 || y2 == 0) throw std::invalid_argument("Lattice2::span: vectors do not span rank 2");
  if (x1 < 0) {
    x1 = -x1;
    y1 = -y1;
  }
  y2 = abs(y2);
  y1 = mod_pos(y1, y2);
  Lattice2 L{Rat(x1, den), Rat(y1, den), Rat(y2, den)};
  L.x1.canonicalize();
  L.y1.canonicalize();
  L.y2.canonicalize();
  return L;
}

bool Lattice2::contains(const Rat& a, const Rat& b) const {
  Rat k1 = a / x1;
  if (!is_integer(k1)) return false;
  Rat k2 = (b - k1 * y1) / y2;
  return is_integer(k2);
}

std::array<Int, 2> Lattice2::coords(const Rat& a, const Rat& b) const {
  Rat k1 = a / x1;
  Rat k2 = (b - k1 * y1) / y2;
  if (!is_integer(k1) || !is_integer(k2)) throw std::invalid_argument("Lattice2::coords: not a lattice point");
  return {k1.get_num(), k2.get_num()};
}

// ---------------------------------------------------------------------------
// IdealF

FieldElement IdealF::basis_element(int i) const {
  long d = gen_.radicand();
  if (i == 0) return FieldElement(basis_.x1, basis_.y1, d);
  return FieldElement(Rat(0), basis_.y2, d);
}

bool IdealF::is_integral() const {
  return is_integer(basis_.x1) && is_integer(basis_.y1) && is_integer(basis_.y2);
}

bool IdealF::divides(const IdealF& other) const {
  return contains(other.basis_element(0)) && contains(other.basis_element(1));
}

std::string IdealF::to_string() const { return "(" + gen_.to_string() + ")"; }

// ---------------------------------------------------------------------------
// QuadField

QuadField::QuadField(long d) : d_(d) {
  if (d <= 1) throw ConfigError("make_field: d must exceed 1");
  if (!is_squarefree(d)) throw ConfigError("make_field: d must be squarefree");
  omega_poly(d, tr_, nm_);
  disc_ = tr_ == 1 ? d : 4 * d;
  compute_fundamental_unit();
  verify_class_number_one();
}

FieldElement QuadField::from_surd(const Rat& p, const Rat& q) const {
  if (tr_ == 1) return elt(p - q, 2 * q);
  return elt(p, q);
}

void QuadField::compute_fundamental_unit() {
  // Smallest unit > 1 has the smallest positive surd coefficient.
  const long k = tr_ == 1 ? 4 : 1;  // x^2 - d y^2 = -+k, unit (x + y sqrt d)/sqrt(k)
  for (long y = 1; y < 100000000; ++y) {
    Int dy2 = Int(d_) * y * y;
    for (long s : {-1L, 1L}) {
      Int x2 = dy2 + s * k;
      Int x;
      if (x2 > 0 && is_square(x2, &x)) {
        Rat half = tr_ == 1 ? Rat(1, 2) : Rat(1);
        eps0_ = from_surd(Rat(x) * half, Rat(y) * half);
        return;
      }
    }
  }
  throw ConfigError("make_field: fundamental unit search exhausted");
}

std::optional<FieldElement> QuadField::find_generator(const Lattice2& L, const Rat& norm) const {
  double eps = eps0_.embed(0).to_double();
  double B = std::sqrt(norm.get_d() * eps) * 1.000001 + 1e-9;
  double sd = std::sqrt(static_cast<double>(d_));
  double bmax = 2.0 * B / sd * (tr_ == 1 ? 1.0 : 0.5) + 1.0;
  double w1 = tr_ == 1 ? (1 + sd) / 2 : sd;
  double amax = B + bmax * w1 + 1.0;
  long k1max = static_cast<long>(amax / L.x1.get_d()) + 1;
  for (long k1 = -k1max; k1 <= k1max; ++k1) {
    Rat a = L.x1 * k1;
    Rat b0 = L.y1 * k1;
    // b = b0 + k2 y2 within [-bmax, bmax]
    long lo = static_cast<long>(std::floor((-bmax - b0.get_d()) / L.y2.get_d())) - 1;
    long hi = static_cast<long>(std::ceil((bmax - b0.get_d()) / L.y2.get_d())) + 1;
    for (long k2 = lo; k2 <= hi; ++k2) {
      FieldElement g = elt(a, b0 + L.y2 * k2);
      if (g.is_zero()) continue;
      if (abs(g.norm()) == norm) return g;
    }
  }
  return std::nullopt;
}

void QuadField::verify_class_number_one() const {
  double mink = std::sqrt(static_cast<double>(disc_)) / 2.0;
  for (long q = 2; q <= static_cast<long>(mink); ++q) {
    if (!is_prime(Int(q))) continue;
    for (long r = 0; r < q; ++r) {
      if (((r * r - tr_ * r + nm_) % q + q) % q != 0) continue;
      FieldElement g = elt(-r, 1);
      FieldElement gw = g * omega();
      Lattice2 L = Lattice2::span({{Rat(q), Rat(0)}, {Rat(0), Rat(q)}, {g.a(), g.b()}, {gw.a(), gw.b()}});
      if (!find_generator(L, Rat(q)))
        throw UnsupportedField("unsupported field: class number of Q(sqrt " + std::to_string(d_) +
                               ") exceeds 1 (prime above " + std::to_string(q) + " is not principal)");
    }
  }
}

FieldElement QuadField::canonical_generator(const FieldElement& g) const {
  if (g.is_zero()) throw std::invalid_argument("ideal generator must be nonzero");
  double s1 = std::abs(g.embed(0).to_double());
  double s2 = std::abs(g.embed(1).to_double());
  double le = std::log(eps0_.embed(0).to_double());
  long k0 = std::lround(-std::log(s1 / s2) / (2.0 * le));
  FieldElement best;
  bool have = false;
  FieldElement cur = g * eps0_.pow(k0 - 3);
  for (long k = k0 - 3; k <= k0 + 3; ++k) {
    FieldElement cand = cur.sign(0) > 0 ? cur : -cur;
    if (!have) {
      best = cand;
      have = true;
    } else {
      int c = cmp(cand.height(), best.height());
      if (c < 0 || (c == 0 && (cand.a() < best.a() || (cand.a() == best.a() && cand.b() < best.b()))))
        best = cand;
    }
    cur = cur * eps0_;
  }
  return best;
}

IdealF QuadField::ideal(const FieldElement& generator) const {
  IdealF I;
  I.gen_ = canonical_generator(generator);
  FieldElement gw = I.gen_ * omega();
  I.basis_ = Lattice2::span({{I.gen_.a(), I.gen_.b()}, {gw.a(), gw.b()}});
  I.norm_ = abs(I.gen_.norm());
  return I;
}

IdealF QuadField::ideal_from_generators(const std::vector<FieldElement>& gens) const {
  std::vector<std::array<Rat, 2>> vecs;
  for (const auto& g : gens) {
    FieldElement gw = g * omega();
    vecs.push_back({g.a(), g.b()});
    vecs.push_back({gw.a(), gw.b()});
  }
  Lattice2 L = Lattice2::span(vecs);
  Rat norm = L.covolume();
  auto g = find_generator(L, norm);
  if (!g) throw UnsupportedField("ideal_from_generators: ideal is not principal");
  return ideal(*g);
}

int QuadField::splitting_symbol(long q) const {
  return mpz_kronecker(Int(disc_).get_mpz_t(), Int(q).get_mpz_t());
}

std::vector<PrimeIdeal> QuadField::primes_above(long q) const {
  std::vector<PrimeIdeal> out;
  std::vector<long> roots;
  for (long r = 0; r < q; ++r) {
    if (((r * r - tr_ * r + nm_) % q + q) % q == 0) roots.push_back(r);
  }
  if (roots.empty()) {
    out.push_back({ideal(q), q, 2, "inert"});
    return out;
  }
  std::string kind = roots.size() == 2 ? "split" : "ramified";
  for (long r : roots) {
    IdealF I = ideal_from_generators({elt(q), elt(-r, 1)});
    out.push_back({I, q, 1, kind});
  }
  return out;
}

std::vector<std::pair<PrimeIdeal, int>> QuadField::factor(const IdealF& a) const {
  if (!a.is_integral()) throw std::invalid_argument("factor: ideal must be integral");
  std::vector<std::pair<PrimeIdeal, int>> out;
  long n = to_long(a.norm().get_num());
  for (auto [q, e] : factor_small(n)) {
    (void)e;
    for (const auto& P : primes_above(q)) {
      int v = 0;
      FieldElement cur = a.generator();
      while (true) {
        FieldElement t = cur / P.ideal.generator();
        if (!t.is_integral()) break;
        cur = t;
        ++v;
      }
      if (v > 0) out.emplace_back(P, v);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// ResidueRing

ResidueRing::ResidueRing(const QuadField& field, const IdealF& modulus) : modulus_(modulus), d_(field.d()) {
  if (!modulus.is_integral()) throw std::invalid_argument("ResidueRing: modulus must be integral");
  x1_ = to_long(modulus.basis().x1.get_num());
  y1_ = to_long(modulus.basis().y1.get_num());
  y2_ = to_long(modulus.basis().y2.get_num());
  size_ = x1_ * y2_;
  level_ = size_;
  std::vector<IdealF> primes;
  if (size_ > 1) {
    for (const auto& [P, e] : field.factor(modulus)) primes.push_back(P.ideal);
  }
  unit_.assign(static_cast<std::size_t>(size_), 1);
  for (long i = 0; i < size_; ++i) {
    FieldElement x = lift(i);
    for (const auto& P : primes) {
      if (P.contains(x)) {
        unit_[static_cast<std::size_t>(i)] = 0;
        break;
      }
    }
  }
}

long ResidueRing::reduce(const FieldElement& x) const {
  if (size_ == 1) return 0;
  Int lv(level_);
  long a = to_long(rat_mod(x.a(), lv));
  long b = to_long(rat_mod(x.b(), lv));
  long k = a / x1_;
  a -= k * x1_;
  b = (b - k * y1_) % y2_;
  if (b < 0) b += y2_;
  return a * y2_ + b;
}

FieldElement ResidueRing::lift(long index) const {
  return FieldElement(Rat(index / y2_), Rat(index % y2_), d_);
}

long ResidueRing::mul(long i, long j) const { return reduce(lift(i) * lift(j)); }

bool ResidueRing::is_unit(long i) const { return unit_[static_cast<std::size_t>(i)] != 0; }

// ---------------------------------------------------------------------------

ShintaniUnitGroup shintani_unit(const QuadField& field, const IdealF& conductor) {
  FieldElement e = field.fundamental_unit();
  FieldElement one = field.elt(1);
  FieldElement cur = e;
  for (long k = 1; k < 1000000; ++k) {
    if (cur.totally_positive() && conductor.contains(cur - one)) return {cur, k};
    cur = cur * e;
  }
  throw InvariantViolation("shintani_unit: no totally positive unit congruent to 1 found");
}

}  // namespace bstark
