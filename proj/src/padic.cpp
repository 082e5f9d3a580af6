#include "bstark/padic.hpp"

#include <algorithm>

namespace bstark {

namespace {

int int_valuation(const Int& v, long p, int cap) {
  if (v == 0) return cap;
  Int t = v;
  int k = 0;
  while (k < cap && mpz_divisible_ui_p(t.get_mpz_t(), static_cast<unsigned long>(p))) {
    t /= p;
    ++k;
  }
  return k;
}

Int balanced(const Int& v, const Int& m) {
  Int r = mod_pos(v, m);
  if (2 * r > m) r -= m;
  return r;
}

__int128 mod128(__int128 a, __int128 m) {
  a %= m;
  return a < 0 ? a + m : a;
}

}  // namespace

PadicElement::PadicElement(const QuadField& field, long p, int precision, const Int& x, const Int& y)
    : d_(field.d()), tr_(field.omega_trace()), nm_(field.omega_norm()), p_(p), prec_(precision), x_(x), y_(y) {
  if (p < 3 || precision < 0) throw ConfigError("PadicElement: need an odd prime and precision >= 0");
  pm_ = ipow(Int(p), static_cast<unsigned long>(precision));
  reduce();
}

PadicElement PadicElement::from_field(const QuadField& field, long p, int precision, const FieldElement& v) {
  Int pm = ipow(Int(p), static_cast<unsigned long>(precision));
  if (v.a().get_den() % p == 0 || v.b().get_den() % p == 0)
    throw ConfigError("PadicElement: " + v.to_string() + " is not p-integral");
  return PadicElement(field, p, precision, rat_mod(v.a(), pm), rat_mod(v.b(), pm));
}

void PadicElement::reduce() {
  x_ = mod_pos(x_, pm_);
  y_ = mod_pos(y_, pm_);
}

void PadicElement::check_compatible(const PadicElement& o) const {
  if (p_ != o.p_ || d_ != o.d_) throw std::invalid_argument("PadicElement: mismatched rings");
}

int PadicElement::valuation() const { return std::min(int_valuation(x_, p_, prec_), int_valuation(y_, p_, prec_)); }

PadicElement operator+(const PadicElement& a, const PadicElement& b) {
  a.check_compatible(b);
  PadicElement r = a.prec_ <= b.prec_ ? a : b;
  r.x_ = a.x_ + b.x_;
  r.y_ = a.y_ + b.y_;
  r.reduce();
  return r;
}

PadicElement operator-(const PadicElement& a, const PadicElement& b) {
  a.check_compatible(b);
  PadicElement r = a.prec_ <= b.prec_ ? a : b;
  r.x_ = a.x_ - b.x_;
  r.y_ = a.y_ - b.y_;
  r.reduce();
  return r;
}

PadicElement operator*(const PadicElement& a, const PadicElement& b) {
  a.check_compatible(b);
  // Both factors are integral, so the product is known to min(precision) at least.
  PadicElement r = a.prec_ <= b.prec_ ? a : b;
  Int bd = a.y_ * b.y_;
  r.x_ = a.x_ * b.x_ - a.nm_ * bd;
  r.y_ = a.x_ * b.y_ + a.y_ * b.x_ + a.tr_ * bd;
  r.reduce();
  return r;
}

PadicElement PadicElement::conjugate() const {
  PadicElement r = *this;
  r.x_ = x_ + y_ * tr_;
  r.y_ = -y_;
  r.reduce();
  return r;
}

Int PadicElement::norm() const { return mod_pos(x_ * x_ + tr_ * x_ * y_ + nm_ * y_ * y_, pm_); }

Int PadicElement::trace() const { return mod_pos(2 * x_ + tr_ * y_, pm_); }

PadicElement PadicElement::scalar(const Int& v) const {
  PadicElement r = *this;
  r.x_ = v;
  r.y_ = 0;
  r.reduce();
  return r;
}

PadicElement PadicElement::inverse() const {
  if (prec_ == 0) return *this;
  if (!is_unit()) throw PrecisionError("PadicElement: inverse of a non-unit");
  // 1/(x + y omega) = conj / N, N a p-adic unit because p is inert.
  Int ninv = inv_mod(norm(), pm_);
  PadicElement c = conjugate();
  c.x_ *= ninv;
  c.y_ *= ninv;
  c.reduce();
  return c;
}

PadicElement PadicElement::pow(const Int& k) const {
  PadicElement base = k < 0 ? inverse() : *this;
  Int e = k < 0 ? Int(-k) : k;
  PadicElement r(*this);
  r.x_ = 1;
  r.y_ = 0;
  r.reduce();
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) r = r * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return r;
}

PadicElement PadicElement::divide_by_p(int k) const {
  if (k < 0 || k > prec_) throw PrecisionError("PadicElement: cannot divide by p^" + std::to_string(k));
  if (valuation() < k) throw PrecisionError("PadicElement: element is not divisible by p^" + std::to_string(k));
  PadicElement r = *this;
  Int pk = ipow(Int(p_), static_cast<unsigned long>(k));
  r.prec_ = prec_ - k;
  r.pm_ = pm_ / pk;
  r.x_ = x_ / pk;
  r.y_ = y_ / pk;
  r.reduce();
  return r;
}

PadicElement PadicElement::with_precision(int m) const {
  if (m > prec_) throw PrecisionError("PadicElement: cannot raise precision");
  PadicElement r = *this;
  r.prec_ = m;
  r.pm_ = ipow(Int(p_), static_cast<unsigned long>(m));
  r.reduce();
  return r;
}

bool PadicElement::congruent(const PadicElement& other, int m) const {
  check_compatible(other);
  if (m > prec_ || m > other.prec_) throw PrecisionError("PadicElement: congruence beyond known precision");
  Int pm = ipow(Int(p_), static_cast<unsigned long>(m));
  return mod_pos(x_ - other.x_, pm) == 0 && mod_pos(y_ - other.y_, pm) == 0;
}

std::string PadicElement::to_string() const {
  return x_.get_str() + " + " + y_.get_str() + "*w (mod " + std::to_string(p_) + "^" + std::to_string(prec_) + ")";
}

// ---------------------------------------------------------------------------

bool PadicUnitValue::matches(const PadicUnitValue& other) const {
  if (exponent != other.exponent) return false;
  return unit.congruent(other.unit, std::min(unit.precision(), other.unit.precision()));
}

std::string PadicUnitValue::to_string() const {
  return std::to_string(unit.p()) + "^" + std::to_string(exponent) + " * (" + unit.to_string() + ")";
}

Int principal_exponent(const Rat& r, long p, int m) {
  if (r.get_den() % p == 0) throw std::invalid_argument("principal_exponent: exponent is not p-integral");
  // 1 + p O_p modulo p^m has exponent p^(m-1).
  Int mod = ipow(Int(p), static_cast<unsigned long>(std::max(m - 1, 0)));
  if (mod == 1) return 0;
  return rat_mod(r, mod);
}

PadicElement principal_part(const PadicElement& u) {
  if (!u.is_unit()) throw PrecisionError("principal_part: argument is not a unit");
  const long q1 = u.p() * u.p() - 1;
  PadicElement w = u.pow(Int(q1));
  return w.pow(principal_exponent(Rat(1, q1), u.p(), u.precision()));
}

HatUnitValue HatUnitValue::from(const PadicUnitValue& v) { return {Rat(v.exponent), principal_part(v.unit)}; }

HatUnitValue operator*(const HatUnitValue& a, const HatUnitValue& b) {
  return {a.exponent + b.exponent, a.principal * b.principal};
}

HatUnitValue HatUnitValue::inverse() const { return {-exponent, principal.inverse()}; }

HatUnitValue HatUnitValue::pow(const Rat& r) const {
  return {exponent * r, principal.pow(principal_exponent(r, principal.p(), principal.precision()))};
}

bool HatUnitValue::matches(const HatUnitValue& other) const {
  if (exponent != other.exponent) return false;
  return principal.congruent(other.principal, std::min(principal.precision(), other.principal.precision()));
}

bool HatUnitValue::is_one() const { return exponent == 0 && principal.x() == mod_pos(Int(1), principal.modulus()) && principal.y() == 0; }

std::string HatUnitValue::to_string() const {
  return std::to_string(principal.p()) + "^(" + exponent.get_str() + ") * <" + principal.to_string() + ">";
}

PadicElement coset_representative(const QuadField& field, long p, int m, long index) {
  Int pm = ipow(Int(p), static_cast<unsigned long>(m));
  long pml = to_long(pm);
  return PadicElement(field, p, m, Int(index / pml), Int(index % pml));
}

// ---------------------------------------------------------------------------

RiemannAccumulator::RiemannAccumulator(const QuadField& field, long p, int m)
    : field_(&field), p_(p), m_(m), tr_(field.omega_trace()), nm_(field.omega_norm()) {
  Int pm = ipow(Int(p), static_cast<unsigned long>(m));
  if (mpz_sizeinbase(pm.get_mpz_t(), 2) > 62) throw PrecisionError("RiemannAccumulator: p^m exceeds 62 bits");
  pm_ = to_long(pm);
}

RiemannAccumulator::Pair RiemannAccumulator::mul(const Pair& a, const Pair& b) const {
  // Operands are reduced below 2^62, so each product needs the full 128 bits before reduction.
  __int128 ac = mod128(a.x * b.x, pm_);
  __int128 bd = mod128(a.y * b.y, pm_);
  __int128 ad = mod128(a.x * b.y, pm_);
  __int128 bc = mod128(a.y * b.x, pm_);
  Pair r;
  r.x = mod128(ac - mod128(nm_ * bd, pm_), pm_);
  r.y = mod128(ad + bc + mod128(tr_ * bd, pm_), pm_);
  return r;
}

void RiemannAccumulator::add(long index, long mu) {
  const long pm = static_cast<long>(pm_);
  long x = index / pm, y = index % pm;
  if (x % p_ == 0 && y % p_ == 0) throw std::invalid_argument("RiemannAccumulator: coset is not a unit");
  ++cosets_;
  if (mu == 0) return;
  auto it = std::lower_bound(by_mu_.begin(), by_mu_.end(), mu,
                             [](const std::pair<long, Pair>& e, long v) { return e.first < v; });
  if (it == by_mu_.end() || it->first != mu) it = by_mu_.insert(it, {mu, Pair{}});
  it->second = mul(it->second, Pair{x, y});
}

void RiemannAccumulator::merge(const RiemannAccumulator& other) {
  cosets_ += other.cosets_;
  for (const auto& [mu, v] : other.by_mu_) {
    auto it = std::lower_bound(by_mu_.begin(), by_mu_.end(), mu,
                               [](const std::pair<long, Pair>& e, long w) { return e.first < w; });
    if (it == by_mu_.end() || it->first != mu) it = by_mu_.insert(it, {mu, Pair{}});
    it->second = mul(it->second, v);
  }
}

PadicElement RiemannAccumulator::result() const {
  PadicElement r(*field_, p_, m_, Int(1), Int(0));
  for (const auto& [mu, v] : by_mu_) {
    PadicElement base(*field_, p_, m_, to_int(v.x), to_int(v.y));
    r = r * base.pow(Int(mu));
  }
  return r;
}

// ---------------------------------------------------------------------------

std::optional<FieldElement> recognize(const QuadField& field, const PadicElement& x, const Int& bound) {
  if (!(x.modulus() > 2 * bound * bound)) throw PrecisionError("recognize: p^m must exceed 2 bound^2");
  Int a = balanced(x.x(), x.modulus());
  Int b = balanced(x.y(), x.modulus());
  if (abs(a) > bound || abs(b) > bound) return std::nullopt;
  return field.elt(Rat(a), Rat(b));
}

Recognition recognize_escalating(const QuadField& field, const PadicElement& x, const Int& start) {
  Recognition out;
  Int bound = start < 1 ? Int(1) : start;
  if (!(x.modulus() > 2 * bound * bound)) {
    out.bound = bound;
    out.detail = "precision " + std::to_string(x.precision()) + " is below the information bound for height " +
                 bound.get_str();
    return out;
  }
  while (x.modulus() > 2 * bound * bound) {
    out.bound = bound;
    if (auto v = recognize(field, x, bound)) {
      out.value = v;
      return out;
    }
    bound *= 2;
  }
  out.detail = "no lift of height <= " + out.bound.get_str() + " at precision " + std::to_string(x.precision());
  return out;
}

}  // namespace bstark
