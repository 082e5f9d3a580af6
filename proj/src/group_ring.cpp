#include "bstark/group_ring.hpp"

#include <algorithm>
#include <sstream>
#include <thread>

namespace bstark {

namespace {

std::string ring_name(BaseRing r, const Int& modulus) {
  switch (r) {
    case BaseRing::rational: return "Q[G]";
    case BaseRing::integer: return "Z[G]";
    case BaseRing::modular: return "Z/" + modulus.get_str() + "[G]";
  }
  return "?";
}

}  // namespace

GroupRingElement::GroupRingElement(std::shared_ptr<const AbelianGroup> G, BaseRing ring, const Int& modulus)
    : G_(std::move(G)), ring_(ring), modulus_(modulus) {
  if (!G_) throw std::invalid_argument("GroupRingElement: null group");
  if (ring_ == BaseRing::modular && modulus_ < 2) throw ConfigError("GroupRingElement: modulus must be at least 2");
  if (ring_ != BaseRing::modular) modulus_ = 0;
  c_.assign(static_cast<std::size_t>(G_->size()), Rat(0));
}

GroupRingElement GroupRingElement::from_coefficients(std::shared_ptr<const AbelianGroup> G, std::vector<Rat> coefficients,
                                                     BaseRing ring, const Int& modulus) {
  GroupRingElement x(std::move(G), ring, modulus);
  if (coefficients.size() != x.c_.size()) throw std::invalid_argument("GroupRingElement: wrong number of coefficients");
  x.c_ = std::move(coefficients);
  x.reduce();
  return x;
}

GroupRingElement GroupRingElement::basis(int g, const Rat& scale) const {
  GroupRingElement x(G_, ring_, modulus_);
  x.c_.at(static_cast<std::size_t>(g)) = scale;
  x.reduce();
  return x;
}

GroupRingElement GroupRingElement::norm(const std::vector<int>& subgroup) const {
  GroupRingElement x(G_, ring_, modulus_);
  for (int h : subgroup) x.c_.at(static_cast<std::size_t>(h)) += 1;
  x.reduce();
  return x;
}

void GroupRingElement::reduce() {
  for (auto& c : c_) c.canonicalize();
  if (ring_ == BaseRing::rational) return;
  for (auto& c : c_) {
    if (!is_integer(c)) throw ConfigError("GroupRingElement: non-integral coefficient " + c.get_str() + " in " +
                                          ring_name(ring_, modulus_));
    if (ring_ == BaseRing::modular) c = Rat(mod_pos(c.get_num(), modulus_));
  }
}

void GroupRingElement::check_compatible(const GroupRingElement& o) const {
  if (G_ != o.G_ && !(G_ && o.G_ && G_->size() == o.G_->size()))
    throw std::invalid_argument("GroupRingElement: different groups");
  if (ring_ != o.ring_ || modulus_ != o.modulus_) throw std::invalid_argument("GroupRingElement: different base rings");
}

bool GroupRingElement::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](const Rat& c) { return c == 0; });
}

bool GroupRingElement::is_integral() const {
  return std::all_of(c_.begin(), c_.end(), [](const Rat& c) { return is_integer(c); });
}

Int GroupRingElement::denominator() const {
  Int d = 1;
  for (const auto& c : c_) d = lcm(d, c.get_den());
  return d;
}

Rat GroupRingElement::augmentation() const {
  Rat s = 0;
  for (const auto& c : c_) s += c;
  if (ring_ == BaseRing::modular) s = Rat(mod_pos(s.get_num(), modulus_));
  return s;
}

GroupRingElement GroupRingElement::sharp() const {
  GroupRingElement x(G_, ring_, modulus_);
  for (int g = 0; g < G_->size(); ++g) x.c_[static_cast<std::size_t>(G_->inv(g))] = c_[static_cast<std::size_t>(g)];
  return x;
}

GroupRingElement GroupRingElement::in_ring(BaseRing ring, const Int& modulus) const {
  return from_coefficients(G_, c_, ring, modulus);
}

GroupRingElement operator+(const GroupRingElement& x, const GroupRingElement& y) {
  x.check_compatible(y);
  GroupRingElement r = x;
  for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] += y.c_[i];
  r.reduce();
  return r;
}

GroupRingElement operator-(const GroupRingElement& x, const GroupRingElement& y) {
  x.check_compatible(y);
  GroupRingElement r = x;
  for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] -= y.c_[i];
  r.reduce();
  return r;
}

GroupRingElement operator*(const GroupRingElement& x, const GroupRingElement& y) {
  x.check_compatible(y);
  GroupRingElement r(x.G_, x.ring_, x.modulus_);
  const int n = x.G_->size();
  for (int a = 0; a < n; ++a) {
    const Rat& ca = x.c_[static_cast<std::size_t>(a)];
    if (ca == 0) continue;
    for (int b = 0; b < n; ++b) {
      const Rat& cb = y.c_[static_cast<std::size_t>(b)];
      if (cb != 0) r.c_[static_cast<std::size_t>(x.G_->mul(a, b))] += ca * cb;
    }
  }
  r.reduce();
  return r;
}

GroupRingElement operator*(const Rat& s, const GroupRingElement& x) {
  GroupRingElement r = x;
  for (auto& c : r.c_) c *= s;
  r.reduce();
  return r;
}

GroupRingElement GroupRingElement::operator-() const { return Rat(-1) * *this; }

bool operator==(const GroupRingElement& x, const GroupRingElement& y) {
  x.check_compatible(y);
  return x.c_ == y.c_;
}

std::string GroupRingElement::to_string() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < c_.size(); ++i) os << (i ? ", " : "") << c_[i].get_str();
  os << "]";
  return os.str();
}

// ---------------------------------------------------------------------------

std::vector<std::vector<Int>> hermite_form(std::vector<std::vector<Int>> rows) {
  if (rows.empty()) return rows;
  const std::size_t ncol = rows.front().size();
  std::size_t r = 0;
  std::vector<std::size_t> pivots;
  for (std::size_t col = 0; col < ncol && r < rows.size(); ++col) {
    // Euclid on the column below r until a single nonzero entry remains.
    for (;;) {
      std::size_t best = rows.size();
      for (std::size_t i = r; i < rows.size(); ++i) {
        if (rows[i][col] != 0 && (best == rows.size() || abs(rows[i][col]) < abs(rows[best][col]))) best = i;
      }
      if (best == rows.size()) break;
      std::swap(rows[r], rows[best]);
      bool done = true;
      for (std::size_t i = r + 1; i < rows.size(); ++i) {
        if (rows[i][col] == 0) continue;
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), rows[i][col].get_mpz_t(), rows[r][col].get_mpz_t());
        for (std::size_t k = col; k < ncol; ++k) rows[i][k] -= q * rows[r][k];
        if (rows[i][col] != 0) done = false;
      }
      if (done) break;
    }
    if (r < rows.size() && rows[r][col] != 0) {
      if (rows[r][col] < 0)
        for (auto& v : rows[r]) v = -v;
      pivots.push_back(col);
      ++r;
    }
  }
  rows.resize(r);
  for (std::size_t i = 0; i < r; ++i) {
    const std::size_t col = pivots[i];
    for (std::size_t j = 0; j < i; ++j) {
      Int q;
      mpz_fdiv_q(q.get_mpz_t(), rows[j][col].get_mpz_t(), rows[i][col].get_mpz_t());
      if (q != 0)
        for (std::size_t k = col; k < ncol; ++k) rows[j][k] -= q * rows[i][k];
    }
  }
  return rows;
}

namespace {

std::size_t pivot_of(const std::vector<Int>& row) {
  for (std::size_t k = 0; k < row.size(); ++k)
    if (row[k] != 0) return k;
  return row.size();
}

}  // namespace

GroupRingIdeal::GroupRingIdeal(std::shared_ptr<const AbelianGroup> G, std::vector<GroupRingElement> generators,
                               BaseRing ring, const Int& modulus)
    : G_(std::move(G)), ring_(ring), modulus_(ring == BaseRing::modular ? modulus : Int(0)), gens_(std::move(generators)) {
  if (!G_) throw std::invalid_argument("GroupRingIdeal: null group");
  const int n = G_->size();
  for (auto& g : gens_) {
    if (g.ring() != ring_ || g.modulus() != modulus_) g = g.in_ring(ring_, modulus_);
    den_ = lcm(den_, g.denominator());
  }
  std::vector<std::vector<Int>> rows;
  for (const auto& x : gens_) {
    if (x.is_zero()) continue;
    for (int h = 0; h < n; ++h) {
      std::vector<Int> row(static_cast<std::size_t>(n), Int(0));
      for (int g = 0; g < n; ++g) {
        Rat v = x[g] * Rat(den_);
        row[static_cast<std::size_t>(G_->mul(h, g))] = v.get_num();
      }
      rows.push_back(std::move(row));
    }
  }
  if (ring_ == BaseRing::modular) {
    for (int g = 0; g < n; ++g) {
      std::vector<Int> row(static_cast<std::size_t>(n), Int(0));
      row[static_cast<std::size_t>(g)] = modulus_ * den_;
      rows.push_back(std::move(row));
    }
  }
  lattice_ = hermite_form(std::move(rows));
}

GroupRingIdeal GroupRingIdeal::unit(std::shared_ptr<const AbelianGroup> G, BaseRing ring, const Int& modulus) {
  GroupRingElement one(G, ring, modulus);
  return GroupRingIdeal(G, {one.constant(1)}, ring, modulus);
}

GroupRingIdeal GroupRingIdeal::zero(std::shared_ptr<const AbelianGroup> G, BaseRing ring, const Int& modulus) {
  return GroupRingIdeal(std::move(G), {}, ring, modulus);
}

bool GroupRingIdeal::contains(const GroupRingElement& x) const {
  std::vector<Int> v;
  for (int g = 0; g < G_->size(); ++g) {
    Rat s = x[g] * Rat(den_);
    if (!is_integer(s)) return false;
    v.push_back(s.get_num());
  }
  for (const auto& row : lattice_) {
    const std::size_t p = pivot_of(row);
    for (std::size_t k = 0; k < p; ++k)
      if (v[k] != 0) return false;
    if (v[p] == 0) continue;
    if (!mpz_divisible_p(v[p].get_mpz_t(), row[p].get_mpz_t())) return false;
    Int q = v[p] / row[p];
    for (std::size_t k = p; k < v.size(); ++k) v[k] -= q * row[k];
  }
  return std::all_of(v.begin(), v.end(), [](const Int& c) { return c == 0; });
}

bool GroupRingIdeal::contains(const GroupRingIdeal& other) const {
  for (const auto& g : other.gens_)
    if (!contains(g)) return false;
  if (other.ring_ == BaseRing::modular) return contains(GroupRingElement(G_, BaseRing::rational).constant(Rat(other.modulus_)));
  return true;
}

bool GroupRingIdeal::is_unit() const { return contains(GroupRingElement(G_, BaseRing::rational).constant(1)); }

bool GroupRingIdeal::is_integral() const {
  return std::all_of(gens_.begin(), gens_.end(), [](const GroupRingElement& g) { return g.is_integral(); });
}

std::vector<GroupRingElement> GroupRingIdeal::basis_elements() const {
  std::vector<GroupRingElement> out;
  for (const auto& row : lattice_) {
    std::vector<Rat> c;
    for (const auto& v : row) c.push_back(make_rat(v, den_));
    out.push_back(GroupRingElement::from_coefficients(G_, std::move(c), BaseRing::rational).in_ring(
        ring_ == BaseRing::modular ? BaseRing::integer : ring_));
    if (ring_ == BaseRing::modular) out.back() = out.back().in_ring(ring_, modulus_);
  }
  return out;
}

GroupRingIdeal operator+(const GroupRingIdeal& a, const GroupRingIdeal& b) {
  auto gens = a.gens_;
  gens.insert(gens.end(), b.gens_.begin(), b.gens_.end());
  return GroupRingIdeal(a.G_, std::move(gens), a.ring_, a.modulus_);
}

GroupRingIdeal operator*(const GroupRingIdeal& a, const GroupRingIdeal& b) {
  // Z-bases keep the generator count at most #G per factor.
  auto ba = a.basis_elements(), bb = b.basis_elements();
  std::vector<GroupRingElement> gens;
  for (const auto& x : ba)
    for (const auto& y : bb) gens.push_back(x * y);
  return GroupRingIdeal(a.G_, std::move(gens), a.ring_, a.modulus_);
}

GroupRingIdeal operator*(const GroupRingElement& x, const GroupRingIdeal& a) {
  std::vector<GroupRingElement> gens;
  for (const auto& g : a.gens_) gens.push_back(x.in_ring(a.ring_, a.modulus_) * g);
  return GroupRingIdeal(a.G_, std::move(gens), a.ring_, a.modulus_);
}

std::string GroupRingIdeal::dump() const {
  std::ostringstream os;
  os << "# ideal of " << ring_name(ring_, modulus_) << "; columns:";
  for (int g = 0; g < G_->size(); ++g) os << " " << G_->label(g);
  os << "\n";
  for (const auto& g : gens_) os << g.to_string() << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------

GroupRingElement determinant(const GroupRingMatrix& a) {
  const std::size_t n = a.size();
  if (n == 0) throw std::invalid_argument("determinant: empty matrix");
  if (n == 1) return a[0][0];
  GroupRingElement det = a[0][0] - a[0][0];
  for (std::size_t j = 0; j < n; ++j) {
    if (a[0][j].is_zero()) continue;
    GroupRingMatrix sub;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<GroupRingElement> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != j) row.push_back(a[i][k]);
      sub.push_back(std::move(row));
    }
    GroupRingElement term = a[0][j] * determinant(sub);
    det = (j % 2 == 0) ? det + term : det - term;
  }
  return det;
}

namespace {

void subsets(int n, int k, int start, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == k) {
    out.push_back(cur);
    return;
  }
  for (int i = start; i < n; ++i) {
    cur.push_back(i);
    subsets(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

std::vector<std::vector<int>> subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  subsets(n, k, 0, cur, out);
  return out;
}

}  // namespace

GroupRingIdeal fitting_ideal(const GroupRingMatrix& a, int i, const std::shared_ptr<const AbelianGroup>& group) {
  if (i < 0) throw std::invalid_argument("fitting_ideal: negative index");
  const int n = static_cast<int>(a.size());
  const int m = n ? static_cast<int>(a.front().size()) : 0;
  std::shared_ptr<const AbelianGroup> G = group;
  BaseRing ring = BaseRing::integer;
  Int modulus = 0;
  if (n && m) {
    G = a[0][0].group_ptr();
    ring = a[0][0].ring();
    modulus = a[0][0].modulus();
  }
  if (!G) throw std::invalid_argument("fitting_ideal: group required for an empty matrix");
  for (const auto& row : a)
    if (static_cast<int>(row.size()) != m) throw std::invalid_argument("fitting_ideal: ragged matrix");
  if (i >= n) return GroupRingIdeal::unit(G, ring, modulus);
  const int k = n - i;
  if (k > m) return GroupRingIdeal::zero(G, ring, modulus);

  auto row_sets = subsets(n, k), col_sets = subsets(m, k);
  std::vector<std::vector<GroupRingElement>> minors(row_sets.size());
  auto work = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t r = lo; r < hi; ++r) {
      for (const auto& cs : col_sets) {
        GroupRingMatrix sub;
        for (int ri : row_sets[r]) {
          std::vector<GroupRingElement> row;
          for (int ci : cs) row.push_back(a[static_cast<std::size_t>(ri)][static_cast<std::size_t>(ci)]);
          sub.push_back(std::move(row));
        }
        GroupRingElement d = determinant(sub);
        if (!d.is_zero()) minors[r].push_back(std::move(d));
      }
    }
  };
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (n >= 6 && hw > 1) {
    std::vector<std::thread> pool;
    const std::size_t chunk = (row_sets.size() + hw - 1) / hw;
    for (std::size_t lo = 0; lo < row_sets.size(); lo += chunk)
      pool.emplace_back(work, lo, std::min(row_sets.size(), lo + chunk));
    for (auto& t : pool) t.join();
  } else {
    work(0, row_sets.size());
  }
  std::vector<GroupRingElement> gens;
  for (auto& v : minors)
    for (auto& d : v) gens.push_back(std::move(d));
  return GroupRingIdeal(G, std::move(gens), ring, modulus);
}

// ---------------------------------------------------------------------------

std::vector<int> InertiaDatum::decomposition_group(const AbelianGroup& G) const {
  std::vector<int> gens = inertia;
  gens.push_back(frobenius);
  return G.subgroup(gens);
}

void InertiaDatum::validate(const AbelianGroup& G) const {
  std::vector<int> I = G.subgroup(inertia);
  if (I != inertia) throw ConfigError("InertiaDatum: inertia list is not a sorted subgroup");
  long product = 1;
  for (int g : decomposition) {
    if (!std::binary_search(I.begin(), I.end(), g)) throw ConfigError("InertiaDatum: cyclic factor outside I_v");
    product *= G.order(g);
  }
  if (product != static_cast<long>(I.size()) || G.subgroup(decomposition) != I)
    throw ConfigError("InertiaDatum: cyclic factors do not decompose I_v");
}

GroupRingElement inertia_idempotent(const std::shared_ptr<const AbelianGroup>& G, const InertiaDatum& v) {
  GroupRingElement z(G, BaseRing::rational);
  return make_rat(1, static_cast<long>(v.inertia.size())) * z.norm(v.inertia);
}

GroupRingIdeal sku_local_factor(const std::shared_ptr<const AbelianGroup>& G, const InertiaDatum& v) {
  GroupRingElement z(G, BaseRing::rational);
  GroupRingElement e = inertia_idempotent(G, v);
  return GroupRingIdeal(G, {z.norm(v.inertia), z.constant(1) - z.basis(v.frobenius) * e}, BaseRing::rational);
}

SkuIdeal sku_ideal(const GroupRingElement& theta_sharp, const std::vector<InertiaDatum>& inertia) {
  const auto& G = theta_sharp.group_ptr();
  const GroupRingElement theta = theta_sharp.in_ring(BaseRing::rational);
  std::vector<GroupRingElement> gens{theta};
  for (const auto& v : inertia) {
    v.validate(*G);
    GroupRingElement z(G, BaseRing::rational);
    GroupRingElement e = inertia_idempotent(G, v);
    const GroupRingElement local[2] = {z.norm(v.inertia), z.constant(1) - z.basis(v.frobenius) * e};
    std::vector<GroupRingElement> next;
    for (const auto& g : gens)
      for (const auto& l : local) next.push_back(g * l);
    gens = std::move(next);
  }
  std::ostringstream cert;
  cert << gens.size() << " generators from " << inertia.size() << " ramified places, all in Z[G]";
  for (std::size_t k = 0; k < gens.size(); ++k) {
    if (!gens[k].is_integral())
      throw InvariantViolation("sku_ideal: generator " + std::to_string(k) + " = " + gens[k].to_string() +
                               " is not in Z[G]");
  }
  std::vector<GroupRingElement> integral;
  for (const auto& g : gens) integral.push_back(g.in_ring(BaseRing::integer));
  SkuIdeal out{GroupRingIdeal(G, integral, BaseRing::integer), integral, cert.str()};
  return out;
}

AKLocalIdeal ak_local_ideal(const std::shared_ptr<const AbelianGroup>& G, const InertiaDatum& v) {
  v.validate(*G);
  GroupRingElement z(G, BaseRing::rational);
  const int s = static_cast<int>(v.decomposition.size());
  std::vector<GroupRingElement> N;
  for (int g : v.decomposition) N.push_back(z.norm(G->subgroup({g})));

  AKLocalIdeal out;
  // Z_i: products N_{j_1} ... N_{j_{s-i}} over non-decreasing tuples.
  for (int i = 1; i <= s; ++i) {
    std::vector<GroupRingElement> gens;
    std::vector<int> tuple(static_cast<std::size_t>(s - i), 0);
    for (;;) {
      GroupRingElement prod = z.constant(1);
      for (int j : tuple) prod = prod * N[static_cast<std::size_t>(j)];
      gens.push_back(prod);
      int pos = s - i - 1;
      while (pos >= 0 && tuple[static_cast<std::size_t>(pos)] == s - 1) --pos;
      if (pos < 0) break;
      int val = tuple[static_cast<std::size_t>(pos)] + 1;
      for (int q = pos; q < s - i; ++q) tuple[static_cast<std::size_t>(q)] = val;
    }
    out.Z.emplace_back(G, std::move(gens), BaseRing::rational);
  }
  std::vector<GroupRingElement> aug;
  for (int h : v.decomposition_group(*G))
    if (h != 0) aug.push_back(z.basis(h) - z.constant(1));
  out.augmentation = GroupRingIdeal(G, aug, BaseRing::rational);

  out.J = GroupRingIdeal::zero(G, BaseRing::rational);
  GroupRingIdeal power = GroupRingIdeal::unit(G, BaseRing::rational);
  for (int i = 1; i <= s; ++i) {
    out.J = out.J + out.Z[static_cast<std::size_t>(i - 1)] * power;
    power = power * out.augmentation;
  }
  GroupRingElement e = inertia_idempotent(G, v);
  GroupRingElement u = z.constant(1) - e * z.basis(v.frobenius);
  out.ideal = GroupRingIdeal(G, {z.norm(v.inertia)}, BaseRing::rational) + u * out.J;
  return out;
}

GroupRingElement minus_part(const GroupRingElement& x, int c) {
  GroupRingElement r = x.in_ring(BaseRing::rational);
  GroupRingElement z(x.group_ptr(), BaseRing::rational);
  return r * (make_rat(1, 2) * (z.constant(1) - z.basis(c)));
}

GroupRingIdeal minus_part(const GroupRingIdeal& I, int c) {
  std::vector<GroupRingElement> gens;
  for (const auto& g : I.generators()) gens.push_back(minus_part(g, c));
  return GroupRingIdeal(I.group_ptr(), std::move(gens), BaseRing::rational);
}

std::vector<Cyclotomic> character_idempotent(const AbelianGroup& G, const Character& chi) {
  std::vector<Cyclotomic> e;
  const Rat w = make_rat(1, G.size());
  for (int g = 0; g < G.size(); ++g) e.push_back(w * Cyclotomic::root(chi.e, chi.conj_value(g)));
  return e;
}

std::vector<InertiaDatum> ramification_data(const RayClassGroup& G) {
  const QuadField& F = G.field();
  std::vector<InertiaDatum> out;
  auto factors = F.factor(G.conductor());
  for (std::size_t k = 0; k < factors.size(); ++k) {
    const IdealF& v = factors[k].first.ideal;
    InertiaDatum d;
    d.inertia = G.group().subgroup(G.inertia_subgroup(v));
    if (d.inertia.size() <= 1) continue;
    d.label = v.to_string();
    d.decomposition = G.group().cyclic_decomposition(d.inertia);
    // Frobenius of v in the ray class group of the prime-to-v part of n, lifted to G.
    IdealF rest = F.ideal(1);
    for (std::size_t j = 0; j < factors.size(); ++j) {
      if (j == k) continue;
      rest = F.mul(rest, F.ideal(factors[j].first.ideal.generator().pow(factors[j].second)));
    }
    RayClassGroup coarse(F, rest);
    auto proj = G.projection_to(coarse);
    const int target = coarse.class_of(v);
    auto it = std::find(proj.begin(), proj.end(), target);
    if (it == proj.end()) throw InvariantViolation("ramification_data: projection is not surjective");
    d.frobenius = static_cast<int>(it - proj.begin());
    d.validate(G.group());
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace bstark
