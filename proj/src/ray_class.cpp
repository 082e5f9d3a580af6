#include "bstark/ray_class.hpp"

#include <algorithm>
#include <sstream>

namespace bstark {

int sign_bits(const FieldElement& x) {
  int s0 = x.sign(0);
  int s1 = x.sign(1);
  if (s0 == 0 || s1 == 0) throw std::invalid_argument("sign_bits: zero element");
  return (s0 < 0 ? 1 : 0) | (s1 < 0 ? 2 : 0);
}

RayClassGroup::RayClassGroup(const QuadField& field, const IdealF& conductor)
    : field_(field), conductor_(conductor), ring_(field, conductor) {
  const long nres = ring_.size();
  const long namb = nres * 4;
  auto amb_mul = [&](long x, long y) {
    return ambient_index(ring_.mul(x / 4, y / 4), static_cast<int>((x % 4) ^ (y % 4)));
  };

  // Subgroup generated by the images of -1 and eps0.
  FieldElement minus_one = field.elt(-1);
  const FieldElement& eps0 = field.fundamental_unit();
  std::vector<long> gens = {ambient_index(ring_.reduce(minus_one), sign_bits(minus_one)),
                            ambient_index(ring_.reduce(eps0), sign_bits(eps0))};
  long one = ambient_index(ring_.one(), 0);
  std::vector<long> units{one};
  std::vector<char> in_units(static_cast<std::size_t>(namb), 0);
  in_units[static_cast<std::size_t>(one)] = 1;
  for (std::size_t i = 0; i < units.size(); ++i) {
    for (long g : gens) {
      long y = amb_mul(units[i], g);
      if (!in_units[static_cast<std::size_t>(y)]) {
        in_units[static_cast<std::size_t>(y)] = 1;
        units.push_back(y);
      }
    }
  }

  coset_of_.assign(static_cast<std::size_t>(namb), -1);
  std::vector<long> order;
  order.push_back(one);
  for (long x = 0; x < namb; ++x) {
    if (x != one && ring_.is_unit(x / 4)) order.push_back(x);
  }
  std::vector<long> rep_amb;
  for (long x : order) {
    if (coset_of_[static_cast<std::size_t>(x)] >= 0) continue;
    int id = static_cast<int>(rep_amb.size());
    rep_amb.push_back(x);
    for (long u : units) coset_of_[static_cast<std::size_t>(amb_mul(x, u))] = id;
  }
  const int n = static_cast<int>(rep_amb.size());
  std::vector<int> table(static_cast<std::size_t>(n) * n);
  std::vector<std::string> labels;
  for (int a = 0; a < n; ++a) {
    long ra = rep_amb[static_cast<std::size_t>(a)];
    reps_.emplace_back(ra / 4, static_cast<int>(ra % 4));
    int bits = static_cast<int>(ra % 4);
    labels.push_back("[" + ring_.lift(ra / 4).to_string() + ";" + ((bits & 1) ? "-" : "+") +
                     ((bits & 2) ? "-" : "+") + "]");
    for (int b = 0; b < n; ++b) {
      table[static_cast<std::size_t>(a) * n + b] =
          coset_of_[static_cast<std::size_t>(amb_mul(ra, rep_amb[static_cast<std::size_t>(b)]))];
    }
  }
  group_ = AbelianGroup(std::move(table), n, std::move(labels));
  c_v1_ = class_of_residue(ring_.one(), 1);
  c_v2_ = class_of_residue(ring_.one(), 2);
}

int RayClassGroup::class_of_residue(long residue, int bits) const {
  int c = coset_of_[static_cast<std::size_t>(ambient_index(residue, bits))];
  if (c < 0) throw ConfigError("class_of: element not coprime to the conductor");
  return c;
}

int RayClassGroup::class_of_element(const FieldElement& x) const {
  long r;
  try {
    r = ring_.reduce(x);
  } catch (const std::domain_error&) {
    throw ConfigError("class_of: element not coprime to the conductor");
  }
  return class_of_residue(r, sign_bits(x));
}

int RayClassGroup::class_of(const IdealF& ideal) const { return class_of_element(ideal.generator()); }

std::vector<int> RayClassGroup::projection_to(const RayClassGroup& coarser) const {
  if (!coarser.conductor().divides(conductor_))
    throw std::invalid_argument("projection_to: target conductor must divide the conductor");
  std::vector<int> out;
  for (const auto& [res, bits] : reps_) {
    out.push_back(coarser.class_of_residue(coarser.residues().reduce(ring_.lift(res)), bits));
  }
  return out;
}

IdealF RayClassGroup::ideal_in_class(int cls, const Int& avoid) const {
  std::optional<FieldElement> best;
  Rat best_norm;
  for (long R = 1; R < 4096; R *= 2) {
    for (long a = -R; a <= R; ++a) {
      for (long b = -R; b <= R; ++b) {
        FieldElement x = field_.elt(a, b);
        if (x.is_zero()) continue;
        Rat nm = abs(x.norm());
        if (gcd(nm.get_num(), avoid) != 1) continue;
        if (class_of_element(x) != cls) continue;
        FieldElement can = field_.canonical_generator(x);
        if (!best || nm < best_norm ||
            (nm == best_norm && (can.a() < best->a() || (can.a() == best->a() && can.b() < best->b())))) {
          best = can;
          best_norm = nm;
        }
      }
    }
    if (best && R >= 4) return field_.ideal(*best);
  }
  throw InvariantViolation("ideal_in_class: no representative found");
}

std::vector<int> RayClassGroup::inertia_subgroup(const IdealF& prime) const {
  FieldElement rest = conductor_.generator();
  while (true) {
    FieldElement t = rest / prime.generator();
    if (!t.is_integral()) break;
    rest = t;
  }
  IdealF away = field_.ideal(rest);
  FieldElement one = field_.elt(1);
  std::vector<int> out;
  for (long r = 0; r < ring_.size(); ++r) {
    if (!ring_.is_unit(r)) continue;
    if (!away.contains(ring_.lift(r) - one)) continue;
    out.push_back(class_of_residue(r, 0));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------------------

bool ConfigReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const ConfigCheck& c) { return c.passed; });
}

std::string ConfigReport::failures() const {
  std::string out;
  for (const auto& c : checks) {
    if (c.passed) continue;
    if (!out.empty()) out += "; ";
    out += c.name + ": " + c.detail;
  }
  return out;
}

std::optional<IdealF> degree_one_prime(const QuadField& field, long ell) {
  if (ell < 2 || !is_prime(Int(ell))) return std::nullopt;
  for (const auto& P : field.primes_above(ell)) {
    if (P.residue_degree == 1) return P.ideal;
  }
  return std::nullopt;
}

ConfigReport validate_config(const QuadField& field, const IdealF& conductor, long p, const IdealF& ell_prime) {
  ConfigReport rep;
  auto add = [&](std::string name, bool ok, std::string detail) {
    rep.checks.push_back({std::move(name), ok, ok ? std::string("ok") : std::move(detail)});
  };
  const bool n_integral = conductor.is_integral();
  add("conductor_integral", n_integral, "conductor must be an integral ideal");
  add("conductor_nontrivial", !conductor.is_one(), "conductor must differ from (1)");
  const bool p_prime = p > 2 && is_prime(Int(p));
  add("p_odd_prime", p_prime, std::to_string(p) + " is not an odd prime");
  const int sym = p_prime ? field.splitting_symbol(p) : 0;
  add("p_inert", p_prime && sym == -1,
      std::to_string(p) + (sym == 1 ? " splits" : (sym == 0 ? " ramifies" : " is not prime")) + " in F, must be inert");
  add("p_congruent_1_mod_conductor", n_integral && conductor.contains(field.elt(p - 1)),
      std::to_string(p) + " is not congruent to 1 modulo the conductor");
  const Rat nl = ell_prime.norm();
  const bool ell_prime_norm = ell_prime.is_integral() && is_integer(nl) && is_prime(nl.get_num());
  const long ell = ell_prime_norm ? to_long(nl.get_num()) : 0;
  add("p_outside_S_and_T",
      n_integral && gcd(conductor.norm().get_num(), Int(p)) == 1 && p != ell,
      "(p) divides the conductor or equals a prime of T");
  add("ell_degree_one", ell_prime_norm, "N(l) must be a rational prime");
  add("ell_exceeds_n_plus_1", ell_prime_norm && ell > 3,
      "N(l) = " + nl.get_str() + " must exceed n+1 = 3");
  bool coprime = ell_prime_norm && n_integral && !ell_prime.divides(conductor) && ell != p;
  add("ell_coprime_to_np", coprime, "l must be coprime to n and p");
  if (rep.ok()) {
    RayClassGroup G(field, conductor);
    rep.c_v1 = G.c_v1();
    rep.c_v2 = G.c_v2();
    rep.c = G.c_v1();
    rep.c_product = G.group().mul(G.c_v1(), G.c_v2());
  }
  return rep;
}

}  // namespace bstark
