#pragma once

#include "bstark/cones.hpp"
#include "bstark/cyclotomic.hpp"
#include "bstark/field.hpp"
#include "bstark/ray_class.hpp"

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace bstark {

/// B_1(x) = x - 1/2 and B_2(x) = x^2 - x + 1/6.
Rat bernoulli_poly(int k, const Rat& x);

/// Representative of x modulo 1 in (0, 1].
Rat frac_up(const Rat& x);

/// Summation plan for (shift + lattice) intersected with the open cone on
/// one or two totally positive generators, evaluated at s = 0.
///
/// Points are written alpha = sum (x_i + n_i) w_i with w_i primitive lattice
/// vectors on the generator rays, n_i >= 0 and x in a finite set of
/// fractional parts (one per class of the lattice modulo Z w_1 + Z w_2).
class ConePlan {
 public:
  ConePlan(const QuadField& field, std::vector<FieldElement> generators, const Lattice2& lattice);

  std::size_t rank() const { return w_.size(); }
  const std::vector<FieldElement>& primitive_generators() const { return w_; }
  /// Number of fractional-part classes, i.e. [lattice : Z w_1 + Z w_2] (1 for rank 1).
  std::size_t point_classes() const { return reps_.size(); }

  Rat value(const FieldElement& shift) const;

  /// Fractional parts x for a given shift (used by tests and the integer path).
  std::vector<std::vector<Rat>> fractional_points(const FieldElement& shift) const;

  // Coordinates in the (w_1, w_2) basis (rank 2) or (w, u) basis (rank 1).
  std::array<Rat, 2> coords(const FieldElement& x) const;
  /// Tr(w_1/w_2), Tr(w_2/w_1) for rank 2.
  const Rat& trace12() const { return t12_; }
  const Rat& trace21() const { return t21_; }
  /// Lattice classes modulo Z w_1 + Z w_2, in (w_1, w_2) coordinates.
  const std::vector<std::array<Rat, 2>>& representatives() const { return reps_; }

 private:
  long d_;
  std::vector<FieldElement> w_;
  FieldElement u_;  // rank 1: completes w to a lattice basis
  Rat inv_[2][2];   // field coordinates (a, b) -> plan coordinates
  Rat t12_, t21_;
  std::vector<std::array<Rat, 2>> reps_;
};

Rat cone_zeta_at_zero(const QuadField& field, const std::vector<FieldElement>& generators, const Lattice2& lattice,
                      const FieldElement& shift);

/// One face of the signed domain: open cone on the listed generators, with the term weight.
struct DomainFace {
  std::vector<FieldElement> generators;
  int weight = 1;
};

/// The signed fundamental domain for E(n) = <eps>, with faces as field elements.
struct ShintaniDomain {
  FieldElement epsilon;
  SignedDomain<QuadReal> domain;
  std::vector<DomainFace> faces;
  std::string descriptor;
};

ShintaniDomain make_shintani_domain(const QuadField& field, const FieldElement& epsilon);

/// Canonical z in b^{-1} with z = 1 mod n: minimal height in its class mod b^{-1} n.
FieldElement canonical_shift(const QuadField& field, const IdealF& b, const IdealF& conductor);

/// Residue of O_F modulo p^m as an index x * p^m + y for x + y*omega.
struct PadicLevel {
  long p = 0;
  int m = 0;
  long pm = 1;      // p^m
  long count = 1;   // p^{2m}
  PadicLevel() = default;
  PadicLevel(long p_, int m_);
  long index(long x, long y) const { return x * pm + y; }
  std::pair<long, long> coords(long index) const { return {index / pm, index % pm}; }
};

/// Per-coset Shintani zeta values zeta(b, a + p^m O_p, D, 0) for a fixed b,
/// as integer numerators over a common denominator.
class CosetZeta {
 public:
  /// shift overrides the canonical z; it must lie in b^{-1} and be congruent to 1 mod n.
  CosetZeta(const QuadField& field, const IdealF& b, const IdealF& conductor, const ShintaniDomain& D,
            const PadicLevel& level, const std::optional<FieldElement>& shift = std::nullopt);

  const Int& denominator() const { return denominator_; }
  /// Numerator of the value on the coset with the given residue index.
  Int numerator(long coset) const;
  Rat value(long coset) const { return make_rat(numerator(coset), denominator_); }
  /// Same value through exact rational arithmetic (no integer fast path).
  Rat exact_value(long coset) const { return make_rat(slow_numerator(coset), denominator_); }
  const PadicLevel& level() const { return level_; }
  const FieldElement& shift() const { return z_; }
  bool fast_path() const { return fast_; }
  /// Numerator through the integer path; requires fast_path().
  __int128 fast_numerator(long coset) const;

 private:
  struct FaceData {
    int weight = 1;
    int rank = 2;
    __int128 q = 1;  // Q0 * p^m
    // Q0-scaled plan coordinates of z and of the lattice basis, reduced mod q
    __int128 z[2] = {0, 0}, e1[2] = {0, 0}, e2[2] = {0, 0};
    std::vector<long long> reps1, reps2;  // p^m-scaled class representatives mod q
    __int128 c_a = 0, c_b1 = 0, c_b2 = 0;  // 6L, L Tr(w1/w2), L Tr(w2/w1)
    __int128 scale = 1;                    // to the common denominator
    bool small = false;                    // inner sums fit in 64 bits
  };

  Int slow_numerator(long coset) const;
  std::array<long, 2> lattice_coords(long coset) const;
  FieldElement coset_shift(long coset) const;

  QuadField field_;
  IdealF lattice_ideal_;
  FieldElement z_;
  PadicLevel level_;
  std::vector<std::unique_ptr<ConePlan>> plans_;
  std::vector<int> weights_;
  std::vector<FaceData> faces_;
  __int128 binv_[2][2] = {{0, 0}, {0, 0}};  // lattice basis inverse mod p^m
  __int128 zmod_[2] = {0, 0};
  Int denominator_;
  bool fast_ = false;
};

/// Which representative z of b^{-1} with z = 1 mod n the engine uses.
enum class ShiftChoice {
  canonical,
  translated,  // canonical z plus (2 + omega) times the generator of b^{-1} n
};

/// Shintani zeta values for a fixed (F, n, D), memoised per ideal b.
class ZetaEngine {
 public:
  ZetaEngine(const QuadField& field, const IdealF& conductor, const FieldElement& epsilon,
             ShiftChoice shift = ShiftChoice::canonical);

  const QuadField& field() const { return field_; }
  const IdealF& conductor() const { return conductor_; }
  const ShintaniDomain& domain() const { return domain_; }
  ShiftChoice shift_choice() const { return shift_; }
  FieldElement shift_for(const IdealF& b) const;

  /// zeta(b, All, D, 0).
  Rat zeta_all(const IdealF& b) const;
  /// zeta(b, a + p^m O_p, D, 0) for one coset (exact, slow path).
  Rat zeta_coset(const IdealF& b, const PadicLevel& level, long coset) const;

 private:
  QuadField field_;
  IdealF conductor_;
  ShintaniDomain domain_;
  ShiftChoice shift_;
  mutable std::mutex mu_;
  mutable std::map<std::string, Rat> memo_;
};

/// Theta_{S,T} coefficients: zeta_{S,T}(sigma) indexed by class.
struct StickelbergerElement {
  std::vector<Rat> coefficients;  // zeta_{S,T}(sigma), sigma = class index
  /// Group-ring coefficients: theta[g] = zeta_{S,T}(g^{-1}).
  std::vector<Rat> group_ring(const AbelianGroup& G) const;
};

struct ZetaConfig {
  QuadField field;
  IdealF conductor;
  long p = 0;
  IdealF ell_prime;
  long ell = 0;
};

/// Validated configuration; throws ConfigError naming every failed check.
ZetaConfig make_zeta_config(const QuadField& field, const IdealF& conductor, long p, long ell);

/// zeta_S(sigma) for every class, from ideals chosen by ideal_in_class.
std::vector<Rat> partial_zeta_values(const ZetaEngine& engine, const RayClassGroup& G, const Int& avoid);

/// Theta_{S,T} for (F, n, l); verifies augmentation, even-character vanishing and
/// integrality before returning (InvariantViolation otherwise).
StickelbergerElement stickelberger(const ZetaConfig& cfg);
StickelbergerElement stickelberger(const ZetaConfig& cfg, const ZetaEngine& engine, const RayClassGroup& G);

/// Theta_{S(f),T} over the ray class group of conductor f, where f divides the
/// configured conductor and S(f) = {v | f infinity}; f = (1) is accepted.
StickelbergerElement stickelberger_at_level(const ZetaConfig& cfg, const IdealF& f, const RayClassGroup& Gf);

/// Integral divisors of an integral ideal, (1) first.
std::vector<IdealF> ideal_divisors(const QuadField& field, const IdealF& n);

/// Finite part of the conductor of chi: the smallest divisor f of the modulus with chi
/// trivial on the kernel of G -> G_f.
IdealF character_conductor(const RayClassGroup& G, const Character& chi);

/// chi(x) for x in Q[G] given by its coefficients x[g].
Cyclotomic character_value(const Character& chi, const std::vector<Rat>& x);

/// Theta_{S_infinity,T}: for each character chi, chi(Theta) is read off Theta_{S(f),T}
/// at the conductor f of chi, then the coefficients are recovered by Fourier inversion.
/// Coefficients follow the StickelbergerElement convention and may be non-integral.
StickelbergerElement stickelberger_infinite(const ZetaConfig& cfg);

/// Product of chi(x) over the characters odd at both real places.
Cyclotomic odd_character_product(const std::vector<Rat>& x, const RayClassGroup& G);

/// Check the invariants, returning a description of the first failure (empty when all hold).
std::string stickelberger_violation(const StickelbergerElement& theta, const RayClassGroup& G, bool require_integral);

}  // namespace bstark
