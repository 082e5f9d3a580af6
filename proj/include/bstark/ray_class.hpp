#pragma once

#include "bstark/field.hpp"
#include "bstark/group.hpp"

#include <optional>
#include <string>
#include <vector>

namespace bstark {

/// Narrow ray class group of conductor n for a class-number-one real quadratic field:
/// ((O_F/n)^* x {+-1}^2) modulo the images of -1 and eps0.
class RayClassGroup {
 public:
  RayClassGroup(const QuadField& field, const IdealF& conductor);

  const QuadField& field() const { return field_; }
  const IdealF& conductor() const { return conductor_; }
  const AbelianGroup& group() const { return group_; }
  const ResidueRing& residues() const { return ring_; }
  int size() const { return group_.size(); }

  /// Sign flip at the first / second real place (residue 1).
  int c_v1() const { return c_v1_; }
  int c_v2() const { return c_v2_; }

  /// Artin symbol of a fractional ideal coprime to the conductor.
  int class_of(const IdealF& ideal) const;
  /// Class of the principal ideal (x) read through the generator x itself.
  int class_of_element(const FieldElement& x) const;
  /// Class of a residue index (must be a unit) together with sign bits (bit i: negative at place i).
  int class_of_residue(long residue, int sign_bits) const;

  /// Representative data (residue index, sign bits) of a class.
  std::pair<long, int> representative(int cls) const { return reps_[static_cast<std::size_t>(cls)]; }

  /// Natural surjection onto the ray class group of a divisor of the conductor.
  std::vector<int> projection_to(const RayClassGroup& coarser) const;

  /// Integral principal ideal of smallest norm in the class, coprime to `avoid`.
  IdealF ideal_in_class(int cls, const Int& avoid) const;

  /// Inertia subgroup at a prime dividing the conductor (image of the local units).
  std::vector<int> inertia_subgroup(const IdealF& prime) const;

 private:
  long ambient_index(long residue, int bits) const { return residue * 4 + bits; }

  QuadField field_;
  IdealF conductor_;
  ResidueRing ring_;
  AbelianGroup group_;
  std::vector<int> coset_of_;               // ambient index -> class, -1 for non-units
  std::vector<std::pair<long, int>> reps_;  // class -> (residue, sign bits)
  int c_v1_ = 0;
  int c_v2_ = 0;
};

int sign_bits(const FieldElement& x);

struct ConfigCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ConfigReport {
  std::vector<ConfigCheck> checks;
  bool ok() const;
  std::string failures() const;
  int c_v1 = 0;
  int c_v2 = 0;
  /// Complex conjugation used by the unit pipeline: c_v1 (equals c_v2 when H is CM).
  int c = 0;
  /// Product c_v1 c_v2, exposed for completeness.
  int c_product = 0;
};

/// Canonical degree-one prime above the rational prime ell (smallest root of omega's polynomial).
std::optional<IdealF> degree_one_prime(const QuadField& field, long ell);

ConfigReport validate_config(const QuadField& field, const IdealF& conductor, long p, const IdealF& ell_prime);

}  // namespace bstark
