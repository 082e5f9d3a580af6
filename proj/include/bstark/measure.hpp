#pragma once

#include "bstark/cache.hpp"
#include "bstark/padic.hpp"
#include "bstark/zeta.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace bstark {

/// mu_b(a + p^m O_p) = zeta(b, U, D, 0) - ell zeta(b l^{-1}, U, D, 0) at one level.
class CosetMeasure {
 public:
  CosetMeasure(const ZetaConfig& cfg, const ShintaniDomain& D, const IdealF& b, const PadicLevel& level);

  const PadicLevel& level() const { return level_; }
  const IdealF& ideal() const { return b_; }
  /// Exact integer value; InvariantViolation when the value is not an integer.
  long value(long coset) const;
  /// The same value as an exact rational through the slow rational path.
  Rat exact(long coset) const;
  /// mu_b(All) = zeta(b, All) - ell zeta(b l^{-1}, All).
  Rat total() const;

 private:
  PadicLevel level_;
  IdealF b_;
  long ell_;
  CosetZeta main_, shifted_;
  __int128 s1_ = 0, s2_ = 0, den_ = 1;  // numerators scaled to the common denominator den_
  bool fast_ = false;
  Rat total_;
};

/// mu_b on every coset of O_p / p^m (non-unit cosets only when requested, else 0).
struct MeasureTable {
  PadicLevel level;
  bool includes_nonunits = false;
  std::vector<std::int32_t> values;  // indexed by coset x p^m + y

  long at(long x, long y) const { return values[static_cast<std::size_t>(level.index(x, y))]; }
  static bool is_unit_coset(const PadicLevel& level, long index) {
    auto [x, y] = level.coords(index);
    return x % level.p != 0 || y % level.p != 0;
  }
};

/// Cache preimage for a measure table.
std::string measure_key(const ZetaConfig& cfg, const ShintaniDomain& D, const IdealF& b, int m, bool nonunits);

/// Parallel evaluation over blocks of cosets. With a cache the table is read
/// back when present (after re-verifying one random entry) and stored otherwise.
MeasureTable measure_table(const ZetaConfig& cfg, const ShintaniDomain& D, const IdealF& b, int m, int workers,
                           bool include_nonunits = false, const Cache* cache = nullptr);

/// "x y m value" per coset in index order (lexicographic in x, y).
void write_measure_table(std::ostream& out, const MeasureTable& t);

/// prod over unit cosets of a^mu(a) without materialising the table.
struct StreamedIntegral {
  PadicElement product;
  long unit_mass = 0;
};
StreamedIntegral stream_integral(const ZetaConfig& cfg, const ShintaniDomain& D, const IdealF& b, int m, int workers);

/// Riemann product of a table.
PadicElement table_integral(const QuadField& field, const MeasureTable& t);

}  // namespace bstark
