#pragma once

#include "bstark/measure.hpp"

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace bstark {

struct PipelineOptions {
  int workers = 1;
  const Cache* cache = nullptr;
  /// Tables with more cosets than this are streamed instead of materialised.
  long table_limit = 1L << 24;
};

/// Perturbation of a single measure value, used by the mutation test.
struct MeasureMutation {
  IdealF ideal;
  long coset = 0;
  long delta = 1;
};

/// Shared state for one configuration: ray class group, signed domain and Theta_{S,T}.
class Pipeline {
 public:
  explicit Pipeline(const ZetaConfig& cfg, PipelineOptions options = {});

  const ZetaConfig& config() const { return cfg_; }
  const QuadField& field() const { return cfg_.field; }
  const RayClassGroup& group() const { return group_; }
  const ZetaEngine& engine() const { return engine_; }
  const StickelbergerElement& theta() const { return theta_; }
  const PipelineOptions& options() const { return options_; }
  /// Complex conjugation used for the minus-part identities (c_v1).
  int conjugation() const { return group_.c_v1(); }

  /// Canonical integral ideal for a class, coprime to n, l and p.
  IdealF class_ideal(int cls) const;
  /// Fixed ideal q with class c.
  IdealF conjugation_ideal() const;

  /// Riemann product of mu_b over the unit cosets at level m (memoised).
  PadicElement integral(const IdealF& b, int m) const;

  void set_mutation(std::optional<MeasureMutation> mutation);

 private:
  ZetaConfig cfg_;
  PipelineOptions options_;
  RayClassGroup group_;
  ZetaEngine engine_;
  StickelbergerElement theta_;
  std::optional<MeasureMutation> mutation_;
  mutable std::mutex mu_;
  mutable std::map<std::string, PadicElement> integrals_;
};

struct AnalyticUnit {
  int cls = 0;
  IdealF ideal;
  int m = 0;
  PadicUnitValue value;  // p^{zeta_{S,T}(sigma_b)} times the multiplicative integral
  std::string provenance;
};

AnalyticUnit analytic_unit(const Pipeline& pl, const IdealF& b, int m);
/// Analytic units for every class, in class order.
std::vector<AnalyticUnit> analytic_units(const Pipeline& pl, int m);

/// v_p(b)^an = (u_p(b)^an / u_p(b q)^an)^{1/2} with class_of(q) = c.
HatUnitValue v_unit(const Pipeline& pl, const IdealF& b, const IdealF& q, int m);

struct BSPolynomial {
  std::vector<FieldElement> coefficients;  // constant term first; monic
  long p_exponent = 0;                     // N: p^N P has p-integral coefficients
  int precision = 0;
  std::vector<PadicElement> cleared;       // p^N P over O_p / p^m
  std::string adjustment;                  // root-of-unity adjustment applied, if any
};

/// Cleared polynomial p^N prod (X - u) over O_p modulo p^m.
std::vector<PadicElement> cleared_polynomial(const std::vector<AnalyticUnit>& roots, long& p_exponent);

/// Monic polynomial over F with the analytic units as roots; PrecisionError
/// ("insufficient precision") names the first coefficient that is not recognised.
BSPolynomial bs_polynomial(const QuadField& field, const std::vector<AnalyticUnit>& roots);

/// bs_polynomial, retrying with a single root multiplied by a (p^2-1)-th root of
/// unity when the pinned values are not recognised or fail predicates (c)/(d).
BSPolynomial bs_polynomial_adjusted(const Pipeline& pl, const std::vector<AnalyticUnit>& roots);

struct PredicateResult {
  std::string name;
  bool passed = false;
  std::string witness;
};

struct VerificationReport {
  std::vector<PredicateResult> predicates;
  const PredicateResult& get(const std::string& name) const;
  bool all_passed() const;
  std::string to_string() const;
};

/// Predicates (a)-(e) for a reconstructed polynomial; units are the analytic roots.
VerificationReport verify_bs(const Pipeline& pl, const BSPolynomial& P, const std::vector<AnalyticUnit>& units);

/// p-adic valuation of a field element (p inert).
long field_valuation(const FieldElement& x, long p);

/// Degrees of the irreducible factors of P modulo a degree-one or inert prime Q of F
/// not dividing the denominators; nullopt when P is not separable modulo Q.
std::optional<std::vector<int>> factor_degrees_mod(const QuadField& field, const std::vector<FieldElement>& P,
                                                   const PrimeIdeal& Q);

}  // namespace bstark
