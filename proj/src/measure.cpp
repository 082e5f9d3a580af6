#include "bstark/measure.hpp"

#include <cstring>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

namespace bstark {

namespace {

template <class Fn>
void parallel_blocks(long count, int workers, Fn&& fn) {
  workers = std::max(1, workers);
  if (workers == 1 || count < 4096) {
    fn(0, 0, count);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  const long chunk = (count + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    long lo = std::min(count, w * chunk), hi = std::min(count, lo + chunk);
    pool.emplace_back([&, w, lo, hi] {
      try {
        fn(w, lo, hi);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

CosetMeasure::CosetMeasure(const ZetaConfig& cfg, const ShintaniDomain& D, const IdealF& b, const PadicLevel& level)
    : level_(level),
      b_(b),
      ell_(cfg.ell),
      main_(cfg.field, b, cfg.conductor, D, level),
      shifted_(cfg.field, cfg.field.mul(b, cfg.field.inverse(cfg.ell_prime)), cfg.conductor, D, level) {
  Int den = lcm(main_.denominator(), shifted_.denominator());
  if (main_.fast_path() && shifted_.fast_path() && mpz_sizeinbase(den.get_mpz_t(), 2) < 100) {
    fast_ = true;
    den_ = to_i128(den);
    s1_ = to_i128(Int(den / main_.denominator()));
    s2_ = to_i128(Int(den / shifted_.denominator() * ell_));
  }
  CosetZeta all_main(cfg.field, b, cfg.conductor, D, PadicLevel(level.p, 0));
  CosetZeta all_shifted(cfg.field, cfg.field.mul(b, cfg.field.inverse(cfg.ell_prime)), cfg.conductor, D,
                        PadicLevel(level.p, 0));
  total_ = all_main.value(0) - Rat(ell_) * all_shifted.value(0);
}

long CosetMeasure::value(long coset) const {
  if (fast_) {
    __int128 a, b, num;
    if (!__builtin_mul_overflow(main_.fast_numerator(coset), s1_, &a) &&
        !__builtin_mul_overflow(shifted_.fast_numerator(coset), s2_, &b) && !__builtin_sub_overflow(a, b, &num)) {
      if (num % den_ != 0)
        throw InvariantViolation("measure: non-integral value " + to_int(num).get_str() + "/" + to_int(den_).get_str() +
                                 " on coset " + std::to_string(coset));
      __int128 q = num / den_;
      if (q > INT32_MAX || q < INT32_MIN) throw std::overflow_error("measure: value exceeds 32 bits");
      return static_cast<long>(q);
    }
  }
  Rat v = exact(coset);
  if (!is_integer(v))
    throw InvariantViolation("measure: non-integral value " + v.get_str() + " on coset " + std::to_string(coset));
  return to_long(v.get_num());
}

Rat CosetMeasure::exact(long coset) const { return main_.exact_value(coset) - Rat(ell_) * shifted_.exact_value(coset); }

Rat CosetMeasure::total() const { return total_; }

// ---------------------------------------------------------------------------

std::string measure_key(const ZetaConfig& cfg, const ShintaniDomain& D, const IdealF& b, int m, bool nonunits) {
  std::ostringstream os;
  os << kEngineVersion << " measure d=" << cfg.field.d() << " n=" << cfg.conductor.to_string()
     << " l=" << cfg.ell_prime.to_string() << " ell=" << cfg.ell << " b=" << b.to_string() << " D=" << D.descriptor
     << " z=canonical p=" << cfg.p << " m=" << m << (nonunits ? " all" : " units");
  return os.str();
}

MeasureTable measure_table(const ZetaConfig& cfg, const ShintaniDomain& D, const IdealF& b, int m, int workers,
                           bool include_nonunits, const Cache* cache) {
  MeasureTable t;
  t.level = PadicLevel(cfg.p, m);
  t.includes_nonunits = include_nonunits;
  const long count = t.level.count;
  CosetMeasure mu(cfg, D, b, t.level);
  const std::string key = measure_key(cfg, D, b, m, include_nonunits);

  if (cache && cache->enabled()) {
    if (auto payload = cache->get(key)) {
      if (payload->size() == static_cast<std::size_t>(count) * sizeof(std::int32_t)) {
        t.values.resize(static_cast<std::size_t>(count));
        std::memcpy(t.values.data(), payload->data(), payload->size());
        // Re-verify one random unit coset against a fresh evaluation.
        std::random_device rd;
        std::mt19937_64 rng(rd());
        std::uniform_int_distribution<long> pick(0, count - 1);
        long idx = pick(rng);
        while (!MeasureTable::is_unit_coset(t.level, idx)) idx = pick(rng);
        if (mu.value(idx) == t.values[static_cast<std::size_t>(idx)]) return t;
      }
      cache->erase(key);
    }
  }

  t.values.assign(static_cast<std::size_t>(count), 0);
  parallel_blocks(count, workers, [&](int, long lo, long hi) {
    for (long i = lo; i < hi; ++i) {
      if (!include_nonunits && !MeasureTable::is_unit_coset(t.level, i)) continue;
      t.values[static_cast<std::size_t>(i)] = static_cast<std::int32_t>(mu.value(i));
    }
  });
  if (cache && cache->enabled()) {
    std::string payload(reinterpret_cast<const char*>(t.values.data()), t.values.size() * sizeof(std::int32_t));
    cache->put(key, payload);
  }
  return t;
}

void write_measure_table(std::ostream& out, const MeasureTable& t) {
  for (long i = 0; i < t.level.count; ++i) {
    if (!t.includes_nonunits && !MeasureTable::is_unit_coset(t.level, i)) continue;
    auto [x, y] = t.level.coords(i);
    out << x << ' ' << y << ' ' << t.level.m << ' ' << t.values[static_cast<std::size_t>(i)] << '\n';
  }
}

StreamedIntegral stream_integral(const ZetaConfig& cfg, const ShintaniDomain& D, const IdealF& b, int m, int workers) {
  PadicLevel level(cfg.p, m);
  CosetMeasure mu(cfg, D, b, level);
  workers = std::max(1, workers);
  std::vector<RiemannAccumulator> acc;
  std::vector<long> mass(static_cast<std::size_t>(workers), 0);
  for (int w = 0; w < workers; ++w) acc.emplace_back(cfg.field, cfg.p, m);
  parallel_blocks(level.count, workers, [&](int w, long lo, long hi) {
    auto& a = acc[static_cast<std::size_t>(w)];
    long s = 0;
    for (long i = lo; i < hi; ++i) {
      if (!MeasureTable::is_unit_coset(level, i)) continue;
      long v = mu.value(i);
      s += v;
      a.add(i, v);
    }
    mass[static_cast<std::size_t>(w)] = s;
  });
  for (int w = 1; w < workers; ++w) acc[0].merge(acc[static_cast<std::size_t>(w)]);
  StreamedIntegral out{acc[0].result(), 0};
  for (long s : mass) out.unit_mass += s;
  return out;
}

PadicElement table_integral(const QuadField& field, const MeasureTable& t) {
  RiemannAccumulator acc(field, t.level.p, t.level.m);
  for (long i = 0; i < t.level.count; ++i) {
    if (!MeasureTable::is_unit_coset(t.level, i)) continue;
    acc.add(i, t.values[static_cast<std::size_t>(i)]);
  }
  return acc.result();
}

}  // namespace bstark
