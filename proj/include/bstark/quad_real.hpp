#pragma once

#include "bstark/arith.hpp"

#include <cmath>
#include <compare>
#include <ostream>

namespace bstark {

/// Exact real number p + q*sqrt(d) for a fixed squarefree d > 1.
///
/// Ordered field operations with exact sign: sign(p + q*sqrt d) is decided
/// by comparing p^2 with q^2 d when p and q have opposite signs.
class QuadReal {
 public:
  QuadReal() = default;
  explicit QuadReal(Rat p, Rat q = 0, long d = 0) : p_(std::move(p)), q_(std::move(q)), d_(d) {}
  QuadReal(long v) : p_(v) {}  // NOLINT: lets rational literals mix in

  const Rat& rational_part() const { return p_; }
  const Rat& surd_part() const { return q_; }
  long radicand() const { return d_; }

  int sign() const {
    int sp = sgn(p_);
    int sq = sgn(q_);
    if (sq == 0 || d_ == 0) return sp;
    if (sp == 0) return sq;
    if (sp == sq) return sp;
    Rat lhs = p_ * p_;
    Rat rhs = q_ * q_ * d_;
    int c = cmp(lhs, rhs);
    if (c == 0) return 0;
    return c > 0 ? sp : sq;
  }

  QuadReal conj() const { return QuadReal(p_, -q_, d_); }

  friend QuadReal operator+(const QuadReal& x, const QuadReal& y) {
    return QuadReal(x.p_ + y.p_, x.q_ + y.q_, join(x, y));
  }
  friend QuadReal operator-(const QuadReal& x, const QuadReal& y) {
    return QuadReal(x.p_ - y.p_, x.q_ - y.q_, join(x, y));
  }
  friend QuadReal operator*(const QuadReal& x, const QuadReal& y) {
    long d = join(x, y);
    return QuadReal(x.p_ * y.p_ + x.q_ * y.q_ * d, x.p_ * y.q_ + x.q_ * y.p_, d);
  }
  friend QuadReal operator/(const QuadReal& x, const QuadReal& y) {
    long d = join(x, y);
    Rat n = y.p_ * y.p_ - y.q_ * y.q_ * d;
    if (n == 0) throw std::domain_error("QuadReal: division by zero");
    QuadReal inv(y.p_ / n, -y.q_ / n, d);
    return x * inv;
  }
  QuadReal operator-() const { return QuadReal(-p_, -q_, d_); }

  friend bool operator==(const QuadReal& x, const QuadReal& y) {
    return x.p_ == y.p_ && (x.q_ == y.q_ || (x.d_ == 0 && y.d_ == 0));
  }
  friend std::strong_ordering operator<=>(const QuadReal& x, const QuadReal& y) {
    int s = (x - y).sign();
    return s < 0 ? std::strong_ordering::less
                 : (s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  double to_double() const {
    double a = p_.get_d();
    double b = q_.get_d() * std::sqrt(static_cast<double>(d_));
    // Opposite signs cancel; divide the exact norm by the conjugate instead.
    if ((a > 0 && b < 0) || (a < 0 && b > 0)) return Rat(p_ * p_ - q_ * q_ * d_).get_d() / (a - b);
    return a + b;
  }

  friend std::ostream& operator<<(std::ostream& os, const QuadReal& x) {
    os << x.p_;
    if (x.q_ != 0) os << (x.q_ > 0 ? "+" : "") << x.q_ << "*sqrt(" << x.d_ << ")";
    return os;
  }

 private:
  static long join(const QuadReal& x, const QuadReal& y) {
    if (x.d_ != 0 && y.d_ != 0 && x.d_ != y.d_) throw std::logic_error("QuadReal: mixed radicands");
    return x.d_ != 0 ? x.d_ : y.d_;
  }

  Rat p_{0};
  Rat q_{0};
  long d_ = 0;
};

}  // namespace bstark
