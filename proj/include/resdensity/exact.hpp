#pragma once

// Exact integer/rational arithmetic, truncated decimal rendering and
// rational enclosures of real quantities (zeta values, certified tails).

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmpxx.h>
#include <json.hpp>

namespace resdensity {

using BigInt = mpz_class;

/// Raised when caller-supplied parameters violate a precondition.
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline BigInt big_pow(const BigInt& base, unsigned long e) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

inline BigInt big_pow(long base, unsigned long e) { return big_pow(BigInt(base), e); }

inline BigInt big_from_i64(std::int64_t v) {
  // mpz_class(long) is 64-bit on LP64; keep the cast explicit.
  return BigInt(static_cast<long>(v));
}

std::string big_to_string(const BigInt& v);
BigInt big_from_string(const std::string& s);

namespace exact {

/// Signed rational in lowest terms with a positive denominator.
class ExactRational {
 public:
  ExactRational() = default;
  ExactRational(long v) : q_(v) {}  // NOLINT(google-explicit-constructor)
  explicit ExactRational(const BigInt& v) : q_(v) {}
  explicit ExactRational(const mpq_class& q) : q_(q) { q_.canonicalize(); }

  /// Lowest-terms representative of num/den; throws on den == 0.
  static ExactRational normalize(const BigInt& num, const BigInt& den);

  BigInt num() const { return q_.get_num(); }
  BigInt den() const { return q_.get_den(); }
  const mpq_class& value() const { return q_; }

  int sign() const { return sgn(q_); }
  bool is_zero() const { return sign() == 0; }

  ExactRational& operator+=(const ExactRational& o) { q_ += o.q_; return *this; }
  ExactRational& operator-=(const ExactRational& o) { q_ -= o.q_; return *this; }
  ExactRational& operator*=(const ExactRational& o) { q_ *= o.q_; return *this; }
  ExactRational& operator/=(const ExactRational& o);

  friend ExactRational operator+(ExactRational a, const ExactRational& b) { return a += b; }
  friend ExactRational operator-(ExactRational a, const ExactRational& b) { return a -= b; }
  friend ExactRational operator*(ExactRational a, const ExactRational& b) { return a *= b; }
  friend ExactRational operator/(ExactRational a, const ExactRational& b) { return a /= b; }
  friend ExactRational operator-(const ExactRational& a) { return ExactRational(mpq_class(-a.q_)); }

  friend bool operator==(const ExactRational& a, const ExactRational& b) { return cmp(a.q_, b.q_) == 0; }
  friend std::strong_ordering operator<=>(const ExactRational& a, const ExactRational& b) {
    const int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  /// "num/den", or just "num" when den == 1.
  std::string str() const;
  double approx() const { return q_.get_d(); }

 private:
  mpq_class q_{0};
};

/// Decimal expansion truncated toward zero to `digits` fractional digits.
std::string decimal_render(const ExactRational& q, int digits);

/// Closed interval [lo, hi] with rational endpoints.
class RationalInterval {
 public:
  RationalInterval() = default;
  RationalInterval(ExactRational lo, ExactRational hi);
  static RationalInterval point(const ExactRational& v) { return {v, v}; }

  const ExactRational& lo() const { return lo_; }
  const ExactRational& hi() const { return hi_; }
  ExactRational width() const { return hi_ - lo_; }
  ExactRational midpoint() const { return (lo_ + hi_) / ExactRational(2); }
  bool contains(const ExactRational& v) const { return lo_ <= v && v <= hi_; }

  RationalInterval operator+(const RationalInterval& o) const { return {lo_ + o.lo_, hi_ + o.hi_}; }
  /// Scaling by a nonnegative rational.
  RationalInterval scaled(const ExactRational& c) const;
  /// Product of two intervals with positive endpoints.
  RationalInterval operator*(const RationalInterval& o) const;
  /// Reciprocal of a positive interval.
  RationalInterval reciprocal() const;

 private:
  ExactRational lo_, hi_;
};

/// Certified enclosure of zeta(s) from the first `terms` terms plus the
/// integral bracket on the remainder.
RationalInterval zeta_interval(int s, long terms);

nlohmann::json to_json(const ExactRational& q);
ExactRational rational_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RationalInterval& iv);

}  // namespace exact

using exact::ExactRational;
using exact::RationalInterval;

}  // namespace resdensity
