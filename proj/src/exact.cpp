#include "resdensity/exact.hpp"

#include <string>

namespace resdensity {

std::string big_to_string(const BigInt& v) { return v.get_str(10); }

BigInt big_from_string(const std::string& s) {
  BigInt v;
  if (s.empty() || v.set_str(s, 10) != 0) throw ValidationError("not a decimal integer: '" + s + "'");
  return v;
}

namespace exact {

ExactRational ExactRational::normalize(const BigInt& num, const BigInt& den) {
  if (den == 0) throw ValidationError("rational with zero denominator");
  mpq_class q(num, den);
  q.canonicalize();
  return ExactRational(q);
}

ExactRational& ExactRational::operator/=(const ExactRational& o) {
  if (o.is_zero()) throw ValidationError("division by zero rational");
  q_ /= o.q_;
  return *this;
}

std::string ExactRational::str() const {
  if (q_.get_den() == 1) return q_.get_num().get_str();
  return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

std::string decimal_render(const ExactRational& q, int digits) {
  if (digits < 1) throw ValidationError("decimal_render needs digits >= 1");
  const BigInt num = abs(q.num());
  const BigInt scaled = num * big_pow(10, static_cast<unsigned long>(digits)) / q.den();  // floor
  std::string s = scaled.get_str();
  if (s.size() <= static_cast<std::size_t>(digits)) s.insert(0, digits + 1 - s.size(), '0');
  s.insert(s.size() - digits, ".");
  if (q.sign() < 0 && scaled != 0) s.insert(0, "-");
  return s;
}

RationalInterval::RationalInterval(ExactRational lo, ExactRational hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (hi_ < lo_) throw ValidationError("interval with lo > hi");
}

RationalInterval RationalInterval::scaled(const ExactRational& c) const {
  if (c.sign() < 0) throw ValidationError("interval scaling needs a nonnegative factor");
  return {lo_ * c, hi_ * c};
}

RationalInterval RationalInterval::operator*(const RationalInterval& o) const {
  if (lo_.sign() <= 0 || o.lo_.sign() <= 0) throw ValidationError("interval product needs positive endpoints");
  return {lo_ * o.lo_, hi_ * o.hi_};
}

RationalInterval RationalInterval::reciprocal() const {
  if (lo_.sign() <= 0) throw ValidationError("reciprocal of a non-positive interval");
  return {ExactRational(1) / hi_, ExactRational(1) / lo_};
}

RationalInterval zeta_interval(int s, long terms) {
  if (s < 2) throw ValidationError("zeta_interval needs s >= 2");
  if (terms < 1) throw ValidationError("zeta_interval needs terms >= 1");
  const auto e = static_cast<unsigned long>(s);
  // Sum with a common denominator, then one canonicalization.
  mpq_class partial(0);
  for (long n = 1; n <= terms; ++n) {
    mpq_class t(1, big_pow(n, e));
    partial += t;
  }
  // integral_{N+1}^inf t^-s dt <= tail <= integral_N^inf t^-s dt
  const ExactRational sum{partial};
  const ExactRational lo_tail = ExactRational::normalize(1, BigInt(s - 1) * big_pow(terms + 1, e - 1));
  const ExactRational hi_tail = ExactRational::normalize(1, BigInt(s - 1) * big_pow(terms, e - 1));
  return {sum + lo_tail, sum + hi_tail};
}

nlohmann::json to_json(const ExactRational& q) {
  return nlohmann::json{{"num", big_to_string(q.num())}, {"den", big_to_string(q.den())}};
}

ExactRational rational_from_json(const nlohmann::json& j) {
  return ExactRational::normalize(big_from_string(j.at("num").get<std::string>()),
                                  big_from_string(j.at("den").get<std::string>()));
}

nlohmann::json to_json(const RationalInterval& iv) {
  return nlohmann::json{{"lo", to_json(iv.lo())}, {"hi", to_json(iv.hi())}};
}

}  // namespace exact
}  // namespace resdensity
