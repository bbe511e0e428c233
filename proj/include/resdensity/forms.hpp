#pragma once

// Pairs of degree-d binary forms F = sum A_i X^i Y^(d-i), G = sum B_j X^j Y^(d-j)
// stored as the tuple (A_0..A_d, B_0..B_d), and the generic resultant of the pair.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "resdensity/exact.hpp"

namespace resdensity::forms {

/// A degree-d pair (F, G) as 2d+2 integer coefficients.
struct RationalMapModel {
  int d = 2;
  std::vector<BigInt> coeffs;  // A_0..A_d, B_0..B_d

  std::span<const BigInt> F() const { return {coeffs.data(), static_cast<std::size_t>(d + 1)}; }
  std::span<const BigInt> G() const { return {coeffs.data() + d + 1, static_cast<std::size_t>(d + 1)}; }
  /// max |coefficient|; the height of the model when it is normalized.
  BigInt height() const;
  bool is_normalized() const;

  friend bool operator==(const RationalMapModel&, const RationalMapModel&) = default;
};

inline std::size_t tuple_length(int d) { return static_cast<std::size_t>(2 * d + 2); }

/// Determinant of the 2d x 2d Sylvester matrix of F(t,1), G(t,1) with leading
/// coefficients A_d, B_d.
BigInt sylvester_resultant(int d, std::span<const BigInt> coeffs);
BigInt sylvester_resultant(int d, std::span<const std::int64_t> coeffs);

/// Same determinant with 128-bit fraction-free elimination, or nullopt when the
/// Hadamard bound does not guarantee the intermediate minors fit.
std::optional<__int128> sylvester_resultant_small(int d, std::span<const std::int64_t> coeffs);

/// Expanded degree-2 resultant
/// a^2 f^2 - abef - 2acdf + ace^2 + b^2 df - bcde + c^2 d^2.
BigInt resultant_d2(const BigInt& a, const BigInt& b, const BigInt& c,
                    const BigInt& d, const BigInt& e, const BigInt& f);

/// Machine-word version of resultant_d2; exact while every |entry| < 2^14.
constexpr std::int64_t resultant_d2_i64(std::int64_t a, std::int64_t b, std::int64_t c,
                                        std::int64_t d, std::int64_t e, std::int64_t f) {
  return a * a * f * f - a * b * e * f - 2 * a * c * d * f + a * c * e * e + b * b * d * f -
         b * c * d * e + c * c * d * d;
}
inline constexpr std::int64_t kResultantD2I64Bound = 1 << 14;

/// Partial derivatives of the expanded degree-2 resultant, in (a,..,f) order.
struct GradientD2 {
  std::int64_t da, db, dc, dd, de, df;
};
constexpr GradientD2 resultant_d2_gradient_i64(std::int64_t a, std::int64_t b, std::int64_t c,
                                               std::int64_t d, std::int64_t e, std::int64_t f) {
  return {2 * a * f * f - b * e * f - 2 * c * d * f + c * e * e,
          -a * e * f + 2 * b * d * f - c * d * e,
          -2 * a * d * f + a * e * e - b * d * e + 2 * c * d * d,
          -2 * a * c * f + b * b * f - b * c * e + 2 * c * c * d,
          -a * b * f + 2 * a * c * e - b * c * d,
          2 * a * a * f - a * b * e - 2 * a * c * d + b * b * d};
}

/// Exact gradient of the generic resultant at an integer point, by interpolating
/// the resultant along each coordinate line at offsets 0..d.
std::vector<BigInt> resultant_gradient(int d, std::span<const BigInt> point);
std::vector<BigInt> resultant_gradient(int d, std::span<const std::int64_t> point);

/// Resultant reduced mod p (p prime, p < 2^31), entries already in [0, p).
std::int64_t resultant_mod_p(int d, std::span<const std::int64_t> residues, std::int64_t p);

/// p-adic valuation; throws for n == 0.
int ord_p(const BigInt& n, long p);

/// Divide by the gcd and make the first nonzero entry positive.
RationalMapModel normalize_point(int d, std::span<const BigInt> tuple);
RationalMapModel normalize_point(int d, std::span<const std::int64_t> tuple);

/// Parse "a0,a1,...,bd"; throws ValidationError on malformed input.
RationalMapModel parse_model(int d, const std::string& csv);

nlohmann::json to_json(const RationalMapModel& m);
RationalMapModel model_from_json(const nlohmann::json& j);

}  // namespace resdensity::forms
