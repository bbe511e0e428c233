#pragma once

// Primes, integer factorization and prime-exponent queries.

#include <cstdint>
#include <vector>

#include "resdensity/exact.hpp"

namespace resdensity::arith {

struct PrimePower {
  BigInt prime;
  int exponent = 0;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

bool is_prime(long n);
std::vector<long> primes_up_to(long n);

/// Full factorization of |n| in increasing prime order; n != 0.
std::vector<PrimePower> factor(const BigInt& n);

/// Largest e with p^e | n over all primes p (0 for n = 1); n >= 1.
/// Trial division up to the cube root of the cofactor, then a square test.
int max_prime_exponent(std::uint64_t n);
int max_prime_exponent(const BigInt& n);

/// True iff no prime power p^k divides n; n != 0, k >= 2.
bool is_kpower_free(const BigInt& n, int k);
inline bool is_kpower_free(std::int64_t n, int k) {
  if (n == 0) throw ValidationError("k-power-freeness of zero is undefined");
  const std::uint64_t m = n < 0 ? 0 - static_cast<std::uint64_t>(n) : static_cast<std::uint64_t>(n);
  return max_prime_exponent(m) < k;
}

std::uint64_t isqrt(std::uint64_t n);

}  // namespace resdensity::arith
