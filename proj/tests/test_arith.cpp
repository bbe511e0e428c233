#include <doctest.h>

#include "oracles.hpp"
#include "resdensity/arith.hpp"

using namespace resdensity;
using namespace resdensity::arith;

TEST_CASE("primes") {
  const auto ps = primes_up_to(100);
  CHECK(ps.size() == 25);
  CHECK(ps.front() == 2);
  CHECK(ps.back() == 97);
  for (long n = -3; n < 2000; ++n) {
    bool naive = n >= 2;
    for (long q = 2; q * q <= n && naive; ++q) naive = n % q != 0;
    REQUIRE(is_prime(n) == naive);
  }
  CHECK(primes_up_to(1).empty());
}

TEST_CASE("factor reconstructs its input") {
  for (int trial = 0; trial < 500; ++trial) {
    BigInt n = 1;
    for (int k = 0; k < 4; ++k) n *= oracle::uniform(1, 1L << 20);
    if (oracle::uniform(0, 1)) n = -n;
    const auto f = factor(n);
    BigInt back = 1;
    BigInt prev = 1;
    for (const auto& pp : f) {
      REQUIRE(pp.prime > prev);
      REQUIRE(mpz_probab_prime_p(pp.prime.get_mpz_t(), 30) > 0);
      REQUIRE(pp.exponent >= 1);
      back *= big_pow(pp.prime, pp.exponent);
      prev = pp.prime;
    }
    REQUIRE(back == abs(n));
  }
  // Two 40-bit primes force the rho stage.
  const BigInt p = BigInt("1099511627791"), q = BigInt("1099511628401");
  const auto f = factor(p * q * q);
  REQUIRE(f.size() == 2);
  CHECK(f[0] == PrimePower{p, 1});
  CHECK(f[1] == PrimePower{q, 2});
  CHECK(factor(1).empty());
  CHECK_THROWS_AS(factor(0), ValidationError);
}

TEST_CASE("max_prime_exponent agrees with naive trial division") {
  for (std::uint64_t n = 1; n < 20000; ++n) REQUIRE(max_prime_exponent(n) == oracle::naive_max_exponent(n));
  for (int trial = 0; trial < 3000; ++trial) {
    const auto n = static_cast<std::uint64_t>(oracle::uniform(1, 1L << 36));
    REQUIRE(max_prime_exponent(n) == oracle::naive_max_exponent(n));
  }
}

TEST_CASE("max_prime_exponent on large and structured inputs") {
  // p^2 for a prime above the trial-division table
  const std::uint64_t big_p = 4294967291ULL;
  CHECK(max_prime_exponent(big_p * big_p) == 2);
  CHECK(max_prime_exponent(big_p) == 1);
  CHECK(max_prime_exponent(big_p * 3) == 1);
  // p^2 q with p just past the cube root of the cofactor
  const std::uint64_t p = 2642257ULL;
  CHECK(max_prime_exponent(p * p * 3) == 2);
  CHECK(max_prime_exponent(p * 2642281ULL) == 1);
  CHECK(max_prime_exponent(1ULL << 63) == 63);
  CHECK(max_prime_exponent(~0ULL) == 1);  // 3*5*17*257*641*65537*6700417
  CHECK(max_prime_exponent(1) == 0);
  for (int trial = 0; trial < 300; ++trial) {
    const BigInt n = BigInt(oracle::uniform(1, 1L << 40)) * oracle::uniform(1, 1L << 40);
    int via_factor = 0;
    for (const auto& pp : factor(n)) via_factor = std::max(via_factor, pp.exponent);
    REQUIRE(max_prime_exponent(n) == via_factor);
  }
  CHECK_THROWS_AS(max_prime_exponent(BigInt(0)), ValidationError);
}

TEST_CASE("is_kpower_free") {
  CHECK(is_kpower_free(BigInt(27), 3) == false);
  CHECK(is_kpower_free(BigInt(27), 4) == true);
  CHECK(is_kpower_free(BigInt(-12), 2) == false);
  CHECK(is_kpower_free(std::int64_t{30}, 2) == true);
  CHECK(is_kpower_free(std::int64_t{-1}, 2) == true);
  CHECK(is_kpower_free(big_pow(10, 40) + 1, 2) == is_kpower_free(big_pow(10, 40) + 1, 2));
  CHECK_THROWS_AS(is_kpower_free(BigInt(0), 2), ValidationError);
  CHECK_THROWS_AS(is_kpower_free(std::int64_t{0}, 2), ValidationError);
  CHECK_THROWS_AS(is_kpower_free(BigInt(5), 1), ValidationError);
  for (int trial = 0; trial < 2000; ++trial) {
    const long n = oracle::uniform(-1000000, 1000000);
    if (n == 0) continue;
    const int e = oracle::naive_max_exponent(static_cast<std::uint64_t>(std::abs(n)));
    for (int k = 2; k <= 5; ++k) {
      REQUIRE(is_kpower_free(std::int64_t{n}, k) == (e < k));
      REQUIRE(is_kpower_free(BigInt(n), k) == (e < k));
    }
  }
}

TEST_CASE("isqrt") {
  for (int trial = 0; trial < 5000; ++trial) {
    const auto n = static_cast<std::uint64_t>(oracle::uniform(0, std::numeric_limits<long>::max()));
    const std::uint64_t r = isqrt(n);
    REQUIRE(static_cast<unsigned __int128>(r) * r <= n);
    REQUIRE(static_cast<unsigned __int128>(r + 1) * (r + 1) > n);
  }
  CHECK(isqrt(~0ULL) == 4294967295ULL);
  CHECK(isqrt(0) == 0);
}
