#include "resdensity/arith.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

namespace resdensity::arith {

namespace {

// Cube root of 2^64, rounded up.
constexpr std::uint32_t kSieveLimit = 2642246;

struct OddPrime {
  std::uint64_t p;
  std::uint64_t inverse;  // p^-1 mod 2^64
  std::uint64_t limit;    // floor((2^64 - 1) / p)
  std::uint64_t cube;     // p^3, saturated
};

std::vector<bool> sieve(std::uint64_t n) {
  std::vector<bool> composite(n + 1, false);
  for (std::uint64_t i = 2; i * i <= n; ++i)
    if (!composite[i])
      for (std::uint64_t j = i * i; j <= n; j += i) composite[j] = true;
  return composite;
}

const std::vector<OddPrime>& odd_primes() {
  static const std::vector<OddPrime> table = [] {
    std::vector<OddPrime> t;
    const auto composite = sieve(kSieveLimit);
    for (std::uint64_t p = 3; p <= kSieveLimit; p += 2) {
      if (composite[p]) continue;
      std::uint64_t inv = p;  // Newton iteration for the 2-adic inverse
      for (int i = 0; i < 5; ++i) inv *= 2 - p * inv;
      const auto p3 = static_cast<unsigned __int128>(p) * p * p;
      const std::uint64_t cube = p3 > std::numeric_limits<std::uint64_t>::max()
                                     ? std::numeric_limits<std::uint64_t>::max()
                                     : static_cast<std::uint64_t>(p3);
      t.push_back({p, inv, std::numeric_limits<std::uint64_t>::max() / p, cube});
    }
    return t;
  }();
  return table;
}

BigInt pollard_brent(const BigInt& n) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  for (unsigned long c = 1;; ++c) {
    BigInt y = 2, x, g = 1, q = 1, ys;
    const unsigned long m = 128;
    for (unsigned long r = 1; g == 1; r <<= 1) {
      x = y;
      for (unsigned long i = 0; i < r; ++i) y = (y * y + c) % n;
      for (unsigned long k = 0; k < r && g == 1; k += m) {
        ys = y;
        for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
          y = (y * y + c) % n;
          q = q * abs(x - y) % n;
        }
        g = gcd(q, n);
      }
    }
    if (g == n) {
      do {
        ys = (ys * ys + c) % n;
        g = gcd(abs(x - ys), n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void split(const BigInt& n, std::vector<BigInt>& out) {
  if (n == 1) return;
  if (mpz_probab_prime_p(n.get_mpz_t(), 40) != 0) {
    out.push_back(n);
    return;
  }
  const BigInt f = pollard_brent(n);
  split(f, out);
  split(n / f, out);
}

}  // namespace

bool is_prime(long n) {
  if (n < 2) return false;
  for (long q = 2; q * q <= n; ++q)
    if (n % q == 0) return false;
  return true;
}

std::vector<long> primes_up_to(long n) {
  std::vector<long> out;
  if (n < 2) return out;
  const auto composite = sieve(static_cast<std::uint64_t>(n));
  for (long i = 2; i <= n; ++i)
    if (!composite[static_cast<std::size_t>(i)]) out.push_back(i);
  return out;
}

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && static_cast<unsigned __int128>(r) * r > n) --r;
  while (static_cast<unsigned __int128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

int max_prime_exponent(std::uint64_t n) {
  if (n == 0) throw ValidationError("max_prime_exponent of zero");
  int best = std::countr_zero(n);
  n >>= best;
  // With no prime factor below q and n < q^3, n is 1, a prime, a square of a
  // prime or a product of two distinct primes.
  auto finish = [&best](std::uint64_t m) {
    if (m == 1) return best;
    const std::uint64_t r = isqrt(m);
    return std::max(best, r * r == m ? 2 : 1);
  };
  for (const auto& op : odd_primes()) {
    if (op.cube > n) return finish(n);
    std::uint64_t q = n * op.inverse;
    if (q <= op.limit) {
      int e = 0;
      do {
        n = q;
        ++e;
        q = n * op.inverse;
      } while (q <= op.limit);
      best = std::max(best, e);
    }
  }
  // The next prime past the table cubes above 2^64.
  return finish(n);
}

std::vector<PrimePower> factor(const BigInt& n) {
  if (n == 0) throw ValidationError("cannot factor zero");
  BigInt m = abs(n);
  std::vector<PrimePower> out;
  auto strip = [&](unsigned long p) {
    if (mpz_divisible_ui_p(m.get_mpz_t(), p) == 0) return;
    int e = 0;
    while (mpz_divisible_ui_p(m.get_mpz_t(), p) != 0) {
      mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
      ++e;
    }
    out.push_back({BigInt(p), e});
  };
  constexpr unsigned long kTrialBound = 1000000;
  strip(2);
  for (const auto& op : odd_primes()) {
    if (op.p > kTrialBound || m == 1) break;
    if (BigInt(op.p) * op.p > m) break;
    strip(op.p);
  }
  if (m == 1) return out;
  std::vector<BigInt> rest;
  split(m, rest);
  std::sort(rest.begin(), rest.end());
  for (const auto& p : rest) {
    if (!out.empty() && out.back().prime == p) ++out.back().exponent;
    else out.push_back({p, 1});
  }
  return out;
}

int max_prime_exponent(const BigInt& n) {
  if (n <= 0) throw ValidationError("max_prime_exponent needs n >= 1");
  if (mpz_sizeinbase(n.get_mpz_t(), 2) <= 64) {
    std::uint64_t v = 0;
    mpz_export(&v, nullptr, -1, sizeof v, 0, 0, n.get_mpz_t());
    return max_prime_exponent(v);
  }
  int best = 0;
  for (const auto& pp : factor(n)) best = std::max(best, pp.exponent);
  return best;
}

bool is_kpower_free(const BigInt& n, int k) {
  if (n == 0) throw ValidationError("k-power-freeness of zero is undefined");
  if (k < 2) throw ValidationError("k-power-freeness needs k >= 2");
  return max_prime_exponent(BigInt(abs(n))) < k;
}

}  // namespace resdensity::arith
