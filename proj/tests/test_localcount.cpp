#include <doctest.h>

#include "oracles.hpp"
#include "resdensity/localcount.hpp"

using namespace resdensity;
using namespace resdensity::localcount;

namespace {

ExactRational q(long n, long d) { return ExactRational::normalize(n, d); }

// Projective points of P^m(Z/p^k) by counting unimodular vectors and
// dividing by the unit group.
long projective_oracle(int m, long p, int k) {
  long mod = 1;
  for (int i = 0; i < k; ++i) mod *= p;
  long total = 1;
  for (int i = 0; i <= m; ++i) total *= mod;
  long unimodular = 0;
  for (long idx = 0; idx < total; ++idx) {
    long rest = idx;
    bool unit = false;
    for (int i = 0; i <= m; ++i) {
      unit = unit || (rest % mod) % p != 0;
      rest /= mod;
    }
    unimodular += unit;
  }
  return unimodular / (mod / p * (p - 1));
}

// Degree-2 classification from the minor formula and the symbolic gradient.
std::pair<long, long> oracle_counts_d2(long p) {
  long a_count = 0, b_count = 0;
  std::array<long, 6> x{};
  for (long idx = 0; idx < p * p * p * p * p * p; ++idx) {
    long rest = idx;
    for (auto& v : x) {
      v = rest % p;
      rest /= p;
    }
    const mpz_class r = oracle::quadratic_resultant(x[2], x[1], x[0], x[5], x[4], x[3]);
    if (r % p != 0) {
      ++a_count;
      continue;
    }
    for (int i = 0; i < 6; ++i) {
      if (oracle::d2_partial(i, x) % p != 0) {
        ++b_count;
        break;
      }
    }
  }
  return {a_count, b_count};
}

void check_local_bounds(const LocalCountRecord& r) {
  const long p = r.p;
  const int d = r.d;
  REQUIRE(r.A % p == 0);
  REQUIRE(r.Aprime % p == 0);
  REQUIRE(r.Aprime >= p * p);
  REQUIRE(r.Aprime <= 2 * d * big_pow(p, 2 * d + 1));
  REQUIRE(r.A >= p * p);
  if (d == 2) {
    REQUIRE(r.Aprime <= 2 * big_pow(p, 5) - big_pow(p, 3));
    if (p > 3) REQUIRE(r.Bprime < big_pow(p, 4) + 3 * big_pow(p, 3));
  }
}

}  // namespace

TEST_CASE("degree-2 counts from the table") {
  const auto r2 = count_mod_p(2, 2);
  CHECK(r2.A == 24);
  CHECK(r2.B == 18);
  CHECK(r2.Aprime == 40);
  CHECK(r2.Bprime == 22);
  const auto r5 = count_mod_p(2, 5);
  CHECK(r5.A == 12000);
  CHECK(r5.B == 2880);
  CHECK(count_mod_p(2, 3).A == 432);
  CHECK(pi_Np2_via_lifting(r2).value == q(11, 21));
  CHECK(pi_Np2_via_lifting(count_mod_p(2, 3)).value == q(10, 13));
  CHECK(pi_Np2_via_lifting(r5).value == q(596, 651));
  CHECK(pi_Np2_via_lifting(count_mod_p(2, 7)).value == q(782, 817));
  CHECK(lifted_projective_count(r2) == 1056);
  CHECK(lifted_projective_count(r2) * 21 == projective_size(5, 2, 2) * 11);
}

TEST_CASE("kernel, serial and reference agree") {
  for (long p : {2L, 3L, 5L}) {
    const auto par = count_mod_p(2, p, Exec::parallel);
    CHECK(par == count_mod_p(2, p, Exec::serial));
    CHECK(par == count_mod_p_reference(2, p));
  }
  for (long p : {2L, 3L}) {
    const auto par = count_mod_p(3, p, Exec::parallel);
    CHECK(par == count_mod_p(3, p, Exec::serial));
    CHECK(par == count_mod_p_reference(3, p));
  }
}

TEST_CASE("degree-2 counts match the symbolic oracle") {
  for (long p : {2L, 3L, 5L}) {
    const auto [a_count, b_count] = oracle_counts_d2(p);
    const auto rec = count_mod_p(2, p);
    CHECK(rec.A == a_count);
    CHECK(rec.B == b_count);
  }
}

TEST_CASE("local count bounds") {
  for (long p : {2L, 3L, 5L, 7L}) check_local_bounds(count_mod_p(2, p));
  for (long p : {2L, 3L}) check_local_bounds(count_mod_p(3, p));
  const auto bad = LocalCountRecord{2, 2, 24, 18, 40, 21};
  CHECK_THROWS_AS(bad.check_invariants(), std::logic_error);
}

TEST_CASE("projective_size") {
  CHECK(projective_size(5, 2, 1) == 63);
  CHECK(projective_size(5, 2, 2) == 2016);
  CHECK(projective_size(1, 3, 1) == 4);
  for (int m : {1, 2, 3})
    for (long p : {2L, 3L, 5L})
      for (int k : {1, 2}) {
        if (m == 3 && p == 5 && k == 2) continue;
        CHECK(projective_size(m, p, k) == projective_oracle(m, p, k));
      }
  CHECK_THROWS_AS(projective_size(5, 4, 1), ValidationError);
}

TEST_CASE("brute-force local densities") {
  CHECK(pi_Npk_bruteforce(2, 2, 2).value == q(11, 21));
  CHECK(pi_Npk_bruteforce(2, 2, 1).value == q(8, 21));
  CHECK(pi_Npk_bruteforce(2, 3, 1).value == q(54, 91));
  CHECK(pi_Npk_bruteforce(2, 3, 2).value == q(10, 13));
  CHECK(pi_Npk_bruteforce(2, 2, 2, Exec::serial).value == pi_Npk_bruteforce(2, 2, 2).value);
  // Res != 0 mod p^k gets weaker as k grows.
  ExactRational prev(0);
  for (int k = 1; k <= 4; ++k) {
    const auto v = pi_Npk_bruteforce(2, 2, k).value;
    CHECK(v >= prev);
    prev = v;
  }
  CHECK(pi_Npk_bruteforce(3, 2, 2).value == pi_Np2_via_lifting(count_mod_p(3, 2)).value);
  CHECK_THROWS_AS(pi_Npk_bruteforce(2, 2, 5), ValidationError);
  CHECK_THROWS_AS(pi_Npk_bruteforce(2, 4, 1), ValidationError);
}

TEST_CASE("good reduction density") {
  CHECK(pi_Gp(count_mod_p(2, 5)).value == q(500, 651));
  CHECK(pi_Gp(count_mod_p(2, 2)).value == q(8, 21));
  CHECK(pi_Gp(count_mod_p(2, 3)).value == pi_Npk_bruteforce(2, 3, 1).value);
}

TEST_CASE("Hensel lifting examples") {
  IntPolynomial x(2);
  x.add_term(1, {1, 0});
  const std::vector<std::int64_t> origin{0, 0};
  CHECK(brute_force_lift_count(x, origin, 3, 2) == 3);
  CHECK(hensel_lift_prediction(x, origin, 3, 2) == BigInt(3));
  CHECK(brute_force_lift_count(x, origin, 3, 1) == 1);

  IntPolynomial h(1);
  h.add_term(1, {2}).add_term(1, {0});
  const std::vector<std::int64_t> two{2};
  CHECK(brute_force_lift_count(h, two, 5, 3) == 1);
  CHECK(hensel_lift_prediction(h, two, 5, 3) == BigInt(1));
  const std::vector<std::int64_t> one{1};
  CHECK_THROWS_AS(brute_force_lift_count(h, one, 5, 2), ValidationError);

  // x^2 at 0 mod 2: singular, so no prediction.
  IntPolynomial sq(1);
  sq.add_term(1, {2});
  CHECK_FALSE(hensel_lift_prediction(sq, std::vector<std::int64_t>{0}, 2, 2).has_value());
}

TEST_CASE("Hensel lifting on random polynomials") {
  std::mt19937_64 rng(7);
  for (long p : {2L, 3L, 5L})
    for (int n : {1, 2, 3})
      for (int k : {1, 2, 3})
        for (int trial = 0; trial < 5; ++trial) {
          std::vector<std::int64_t> alpha;
          const auto h = random_rooted_polynomial(n, p, rng, alpha);
          REQUIRE(h.eval_mod(alpha, p) == 0);
          const auto pred = hensel_lift_prediction(h, alpha, p, k);
          REQUIRE(pred.has_value());
          REQUIRE(brute_force_lift_count(h, alpha, p, k) == *pred);
          REQUIRE(*pred == big_pow(p, (n - 1) * (k - 1)));
        }
}

TEST_CASE("polynomial partials") {
  IntPolynomial h(2);
  h.add_term(3, {2, 1}).add_term(-5, {0, 3});
  const auto hx = h.partial(0), hy = h.partial(1);
  const std::vector<std::int64_t> pt{2, 3};
  CHECK(hx.eval_mod(pt, 1000) == 36);                  // 6xy
  CHECK(hy.eval_mod(pt, 1000) == (12 - 135 + 1000));   // 3x^2 - 15y^2 mod 1000
  CHECK_THROWS_AS(h.partial(2), ValidationError);
}

TEST_CASE("degree-2 loci") {
  CHECK(count_Cp(2) == 22);
  CHECK(count_Cp(3) == 105);
  CHECK(count_Cp(5) == 745);
  for (long p : {5L, 7L}) {
    CHECK(count_Cp(p) == p * p * p + p * (p * p * p - 1));
    CHECK(count_Dp_minus_Cp(p) <= 2 * (p - 1) * (p - 1) * (p - 1));
    CHECK(verify_Bprime_decomposition(p));
    const auto rep = decomposition_report(p);
    CHECK(rep.bprime == count_mod_p(2, p).Bprime);
    CHECK(rep.c + rep.dMinusC == rep.bprime);
  }
  CHECK(count_Dp_minus_Cp(2) >= 0);
  CHECK_THROWS_AS(verify_Bprime_decomposition(3), ValidationError);
}

TEST_CASE("budget guard") {
  set_enumeration_budget(1000);
  CHECK_THROWS_AS(count_mod_p(2, 5), BudgetExceeded);
  try {
    count_mod_p(2, 5);
  } catch (const BudgetExceeded& e) {
    CHECK(e.required == 15625);
    CHECK(std::string(e.what()).find("p=5") != std::string::npos);
  }
  CHECK_NOTHROW(count_mod_p(2, 3));
  set_enumeration_budget(0);
  CHECK(enumeration_budget() >= 1000);
}

TEST_CASE("record serialization") {
  const auto rec = count_mod_p(2, 3);
  const auto j = to_json(rec);
  CHECK(record_from_json(j) == rec);
  CHECK(j.dump() == to_json(record_from_json(j)).dump());
  CHECK(csv_header() == "p,A,B,pi_N2_num,pi_N2_den");
  CHECK(csv_row(count_mod_p(2, 2)) == "2,24,18,11,21");
  auto broken = j;
  broken["Bprime"] = 0;
  CHECK_THROWS_AS(record_from_json(broken), ValidationError);
}
