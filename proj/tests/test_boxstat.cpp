#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "resdensity/boxstat.hpp"
#include "resdensity/heights.hpp"

using namespace resdensity;
using namespace resdensity::boxstat;

namespace {

using Words = std::array<std::uint32_t, 4>;

// Tuples of {-1,0,1}^6 with squarefree resultant, from the minor formula.
long squarefree_unit_box_oracle() {
  long hits = 0;
  for (long idx = 0; idx < 729; ++idx) {
    std::array<long, 6> v{};
    long rest = idx;
    for (auto& c : v) {
      c = rest % 3 - 1;
      rest /= 3;
    }
    const mpz_class r = oracle::quadratic_resultant(v[2], v[1], v[0], v[5], v[4], v[3]);
    if (r != 0 && oracle::naive_max_exponent(mpz_class(abs(r)).get_ui()) < 2) ++hits;
  }
  return hits;
}

}  // namespace

TEST_CASE("philox known answers") {
  CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) == Words{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        Words{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        Words{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("draws stay in the box and look uniform") {
  BoxSpec box{{2, 1, 7, 1000, 1 << 30, 3}};
  std::vector<std::int64_t> t(6);
  std::array<long, 5> bins{};
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    draw_tuple(box, 99, static_cast<std::uint64_t>(i), t);
    for (std::size_t k = 0; k < 6; ++k) REQUIRE(std::abs(t[k]) <= box.radii[k]);
    ++bins[t[0] + 2];
  }
  double chi2 = 0;
  for (long b : bins) chi2 += std::pow(b - n / 5.0, 2) / (n / 5.0);
  CHECK(chi2 < 18.47);  // 0.999 quantile, 4 degrees of freedom

  std::vector<std::int64_t> a(6), b(6);
  draw_tuple(box, 5, 17, a);
  draw_tuple(box, 5, 17, b);
  CHECK(a == b);
  draw_tuple(box, 6, 17, b);
  CHECK(a != b);
}

TEST_CASE("exact box counts") {
  const auto unit = uniform_box(2, 1);
  CHECK(box_count_exact(2, unit, Predicate::normalized) == 364);
  CHECK(box_count_exact(2, unit, Predicate::normalized) == heights::enumerate_census(2, 1, {}).countProjective);
  CHECK(box_count_exact(2, unit, Predicate::squarefree) == squarefree_unit_box_oracle());
  CHECK(box_count_exact(2, unit, Predicate::alwaysFalse) == 0);
  CHECK(box_count_exact(2, unit, Predicate::alwaysTrue) == 729);
  const auto r2 = uniform_box(2, 2);
  CHECK(box_count_exact(2, r2, Predicate::map, Exec::serial) == box_count_exact(2, r2, Predicate::map));
  // every map comes in a +/- pair of normalized and anti-normalized rescalings
  CHECK(box_count_exact(2, unit, Predicate::map) == 2 * heights::enumerate_census(2, 1, {}).countMaps);
}

TEST_CASE("squarefree shortcut needs no gcd test") {
  const auto box = uniform_box(2, 2);
  std::vector<std::int64_t> t(6);
  long violations = 0;
  for (std::uint64_t idx = 0; idx < 15625; ++idx) {
    std::uint64_t rest = idx;
    long g = 0;
    for (auto& c : t) {
      c = static_cast<std::int64_t>(rest % 5) - 2;
      rest /= 5;
      g = std::gcd(g, c);
    }
    if (evaluate(2, Predicate::squarefree, t) && g != 1) ++violations;
  }
  CHECK(violations == 0);
}

TEST_CASE("sampling is deterministic and independent of workers") {
  const auto box = uniform_box(2, 1000);
  const auto a = box_sample(2, box, 20000, 42, Predicate::squarefree);
  const auto b = box_sample(2, box, 20000, 42, Predicate::squarefree);
  const auto s = box_sample(2, box, 20000, 42, Predicate::squarefree, Exec::serial);
  CHECK(a.hits == b.hits);
  CHECK(a.hits == s.hits);
  CHECK(to_json(a).dump() == to_json(s).dump());
  CHECK_FALSE(a.exhaustive);
  // the same index always yields the same tuple, so prefixes agree
  const auto prefix = box_sample(2, box, 10000, 42, Predicate::squarefree);
  CHECK(prefix.hits <= a.hits);
  CHECK(a.hits - prefix.hits <= 10000);
  CHECK(box_sample(2, box, 20000, 43, Predicate::squarefree).hits != a.hits);
}

TEST_CASE("degenerate predicates") {
  const auto box = uniform_box(2, 1000);
  const auto yes = box_sample(2, box, 1000, 1, Predicate::alwaysTrue);
  CHECK(yes.pointEstimate == ExactRational(1));
  CHECK(yes.stderrEnclosure.hi() == ExactRational(0));
  const auto no = box_sample(2, box, 1000, 1, Predicate::alwaysFalse);
  CHECK(no.pointEstimate == ExactRational(0));
  CHECK(no.stderrEnclosure.hi() == ExactRational(0));
}

TEST_CASE("small boxes fall back to enumeration") {
  const auto unit = uniform_box(2, 1);
  const auto est = box_sample(2, unit, 1000, 7, Predicate::squarefree);
  CHECK(est.exhaustive);
  CHECK(est.samples == 729);
  CHECK(est.pointEstimate ==
        ExactRational::normalize(box_count_exact(2, unit, Predicate::squarefree), BigInt(729)));
  const auto sweep = weak_box_sweep(2, 1, {1}, 1, 1000, 7, Predicate::squarefree);
  REQUIRE(sweep.size() == 1);
  CHECK(sweep[0].pointEstimate == est.pointEstimate);
}

TEST_CASE("weak box sweep") {
  const auto sweep = weak_box_sweep(2, 3, {200, 400, 800}, 200, 20000, 11, Predicate::squarefree);
  REQUIRE(sweep.size() == 3);
  for (std::size_t i = 0; i < sweep.size(); ++i)
    for (std::size_t j = i + 1; j < sweep.size(); ++j) {
      const double diff = std::abs(sweep[i].pointEstimate.approx() - sweep[j].pointEstimate.approx());
      const double pooled = std::hypot(sweep[i].stderrEnclosure.hi().approx(), sweep[j].stderrEnclosure.hi().approx());
      CHECK(diff <= 5 * pooled);
    }
  BoxSpec stretched = uniform_box(2, 200);
  stretched.radii[2] = 400;
  CHECK(box_sample(2, stretched, 20000, 11, Predicate::squarefree).hits == sweep[1].hits);
  CHECK_THROWS_AS(weak_box_sweep(2, 7, {1}, 1, 10, 1, Predicate::map), ValidationError);
  CHECK_THROWS_AS(weak_box_sweep(2, 1, {5, 5}, 1, 10, 1, Predicate::map), ValidationError);
}

TEST_CASE("stderr enclosure") {
  for (int trial = 0; trial < 300; ++trial) {
    const auto n = static_cast<std::uint64_t>(oracle::uniform(1, 10000000));
    const auto h = static_cast<std::uint64_t>(oracle::uniform(0, static_cast<long>(n)));
    const auto iv = stderr_enclosure(h, n);
    // lo^2 <= h(n-h)/n^3 <= hi^2, checked exactly
    const ExactRational var = ExactRational::normalize(BigInt(h) * BigInt(n - h), big_pow(BigInt(n), 3));
    REQUIRE(iv.lo() * iv.lo() <= var);
    REQUIRE(var <= iv.hi() * iv.hi());
    REQUIRE(iv.width() <= ExactRational::normalize(1, big_pow(BigInt(n), 2) * big_pow(10, 15)));
  }
  CHECK(stderr_enclosure(0, 10).hi() == ExactRational(0));
  CHECK(std::abs(stderr_enclosure(5, 20).lo().approx() - std::sqrt(0.25 * 0.75 / 20)) < 1e-12);
  CHECK_THROWS_AS(stderr_enclosure(1, 0), ValidationError);
}

TEST_CASE("parsing") {
  CHECK(parse_radii(2, "1000").radii == std::vector<std::int64_t>(6, 1000));
  CHECK(parse_radii(2, "1,2,3,4,5,6").radii == std::vector<std::int64_t>{1, 2, 3, 4, 5, 6});
  CHECK(parse_radii(2, "1,2,3,4,5,6").size() == 3 * 5 * 7 * 9 * 11 * 13);
  CHECK_THROWS_AS(parse_radii(2, "1,2"), ValidationError);
  CHECK_THROWS_AS(parse_radii(2, "0"), ValidationError);
  CHECK_THROWS_AS(parse_radii(2, "x"), ValidationError);
  CHECK_THROWS_AS(parse_radii(2, "2000000000"), ValidationError);
  for (auto p : {Predicate::squarefree, Predicate::map, Predicate::normalized, Predicate::alwaysTrue,
                 Predicate::alwaysFalse})
    CHECK(parse_predicate(to_string(p)) == p);
  CHECK_THROWS_AS(parse_predicate("cube"), ValidationError);
}
