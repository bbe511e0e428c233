#include "resdensity/heights.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace resdensity::heights {

namespace {

struct Tally {
  std::uint64_t projective = 0, maps = 0, squarefree = 0, v = 0, w = 0, minimal = 0;
};

void validate_sigma(const std::vector<long>& sigma) {
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    if (!arith::is_prime(sigma[i])) throw ValidationError(std::to_string(sigma[i]) + " in sigma is not prime");
    for (std::size_t j = 0; j < i; ++j)
      if (sigma[j] == sigma[i]) throw ValidationError("duplicate prime in sigma");
  }
}

bool minimal_rule(int d, int max_exp, bool unit) {
  return unit || max_exp <= d - 1 || (d % 2 == 1 && max_exp <= 2 * d - 1);
}

// Classify a nonzero resultant of magnitude `mag` (machine word).
inline void tally_resultant(int d, std::uint64_t mag, const std::vector<long>& sigma, Tally& t) {
  ++t.maps;
  const int e = arith::max_prime_exponent(mag);
  const bool good = std::all_of(sigma.begin(), sigma.end(),
                                [mag](long p) { return mag % static_cast<std::uint64_t>(p) != 0; });
  t.squarefree += e < 2;
  t.v += good && e < d;
  t.w += good && e < 2 * d;
  t.minimal += minimal_rule(d, e, mag == 1);
}

void tally_resultant(int d, const BigInt& r, const std::vector<long>& sigma, Tally& t) {
  ++t.maps;
  const BigInt mag = abs(r);
  const int e = arith::max_prime_exponent(mag);
  const bool good = std::all_of(sigma.begin(), sigma.end(),
                                [&mag](long p) { return mpz_divisible_ui_p(mag.get_mpz_t(), p) == 0; });
  t.squarefree += e < 2;
  t.v += good && e < d;
  t.w += good && e < 2 * d;
  t.minimal += minimal_rule(d, e, mag == 1);
}

BigInt from_u64(std::uint64_t v) { return BigInt(static_cast<unsigned long>(v)); }

CensusRecord to_record(int d, long x, const std::vector<long>& sigma, const Tally& t) {
  CensusRecord r{d, x, from_u64(t.projective), from_u64(t.maps), from_u64(t.squarefree),
                 from_u64(t.v), from_u64(t.w), from_u64(t.minimal), sigma};
  r.check_invariants();
  return r;
}

void validate_census(int d, long x, const std::vector<long>& sigma) {
  if (d < 2) throw ValidationError("degree must be >= 2");
  if (x < 1) throw ValidationError("height bound x must be >= 1");
  validate_sigma(sigma);
  check_budget(big_pow(2 * x + 1, static_cast<unsigned long>(2 * d + 2)),
               "census(d=" + std::to_string(d) + ", x=" + std::to_string(x) + ")");
}

}  // namespace

void CensusRecord::check_invariants() const {
  auto fail = [](const char* what) { throw std::logic_error(std::string("census invariant violated: ") + what); };
  if (sigma.empty() && countSquarefree > countVSigma) fail("squarefree <= V");
  if (countVSigma > countWSigma) fail("V <= W");
  if (countWSigma > countMaps) fail("W <= maps");
  if (countSquarefree > countMaps) fail("squarefree <= maps");
  if (countMaps > countProjective) fail("maps <= projective");
  if (countCertifiedMinimal < countVSigma) fail("certified minimal >= V");
}

std::string to_string(MinimalityStatus s) {
  return s == MinimalityStatus::CertifiedMinimal ? "CertifiedMinimal" : "Unknown";
}

std::string to_string(WitnessRule r) {
  switch (r) {
    case WitnessRule::dMinusOne: return "dMinusOne";
    case WitnessRule::twoDMinusOneOddD: return "twoDMinusOneOddD";
    case WitnessRule::unitResultant: return "unitResultant";
    case WitnessRule::none: break;
  }
  return "none";
}

CensusRecord enumerate_census(int d, long x, const std::vector<long>& sigma, Exec exec) {
  validate_census(d, x, sigma);
  const int n = 2 * d + 2;
  const std::int64_t side = 2 * x + 1;
  std::uint64_t inner = 1;
  for (int i = 1; i < n; ++i) inner *= static_cast<std::uint64_t>(side);
  const bool d2_fast = d == 2 && x < forms::kResultantD2I64Bound;

  Tally total;
  // Only tuples whose first nonzero entry is positive are candidates, so the
  // first coordinate runs over [0, x].
#pragma omp parallel if (exec == Exec::parallel)
  {
    Tally local;
    std::vector<std::int64_t> t(n);
#pragma omp for collapse(2) schedule(dynamic, 1024) nowait
    for (std::int64_t first = 0; first <= x; ++first) {
      for (std::uint64_t idx = 0; idx < inner; ++idx) {
        t[0] = first;
        std::uint64_t rest = idx;
        for (int i = n - 1; i >= 1; --i) {
          t[i] = static_cast<std::int64_t>(rest % static_cast<std::uint64_t>(side)) - x;
          rest /= static_cast<std::uint64_t>(side);
        }
        std::int64_t lead = 0, g = 0;
        for (auto v : t) {
          if (lead == 0) lead = v;
          g = std::gcd(g, v);
        }
        if (lead <= 0 || g != 1) continue;
        ++local.projective;
        if (d2_fast) {
          const std::int64_t r = forms::resultant_d2_i64(t[0], t[1], t[2], t[3], t[4], t[5]);
          if (r != 0) tally_resultant(d, static_cast<std::uint64_t>(r < 0 ? -r : r), sigma, local);
          continue;
        }
        if (auto small = forms::sylvester_resultant_small(d, t)) {
          const __int128 r = *small;
          if (r == 0) continue;
          const unsigned __int128 mag = r < 0 ? -static_cast<unsigned __int128>(r) : static_cast<unsigned __int128>(r);
          if (mag >> 64 == 0) {
            tally_resultant(d, static_cast<std::uint64_t>(mag), sigma, local);
            continue;
          }
        }
        const BigInt r = forms::sylvester_resultant(d, std::span<const std::int64_t>(t));
        if (r != 0) tally_resultant(d, r, sigma, local);
      }
    }
#pragma omp critical
    {
      total.projective += local.projective;
      total.maps += local.maps;
      total.squarefree += local.squarefree;
      total.v += local.v;
      total.w += local.w;
      total.minimal += local.minimal;
    }
  }
  return to_record(d, x, sigma, total);
}

CensusRecord enumerate_census_reference(int d, long x, const std::vector<long>& sigma) {
  validate_census(d, x, sigma);
  const int n = 2 * d + 2;
  std::vector<BigInt> t(n, BigInt(-x));
  Tally tally;
  for (;;) {
    const bool nonzero = std::any_of(t.begin(), t.end(), [](const BigInt& v) { return v != 0; });
    if (nonzero) {
      const forms::RationalMapModel m = forms::normalize_point(d, t);
      if (m.coeffs == t) {
        ++tally.projective;
        if (is_rational_map(m)) {
          ++tally.maps;
          const BigInt r = forms::sylvester_resultant(d, m.coeffs);
          tally.squarefree += is_kpower_free(r, 2);
          tally.v += membership_VW(m, sigma, Variant::V);
          tally.w += membership_VW(m, sigma, Variant::W);
          tally.minimal += certify_minimal(m).status == MinimalityStatus::CertifiedMinimal;
        }
      }
    }
    int i = n - 1;
    while (i >= 0 && t[i] == x) t[i--] = -x;
    if (i < 0) break;
    ++t[i];
  }
  return to_record(d, x, sigma, tally);
}

bool is_rational_map(const forms::RationalMapModel& model) {
  return forms::sylvester_resultant(model.d, model.coeffs) != 0;
}

bool has_good_reduction(const forms::RationalMapModel& model, long p) {
  if (!arith::is_prime(p)) throw ValidationError(std::to_string(p) + " is not prime");
  const BigInt r = forms::sylvester_resultant(model.d, model.coeffs);
  if (r == 0) throw ValidationError("degenerate model: zero resultant");
  return forms::ord_p(r, p) == 0;
}

bool is_kpower_free(const BigInt& n, int k) {
  if (n == 0) throw ValidationError("k-power-freeness of zero is undefined");
  if (k < 2) throw ValidationError("k must be >= 2");
  // Independent of arith::max_prime_exponent: read exponents off a full factorization.
  const auto fac = arith::factor(n);
  return std::all_of(fac.begin(), fac.end(), [k](const arith::PrimePower& pp) { return pp.exponent < k; });
}

MinimalityCertificate certify_from_resultant(int d, const BigInt& resultant) {
  if (resultant == 0) throw ValidationError("degenerate model: zero resultant");
  if (abs(resultant) == 1) return {MinimalityStatus::CertifiedMinimal, WitnessRule::unitResultant};
  int e = 0;
  for (const auto& pp : arith::factor(resultant)) e = std::max(e, pp.exponent);
  if (e <= d - 1) return {MinimalityStatus::CertifiedMinimal, WitnessRule::dMinusOne};
  if (d % 2 == 1 && e <= 2 * d - 1) return {MinimalityStatus::CertifiedMinimal, WitnessRule::twoDMinusOneOddD};
  return {};
}

MinimalityCertificate certify_minimal(const forms::RationalMapModel& model) {
  return certify_from_resultant(model.d, forms::sylvester_resultant(model.d, model.coeffs));
}

bool membership_VW(const forms::RationalMapModel& model, const std::vector<long>& sigma, Variant variant) {
  validate_sigma(sigma);
  const BigInt r = forms::sylvester_resultant(model.d, model.coeffs);
  if (r == 0) throw ValidationError("degenerate model: zero resultant");
  const int k = variant == Variant::V ? model.d : 2 * model.d;
  if (!is_kpower_free(r, k)) return false;
  return std::all_of(sigma.begin(), sigma.end(), [&r](long p) { return forms::ord_p(r, p) == 0; });
}

nlohmann::json to_json(const CensusRecord& r) {
  return nlohmann::json{{"d", r.d},
                        {"x", r.x},
                        {"sigma", r.sigma},
                        {"countProjective", r.countProjective.get_si()},
                        {"countMaps", r.countMaps.get_si()},
                        {"countSquarefree", r.countSquarefree.get_si()},
                        {"countVSigma", r.countVSigma.get_si()},
                        {"countWSigma", r.countWSigma.get_si()},
                        {"countCertifiedMinimal", r.countCertifiedMinimal.get_si()}};
}

CensusRecord census_from_json(const nlohmann::json& j) {
  auto big = [&j](const char* k) { return big_from_i64(j.at(k).get<std::int64_t>()); };
  CensusRecord r{j.at("d").get<int>(), j.at("x").get<long>(), big("countProjective"), big("countMaps"),
                 big("countSquarefree"), big("countVSigma"), big("countWSigma"), big("countCertifiedMinimal"),
                 j.at("sigma").get<std::vector<long>>()};
  r.check_invariants();
  return r;
}

std::string census_csv_header() {
  return "d,x,countProjective,countMaps,countSquarefree,countVSigma,countWSigma,countCertifiedMinimal";
}

std::string census_csv_row(const CensusRecord& r) {
  std::string s = std::to_string(r.d) + "," + std::to_string(r.x);
  for (const auto* v : {&r.countProjective, &r.countMaps, &r.countSquarefree, &r.countVSigma, &r.countWSigma,
                        &r.countCertifiedMinimal})
    s += "," + big_to_string(*v);
  return s;
}

}  // namespace resdensity::heights
