#include "resdensity/euler.hpp"

#include <algorithm>
#include <set>

#include "resdensity/arith.hpp"

namespace resdensity::euler {

namespace {

// Balanced product tree; keeps the operands of each multiplication similar in size.
BigInt product_tree(std::vector<BigInt> v) {
  if (v.empty()) return 1;
  while (v.size() > 1) {
    std::vector<BigInt> next;
    next.reserve((v.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < v.size(); i += 2) next.push_back(v[i] * v[i + 1]);
    if (v.size() % 2 == 1) next.push_back(v.back());
    v = std::move(next);
  }
  return v.front();
}

BigInt tail_numerator(long p) {
  const BigInt P(p);
  return big_pow(P, 8) * (big_pow(P, 4) - 3 * P * P - 2 * P + 4);
}

BigInt tail_denominator(long p) { return big_pow(p, 12) - big_pow(p, 6); }

}  // namespace

ExactRational partial_product(const std::vector<localcount::LocalDensity>& densities) {
  if (densities.empty()) throw ValidationError("partial_product needs at least one density");
  std::set<long> seen;
  ExactRational acc(1);
  for (const auto& ld : densities) {
    if (!seen.insert(ld.p).second) throw ValidationError("duplicate prime " + std::to_string(ld.p) + " in Euler product");
    acc *= ld.value;
  }
  return acc;
}

ExactRational tail_factor_d2(long p) {
  if (p < 23) throw ValidationError("tail_factor_d2 is only used for p >= 23");
  if (!arith::is_prime(p)) throw ValidationError(std::to_string(p) + " is not prime");
  return ExactRational::normalize(tail_numerator(p), tail_denominator(p));
}

ExactRational certified_tail_lower_bound(long P) {
  if (P < 23) throw ValidationError("certified_tail_lower_bound needs P >= 23");
  // tail_factor_d2(n) >= 1 - 3/n^2 - 2/n^3, and sum_{n>P} (3/n^2 + 2/n^3) <= 3/P + 1/P^2.
  const BigInt PP(P);
  return ExactRational(1) - ExactRational::normalize(3, PP) - ExactRational::normalize(1, PP * PP);
}

EulerProductResult lower_bound_mu_d2(long pmaxExact, long factorEnd, Exec exec) {
  if (pmaxExact < 19) throw ValidationError("pmaxExact must be >= 19");
  if (factorEnd < 23) throw ValidationError("factorEnd must be >= 23");
  EulerProductResult out;
  std::vector<localcount::LocalDensity> local;
  for (long p : arith::primes_up_to(pmaxExact)) {
    local.push_back(localcount::pi_Np2_via_lifting(localcount::count_mod_p(2, p, exec)));
    out.primesEnumerated.push_back(p);
  }
  out.exactPartial = partial_product(local);

  std::vector<BigInt> nums, dens;
  const long start = std::max(23L, pmaxExact + 1);
  for (long p : arith::primes_up_to(factorEnd)) {
    if (p < start) continue;
    nums.push_back(tail_numerator(p));
    dens.push_back(tail_denominator(p));
  }
  const ExactRational factors = ExactRational::normalize(product_tree(std::move(nums)), product_tree(std::move(dens)));
  const long tail_from = std::max(factorEnd, pmaxExact);
  out.certifiedLowerBound = out.exactPartial * factors * certified_tail_lower_bound(std::max(tail_from, 23L));
  out.factorRangeStart = start;
  out.factorRangeEnd = factorEnd;
  return out;
}

ExactRational sigma_factor_bounds(int d, const std::vector<long>& sigma,
                                  const std::map<long, localcount::LocalDensity>& exactDensities) {
  if (d < 2) throw ValidationError("degree must be >= 2");
  std::set<long> seen;
  ExactRational acc(1);
  const long two_d = 2L * d;
  const auto n = static_cast<unsigned long>(2 * d + 2);
  for (long p : sigma) {
    if (!arith::is_prime(p)) throw ValidationError(std::to_string(p) + " in sigma is not prime");
    if (!seen.insert(p).second) throw ValidationError("duplicate prime " + std::to_string(p) + " in sigma");
    if (auto it = exactDensities.find(p); it != exactDensities.end()) {
      if (it->second.kind != localcount::DensityKind::goodReduction || it->second.d != d)
        throw ValidationError("exact density for p=" + std::to_string(p) + " is not a degree-d good-reduction density");
      acc *= it->second.value;
    } else if (p > two_d) {
      acc *= ExactRational::normalize(big_pow(p, n) - two_d * big_pow(p, n - 1), big_pow(p, n) - 1);
    } else {
      acc *= ExactRational::normalize(1, big_pow(p, static_cast<unsigned long>(two_d)));
    }
  }
  return acc;
}

nlohmann::json to_json(const EulerProductResult& r) {
  return nlohmann::json{{"exact_partial", exact::to_json(r.exactPartial)},
                        {"certified_lower_bound", exact::to_json(r.certifiedLowerBound)},
                        {"certified_lower_bound_decimal", exact::decimal_render(r.certifiedLowerBound, 11)},
                        {"decimal_11", exact::decimal_render(r.exactPartial, 11)},
                        {"primes_exact", r.primesEnumerated},
                        {"factor_range", {r.factorRangeStart, r.factorRangeEnd}}};
}

}  // namespace resdensity::euler
