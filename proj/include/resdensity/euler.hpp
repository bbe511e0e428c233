#pragma once

// Euler products of local densities: exact partial products, the degree-2
// lower-bound factor for large primes, and a rational certificate for the tail.

#include <map>
#include <optional>
#include <vector>

#include <json.hpp>

#include "resdensity/exact.hpp"
#include "resdensity/localcount.hpp"

namespace resdensity::euler {

struct EulerProductResult {
  ExactRational exactPartial;
  ExactRational certifiedLowerBound;
  std::vector<long> primesEnumerated;
  long factorRangeStart = 23;
  long factorRangeEnd = 0;
};

/// Product of the projective values; one density per distinct prime.
ExactRational partial_product(const std::vector<localcount::LocalDensity>& densities);

/// (p^12 - 3p^10 - 2p^9 + 4p^8) / (p^12 - p^6), a lower bound for the
/// squarefree density at p; defined for p >= 23.
ExactRational tail_factor_d2(long p);

/// L = 1 - 3/P - 1/P^2 <= prod_{p > P} tail_factor_d2(p); P >= 23.
ExactRational certified_tail_lower_bound(long P);

/// Certified lower bound for the density of degree-2 maps with squarefree
/// resultant: exact factors for p <= pmaxExact, tail_factor_d2 for the
/// primes up to factorEnd, and the closed-form certificate beyond.
EulerProductResult lower_bound_mu_d2(long pmaxExact, long factorEnd, Exec exec = Exec::parallel);

/// Product over sigma of the good-reduction lower bounds
/// (p^(2d+2) - 2d p^(2d+1))/(p^(2d+2) - 1) for p > 2d and p^(-2d) for p < 2d,
/// with exact densities substituted where supplied.
ExactRational sigma_factor_bounds(int d, const std::vector<long>& sigma,
                                  const std::map<long, localcount::LocalDensity>& exactDensities = {});

nlohmann::json to_json(const EulerProductResult& r);

}  // namespace resdensity::euler
