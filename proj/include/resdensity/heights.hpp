#pragma once

// Census of normalized integer tuples of bounded height and the per-map
// reduction and minimality predicates.

#include <string>
#include <vector>

#include <json.hpp>

#include "resdensity/arith.hpp"
#include "resdensity/exact.hpp"
#include "resdensity/forms.hpp"
#include "resdensity/parallel.hpp"

namespace resdensity::heights {

struct CensusRecord {
  int d = 2;
  long x = 1;
  BigInt countProjective, countMaps, countSquarefree, countVSigma, countWSigma, countCertifiedMinimal;
  std::vector<long> sigma;

  /// Throws std::logic_error on a violated nesting relation.
  void check_invariants() const;
  friend bool operator==(const CensusRecord&, const CensusRecord&) = default;
};

enum class MinimalityStatus { CertifiedMinimal, Unknown };
enum class WitnessRule { dMinusOne, twoDMinusOneOddD, unitResultant, none };

struct MinimalityCertificate {
  MinimalityStatus status = MinimalityStatus::Unknown;
  WitnessRule witnessRule = WitnessRule::none;
};

enum class Variant { V, W };

std::string to_string(MinimalityStatus s);
std::string to_string(WitnessRule r);

/// All tuples in [-x, x]^(2d+2) that are normalized representatives, classified.
CensusRecord enumerate_census(int d, long x, const std::vector<long>& sigma, Exec exec = Exec::parallel);
/// Serial reference using bignum resultants and full factorizations.
CensusRecord enumerate_census_reference(int d, long x, const std::vector<long>& sigma);

bool is_rational_map(const forms::RationalMapModel& model);
bool has_good_reduction(const forms::RationalMapModel& model, long p);
bool is_kpower_free(const BigInt& n, int k);

/// Minimality from the resultant's prime valuations alone.
MinimalityCertificate certify_from_resultant(int d, const BigInt& resultant);
MinimalityCertificate certify_minimal(const forms::RationalMapModel& model);

/// V: d-power-free resultant, W: 2d-power-free; both with good reduction on sigma.
bool membership_VW(const forms::RationalMapModel& model, const std::vector<long>& sigma, Variant variant);

nlohmann::json to_json(const CensusRecord& r);
CensusRecord census_from_json(const nlohmann::json& j);
std::string census_csv_header();
std::string census_csv_row(const CensusRecord& r);

}  // namespace resdensity::heights
