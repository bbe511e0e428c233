#pragma once

// Exhaustive counting over (Z/p^k)^(2d+2) and the exact local densities built
// from those counts.

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "resdensity/exact.hpp"
#include "resdensity/parallel.hpp"

namespace resdensity::localcount {

/// Classification of (Z/pZ)^(2d+2) by the resultant and its gradient mod p.
///   A       resultant != 0
///   B       resultant == 0, some partial derivative != 0
///   Aprime  resultant == 0
///   Bprime  resultant == 0 and the whole gradient == 0
struct LocalCountRecord {
  int d = 2;
  long p = 2;
  BigInt A, B, Aprime, Bprime;

  BigInt total() const;  // p^(2d+2)
  /// Throws std::logic_error if the partition identities fail.
  void check_invariants() const;
  friend bool operator==(const LocalCountRecord&, const LocalCountRecord&) = default;
};

LocalCountRecord make_record(int d, long p, const BigInt& A, const BigInt& B);

enum class DensityKind { goodReduction, kPowerFree };

struct LocalDensity {
  DensityKind kind = DensityKind::kPowerFree;
  int d = 2;
  long p = 2;
  int k = 2;              // power for kPowerFree; 1 for goodReduction
  ExactRational value;    // projective density
  ExactRational affineValue;
};

/// Full classification of (Z/pZ)^(2d+2). The d = 2 parallel kernel treats the
/// resultant as a quadratic in the last coordinate.
LocalCountRecord count_mod_p(int d, long p, Exec exec = Exec::parallel);
/// Serial reference: exact integer resultant and gradient at every point.
LocalCountRecord count_mod_p_reference(int d, long p);

/// #P^m(Z/p^k Z) = p^((k-1)m) (p^(m+1) - 1)/(p - 1).
BigInt projective_size(int m, long p, int k);

/// |S_p| in P^(2d+1)(Z/p^2): classes whose resultant is nonzero mod p^2,
/// obtained from the mod-p counts by Hensel lifting.
BigInt lifted_projective_count(const LocalCountRecord& rec);
LocalDensity pi_Np2_via_lifting(const LocalCountRecord& rec);

/// Density of resultant != 0 mod p^k by enumerating (Z/p^k)^(2d+2); 1 <= k <= 2d.
LocalDensity pi_Npk_bruteforce(int d, long p, int k, Exec exec = Exec::parallel);

/// Good-reduction density A / (p^(2d+2) - 1).
LocalDensity pi_Gp(const LocalCountRecord& rec);

/// Sparse multivariate integer polynomial.
class IntPolynomial {
 public:
  struct Term {
    std::int64_t coeff;
    std::vector<int> exponents;
  };

  explicit IntPolynomial(int nvars) : nvars_(nvars) {}
  IntPolynomial& add_term(std::int64_t coeff, std::vector<int> exponents);

  int nvars() const { return nvars_; }
  const std::vector<Term>& terms() const { return terms_; }
  /// Value mod `modulus` (modulus < 2^62), in [0, modulus).
  std::int64_t eval_mod(std::span<const std::int64_t> x, std::int64_t modulus) const;
  IntPolynomial partial(int var) const;

 private:
  int nvars_;
  std::vector<Term> terms_;
};

/// Number of lifts beta of alpha to (Z/p^k)^n with h(beta) = 0 mod p^k, by
/// enumerating all p^(n(k-1)) lifts. Throws unless h(alpha) = 0 mod p.
BigInt brute_force_lift_count(const IntPolynomial& h, std::span<const std::int64_t> alpha, long p, int k);

/// p^((n-1)(k-1)) when some partial of h is a unit at alpha, else nullopt.
std::optional<BigInt> hensel_lift_prediction(const IntPolynomial& h, std::span<const std::int64_t> alpha,
                                             long p, int k);

/// Random polynomial in n variables (degree <= 3) with a root alpha mod p at
/// which some partial derivative is a unit mod p. Writes alpha.
IntPolynomial random_rooted_polynomial(int n, long p, std::mt19937_64& rng, std::vector<std::int64_t>& alpha);

// Degree-2 loci in (Z/pZ)^6, coordinates (a,b,c,d,e,f):
//   C: ce-bf = cd-af = bd-ae = 0        (F, G linearly dependent)
//   D: e^2-4df = 2cd-be+2af = b^2-4ac = 0

BigInt count_Cp(long p);
BigInt count_Dp_minus_Cp(long p);

struct DecompositionReport {
  long p = 0;
  BigInt bprime;      // resultant and gradient vanish
  BigInt c;           // |C|
  BigInt dMinusC;     // |D \ C|
  BigInt mismatches;  // points in exactly one of Bprime, C u D
  bool identityHolds() const { return mismatches == 0; }
};

/// Pointwise comparison of Bprime against C u D; valid for every prime.
DecompositionReport decomposition_report(long p);
/// Bprime == C u D; requires p > 3.
bool verify_Bprime_decomposition(long p);

nlohmann::json to_json(const LocalCountRecord& rec);
LocalCountRecord record_from_json(const nlohmann::json& j);
/// "p,A,B,pi_N2_num,pi_N2_den"
std::string csv_header();
std::string csv_row(const LocalCountRecord& rec);

}  // namespace resdensity::localcount
