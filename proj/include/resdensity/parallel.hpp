#pragma once

// Execution policy and enumeration budget shared by the counting kernels.

#include <cstdint>
#include <stdexcept>
#include <string>

#include "resdensity/exact.hpp"

namespace resdensity {

enum class Exec { serial, parallel };

/// Worker count for parallel kernels; <= 0 restores the OpenMP default.
void set_threads(int n);
int max_threads();

/// Raised before an enumeration larger than the budget starts.
struct BudgetExceeded : std::runtime_error {
  BudgetExceeded(const std::string& what, BigInt required, std::uint64_t budget);
  BigInt required;
  std::uint64_t budget;
};

inline constexpr std::uint64_t kDefaultBudget = 1000000000ULL;

/// RESDENSITY_BUDGET when set to a positive integer, else kDefaultBudget.
std::uint64_t enumeration_budget();
void set_enumeration_budget(std::uint64_t budget);  // 0 = back to env/default

void check_budget(const BigInt& required, const std::string& what);

}  // namespace resdensity
