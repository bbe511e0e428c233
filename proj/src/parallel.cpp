#include "resdensity/parallel.hpp"

#include <atomic>
#include <cstdlib>

#include <omp.h>

namespace resdensity {

namespace {
std::atomic<std::uint64_t> g_budget_override{0};
}

void set_threads(int n) {
  if (n > 0) omp_set_num_threads(n);
  else omp_set_num_threads(omp_get_num_procs());
}

int max_threads() { return omp_get_max_threads(); }

BudgetExceeded::BudgetExceeded(const std::string& what, BigInt req, std::uint64_t b)
    : std::runtime_error(what + " needs " + big_to_string(req) + " evaluations, budget is " +
                         std::to_string(b) + " (set RESDENSITY_BUDGET to raise it)"),
      required(std::move(req)),
      budget(b) {}

std::uint64_t enumeration_budget() {
  if (const auto o = g_budget_override.load(); o != 0) return o;
  if (const char* env = std::getenv("RESDENSITY_BUDGET")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return kDefaultBudget;
}

void set_enumeration_budget(std::uint64_t budget) { g_budget_override = budget; }

void check_budget(const BigInt& required, const std::string& what) {
  const std::uint64_t b = enumeration_budget();
  if (required > BigInt(static_cast<unsigned long>(b))) throw BudgetExceeded(what, required, b);
}

}  // namespace resdensity
