#pragma once

// Command surface of the `resdensity` tool. Each command writes its artifact to
// `out` and progress or diagnostics to `err`, and returns the process exit code.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace resdensity::cli {

enum ExitCode : int {
  kOk = 0,
  kValidation = 2,
  kBudget = 3,
  kCertification = 4,
};

enum class Format { json, csv };

int cmd_table(int d, long pmax, Format format, std::ostream& out, std::ostream& err);
int cmd_euler(int d, long pmaxExact, long factorEnd, std::ostream& out, std::ostream& err);
int cmd_certify(int d, const std::string& coeffs, const std::vector<long>& sigma, std::ostream& out,
                std::ostream& err);
int cmd_census(int d, const std::vector<long>& xs, const std::vector<long>& sigma, Format format, std::ostream& out,
               std::ostream& err);
int cmd_box_sample(int d, const std::string& radii, std::uint64_t samples, std::uint64_t seed,
                   const std::string& predicate, std::ostream& out, std::ostream& err);
int cmd_verify(const std::string& suite, std::ostream& out, std::ostream& err);

/// Checks behind `verify --suite`; "passed" is true iff every asserted check held.
nlohmann::json run_verify_suite(const std::string& suite);

/// Canonical artifact form: sorted keys, no insignificant whitespace.
std::string canonical(const nlohmann::json& j);

/// Parse argv and dispatch.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace resdensity::cli
