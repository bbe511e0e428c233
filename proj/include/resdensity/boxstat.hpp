#pragma once

// Exact counts and seeded Monte Carlo estimates of box densities of integer
// tuples in Box(r) = {|x_i| <= r_i}.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "resdensity/exact.hpp"
#include "resdensity/parallel.hpp"

namespace resdensity::boxstat {

struct BoxSpec {
  std::vector<std::int64_t> radii;

  BigInt size() const;  // prod (2 r_i + 1)
};

BoxSpec uniform_box(int d, std::int64_t r);
BoxSpec parse_radii(int d, const std::string& csv);

enum class Predicate { squarefree, map, normalized, alwaysTrue, alwaysFalse };

Predicate parse_predicate(const std::string& name);
std::string to_string(Predicate p);

/// Membership of one integer tuple of length 2d+2.
bool evaluate(int d, Predicate pred, std::span<const std::int64_t> tuple);

/// Philox4x32-10: four 32-bit words per (counter, key).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

/// Uniform tuple for sample `index` under `seed`; depends on nothing else.
void draw_tuple(const BoxSpec& box, std::uint64_t seed, std::uint64_t index, std::span<std::int64_t> out);

struct DensityEstimate {
  ExactRational pointEstimate;
  RationalInterval stderrEnclosure;  // encloses sqrt(p(1-p)/n)
  std::uint64_t samples = 0;
  std::uint64_t hits = 0;
  std::uint64_t seed = 0;
  bool exhaustive = false;  // computed by enumerating the whole box
};

BigInt box_count_exact(int d, const BoxSpec& box, Predicate pred, Exec exec = Exec::parallel);

/// Sampled density; falls back to exact enumeration when samples >= box size.
DensityEstimate box_sample(int d, const BoxSpec& box, std::uint64_t samples, std::uint64_t seed, Predicate pred,
                           Exec exec = Exec::parallel);

/// Coordinate `coord` (1-based) stretched to each inner radius, all others at outerRadius.
std::vector<DensityEstimate> weak_box_sweep(int d, int coord, const std::vector<std::int64_t>& innerRadii,
                                            std::int64_t outerRadius, std::uint64_t samples, std::uint64_t seed,
                                            Predicate pred, Exec exec = Exec::parallel);

RationalInterval stderr_enclosure(std::uint64_t hits, std::uint64_t samples);

nlohmann::json to_json(const DensityEstimate& e);

}  // namespace resdensity::boxstat
