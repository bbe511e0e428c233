#include "resdensity/boxstat.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "resdensity/arith.hpp"
#include "resdensity/forms.hpp"

namespace resdensity::boxstat {

namespace {

void validate_box(int d, const BoxSpec& box) {
  if (d < 2) throw ValidationError("degree must be >= 2");
  if (box.radii.size() != forms::tuple_length(d))
    throw ValidationError("box needs " + std::to_string(forms::tuple_length(d)) + " radii");
  for (auto r : box.radii)
    if (r < 1 || r > (std::int64_t{1} << 30)) throw ValidationError("radii must lie in [1, 2^30]");
}

BigInt from_u64(std::uint64_t v) { return BigInt(static_cast<unsigned long>(v)); }

std::uint64_t box_size_u64(const BoxSpec& box) {
  const BigInt s = box.size();
  return s.fits_ulong_p() ? s.get_ui() : ~std::uint64_t{0};
}

void decode(const BoxSpec& box, std::uint64_t idx, std::span<std::int64_t> out) {
  for (std::size_t i = box.radii.size(); i-- > 0;) {
    const auto side = static_cast<std::uint64_t>(2 * box.radii[i] + 1);
    out[i] = static_cast<std::int64_t>(idx % side) - box.radii[i];
    idx /= side;
  }
}

std::uint64_t enumerate_hits(int d, const BoxSpec& box, Predicate pred, bool parallel) {
  const std::uint64_t total = box_size_u64(box);
  std::uint64_t hits = 0;
#pragma omp parallel if (parallel)
  {
    std::vector<std::int64_t> t(box.radii.size());
#pragma omp for reduction(+ : hits) schedule(static)
    for (std::uint64_t idx = 0; idx < total; ++idx) {
      decode(box, idx, t);
      hits += evaluate(d, pred, t);
    }
  }
  return hits;
}

BigInt resultant_of(int d, std::span<const std::int64_t> t) {
  const bool small = std::all_of(t.begin(), t.end(), [](std::int64_t v) {
    return v > -forms::kResultantD2I64Bound && v < forms::kResultantD2I64Bound;
  });
  if (d == 2 && small) return big_from_i64(forms::resultant_d2_i64(t[0], t[1], t[2], t[3], t[4], t[5]));
  return forms::sylvester_resultant(d, t);
}

}  // namespace

BigInt BoxSpec::size() const {
  BigInt s(1);
  for (auto r : radii) s *= 2 * r + 1;
  return s;
}

BoxSpec uniform_box(int d, std::int64_t r) { return BoxSpec{std::vector<std::int64_t>(forms::tuple_length(d), r)}; }

BoxSpec parse_radii(int d, const std::string& csv) {
  BoxSpec box;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      box.radii.push_back(std::stoll(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ValidationError("bad radius '" + item + "'");
    }
  }
  if (box.radii.size() == 1) box.radii.assign(forms::tuple_length(d), box.radii[0]);
  validate_box(d, box);
  return box;
}

Predicate parse_predicate(const std::string& name) {
  if (name == "squarefree") return Predicate::squarefree;
  if (name == "map") return Predicate::map;
  if (name == "normalized") return Predicate::normalized;
  if (name == "true") return Predicate::alwaysTrue;
  if (name == "false") return Predicate::alwaysFalse;
  throw ValidationError("unknown predicate '" + name + "' (squarefree|map|normalized|true|false)");
}

std::string to_string(Predicate p) {
  switch (p) {
    case Predicate::squarefree: return "squarefree";
    case Predicate::map: return "map";
    case Predicate::normalized: return "normalized";
    case Predicate::alwaysTrue: return "true";
    case Predicate::alwaysFalse: return "false";
  }
  return "?";
}

bool evaluate(int d, Predicate pred, std::span<const std::int64_t> t) {
  switch (pred) {
    case Predicate::alwaysTrue: return true;
    case Predicate::alwaysFalse: return false;
    case Predicate::normalized: {
      std::int64_t lead = 0, g = 0;
      for (auto v : t) {
        if (lead == 0) lead = v;
        g = std::gcd(g, v);
      }
      return lead > 0 && g == 1;
    }
    case Predicate::map: return resultant_of(d, t) != 0;
    case Predicate::squarefree: {
      // A squarefree resultant forces gcd 1: p | gcd gives p^(2d) | resultant.
      const BigInt r = resultant_of(d, t);
      if (r == 0) return false;
      if (r.fits_slong_p()) return arith::is_kpower_free(static_cast<std::int64_t>(r.get_si()), 2);
      return arith::is_kpower_free(r, 2);
    }
  }
  return false;
}

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> c, std::array<std::uint32_t, 2> k) {
  constexpr std::uint64_t kM0 = 0xD2511F53, kM1 = 0xCD9E8D57;
  constexpr std::uint32_t kW0 = 0x9E3779B9, kW1 = 0xBB67AE85;
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      k[0] += kW0;
      k[1] += kW1;
    }
    const std::uint64_t p0 = kM0 * c[0];
    const std::uint64_t p1 = kM1 * c[2];
    c = {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0], static_cast<std::uint32_t>(p1),
         static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1], static_cast<std::uint32_t>(p0)};
  }
  return c;
}

void draw_tuple(const BoxSpec& box, std::uint64_t seed, std::uint64_t index, std::span<std::int64_t> out) {
  const std::array<std::uint32_t, 2> key{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  std::uint32_t block = 0;
  std::array<std::uint32_t, 4> words{};
  std::size_t used = 4;
  auto next = [&]() {
    if (used == 4) {
      words = philox4x32({static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), block++, 0}, key);
      used = 0;
    }
    return words[used++];
  };
  for (std::size_t i = 0; i < box.radii.size(); ++i) {
    // Bounded multiply-shift; reject the low band that would bias the result.
    const auto range = static_cast<std::uint64_t>(2 * box.radii[i] + 1);
    const std::uint64_t threshold = ((std::uint64_t{1} << 32) - range) % range;
    for (;;) {
      const std::uint64_t m = static_cast<std::uint64_t>(next()) * range;
      if ((m & 0xFFFFFFFFu) >= threshold) {
        out[i] = static_cast<std::int64_t>(m >> 32) - box.radii[i];
        break;
      }
    }
  }
}

BigInt box_count_exact(int d, const BoxSpec& box, Predicate pred, Exec exec) {
  validate_box(d, box);
  check_budget(box.size(), "box_count_exact");
  return from_u64(enumerate_hits(d, box, pred, exec == Exec::parallel));
}

RationalInterval stderr_enclosure(std::uint64_t hits, std::uint64_t samples) {
  if (samples == 0) throw ValidationError("stderr of zero samples");
  // sqrt(h (n - h) / n^3) = sqrt(h (n - h) n) / n^2, bracketed at scale 10^-15.
  const BigInt n = from_u64(samples);
  const BigInt scale = big_pow(10, 15);
  const BigInt radicand = from_u64(hits) * (n - from_u64(hits)) * n * scale * scale;
  BigInt root, rem;
  mpz_sqrtrem(root.get_mpz_t(), rem.get_mpz_t(), radicand.get_mpz_t());
  const BigInt den = n * n * scale;
  return {ExactRational::normalize(root, den), ExactRational::normalize(rem == 0 ? root : BigInt(root + 1), den)};
}

DensityEstimate box_sample(int d, const BoxSpec& box, std::uint64_t samples, std::uint64_t seed, Predicate pred,
                           Exec exec) {
  validate_box(d, box);
  if (samples < 1) throw ValidationError("samples must be >= 1");
  DensityEstimate est;
  est.seed = seed;
  if (box.size() <= from_u64(samples)) {
    est.exhaustive = true;
    est.samples = box_size_u64(box);
    est.hits = enumerate_hits(d, box, pred, exec == Exec::parallel);
    est.pointEstimate = ExactRational::normalize(from_u64(est.hits), from_u64(est.samples));
    est.stderrEnclosure = RationalInterval::point(ExactRational(0));
    return est;
  }
  check_budget(from_u64(samples), "box_sample");
  std::uint64_t hits = 0;
#pragma omp parallel if (exec == Exec::parallel)
  {
    std::vector<std::int64_t> t(box.radii.size());
#pragma omp for reduction(+ : hits) schedule(static)
    for (std::uint64_t i = 0; i < samples; ++i) {
      draw_tuple(box, seed, i, t);
      hits += evaluate(d, pred, t);
    }
  }
  est.samples = samples;
  est.hits = hits;
  est.pointEstimate = ExactRational::normalize(from_u64(hits), from_u64(samples));
  est.stderrEnclosure = stderr_enclosure(hits, samples);
  return est;
}

std::vector<DensityEstimate> weak_box_sweep(int d, int coord, const std::vector<std::int64_t>& innerRadii,
                                            std::int64_t outerRadius, std::uint64_t samples, std::uint64_t seed,
                                            Predicate pred, Exec exec) {
  const int n = static_cast<int>(forms::tuple_length(d));
  if (coord < 1 || coord > n) throw ValidationError("coordinate index must be in [1, 2d+2]");
  if (innerRadii.empty()) throw ValidationError("empty inner-radius schedule");
  for (std::size_t i = 1; i < innerRadii.size(); ++i)
    if (innerRadii[i] <= innerRadii[i - 1]) throw ValidationError("inner radii must be strictly increasing");
  std::vector<DensityEstimate> out;
  for (auto r : innerRadii) {
    BoxSpec box = uniform_box(d, outerRadius);
    box.radii[coord - 1] = r;
    out.push_back(box_sample(d, box, samples, seed, pred, exec));
  }
  return out;
}

nlohmann::json to_json(const DensityEstimate& e) {
  return nlohmann::json{{"point_estimate", exact::to_json(e.pointEstimate)},
                        {"point_estimate_decimal", exact::decimal_render(e.pointEstimate, 8)},
                        {"stderr", exact::to_json(e.stderrEnclosure)},
                        {"stderr_decimal", exact::decimal_render(e.stderrEnclosure.hi(), 8)},
                        {"samples", e.samples},
                        {"hits", e.hits},
                        {"seed", e.seed},
                        {"exhaustive", e.exhaustive}};
}

}  // namespace resdensity::boxstat
