#include "resdensity/localcount.hpp"

#include <algorithm>
#include <stdexcept>

#include "resdensity/arith.hpp"
#include "resdensity/forms.hpp"

namespace resdensity::localcount {

namespace {

void require_prime(long p) {
  if (!arith::is_prime(p)) throw ValidationError(std::to_string(p) + " is not prime");
}

std::int64_t ipow(std::int64_t b, int e) {
  std::int64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

inline std::int64_t mod(std::int64_t v, std::int64_t m) {
  v %= m;
  return v < 0 ? v + m : v;
}

BigInt from_u64(std::uint64_t v) { return BigInt(static_cast<unsigned long>(v)); }

// Residues of a mixed-radix index in base `q`, n digits.
void decode(std::uint64_t index, std::int64_t q, std::span<std::int64_t> out) {
  for (auto it = out.rbegin(); it != out.rend(); ++it) {
    *it = static_cast<std::int64_t>(index % static_cast<std::uint64_t>(q));
    index /= static_cast<std::uint64_t>(q);
  }
}

LocalCountRecord count_mod_p_d2(long p, bool parallel) {
  const std::int64_t P = p;
  std::uint64_t cnt_a = 0, cnt_b = 0;
#pragma omp parallel for collapse(2) reduction(+ : cnt_a, cnt_b) schedule(dynamic) if (parallel)
  for (std::int64_t a = 0; a < P; ++a) {
    for (std::int64_t b = 0; b < P; ++b) {
      const std::int64_t alpha = a * a % P;
      for (std::int64_t c = 0; c < P; ++c) {
        for (std::int64_t d = 0; d < P; ++d) {
          for (std::int64_t e = 0; e < P; ++e) {
            // R = alpha f^2 + beta f + gamma
            const std::int64_t beta = mod(b * b * d - a * b * e - 2 * a * c * d, P);
            const std::int64_t gamma = mod(a * c * e * e - b * c * d * e + c * c * d * d, P);
            for (std::int64_t f = 0; f < P; ++f) {
              if ((alpha * f * f + beta * f + gamma) % P != 0) {
                ++cnt_a;
                continue;
              }
              const auto g = forms::resultant_d2_gradient_i64(a, b, c, d, e, f);
              if (g.da % P != 0 || g.db % P != 0 || g.dc % P != 0 || g.dd % P != 0 || g.de % P != 0 ||
                  g.df % P != 0)
                ++cnt_b;
            }
          }
        }
      }
    }
  }
  return make_record(2, p, from_u64(cnt_a), from_u64(cnt_b));
}

LocalCountRecord count_mod_p_generic(int d, long p, bool parallel) {
  const int n = 2 * d + 2;
  const std::uint64_t total = static_cast<std::uint64_t>(ipow(p, n));
  std::uint64_t cnt_a = 0, cnt_b = 0;
#pragma omp parallel if (parallel)
  {
    std::vector<std::int64_t> x(n);
#pragma omp for reduction(+ : cnt_a, cnt_b) schedule(dynamic, 256)
    for (std::uint64_t idx = 0; idx < total; ++idx) {
      decode(idx, p, x);
      if (forms::resultant_mod_p(d, x, p) != 0) {
        ++cnt_a;
        continue;
      }
      const auto grad = forms::resultant_gradient(d, std::span<const std::int64_t>(x));
      if (std::any_of(grad.begin(), grad.end(), [p](const BigInt& g) { return mpz_divisible_ui_p(g.get_mpz_t(), p) == 0; }))
        ++cnt_b;
    }
  }
  return make_record(d, p, from_u64(cnt_a), from_u64(cnt_b));
}

void validate_count_args(int d, long p) {
  if (d < 2) throw ValidationError("degree must be >= 2");
  require_prime(p);
  check_budget(big_pow(p, 2 * d + 2), "count_mod_p(d=" + std::to_string(d) + ", p=" + std::to_string(p) + ")");
}

}  // namespace

BigInt LocalCountRecord::total() const { return big_pow(p, static_cast<unsigned long>(2 * d + 2)); }

void LocalCountRecord::check_invariants() const {
  if (A < 0 || B < 0 || Aprime < 0 || Bprime < 0) throw std::logic_error("negative count");
  if (A + Aprime != total()) throw std::logic_error("A + A' != p^(2d+2)");
  if (B + Bprime != Aprime) throw std::logic_error("B + B' != A'");
}

LocalCountRecord make_record(int d, long p, const BigInt& A, const BigInt& B) {
  LocalCountRecord r{d, p, A, B, 0, 0};
  r.Aprime = r.total() - A;
  r.Bprime = r.Aprime - B;
  r.check_invariants();
  return r;
}

LocalCountRecord count_mod_p(int d, long p, Exec exec) {
  validate_count_args(d, p);
  const bool parallel = exec == Exec::parallel;
  return d == 2 ? count_mod_p_d2(p, parallel) : count_mod_p_generic(d, p, parallel);
}

LocalCountRecord count_mod_p_reference(int d, long p) {
  validate_count_args(d, p);
  const int n = 2 * d + 2;
  std::vector<BigInt> x(n, BigInt(0));
  BigInt cnt_a = 0, cnt_b = 0;
  for (;;) {
    const BigInt r = forms::sylvester_resultant(d, x);
    if (mpz_divisible_ui_p(r.get_mpz_t(), p) == 0) {
      ++cnt_a;
    } else {
      const auto grad = forms::resultant_gradient(d, std::span<const BigInt>(x));
      for (const auto& g : grad) {
        if (mpz_divisible_ui_p(g.get_mpz_t(), p) == 0) {
          ++cnt_b;
          break;
        }
      }
    }
    int i = n - 1;
    while (i >= 0 && x[i] == p - 1) x[i--] = 0;
    if (i < 0) break;
    ++x[i];
  }
  return make_record(d, p, cnt_a, cnt_b);
}

BigInt projective_size(int m, long p, int k) {
  if (m < 1 || k < 1) throw ValidationError("projective_size needs m >= 1 and k >= 1");
  require_prime(p);
  const auto um = static_cast<unsigned long>(m);
  return big_pow(p, static_cast<unsigned long>(k - 1) * um) * (big_pow(p, um + 1) - 1) / (p - 1);
}

BigInt lifted_projective_count(const LocalCountRecord& rec) {
  const auto m = static_cast<unsigned long>(2 * rec.d + 1);
  const BigInt pm = big_pow(rec.p, m);
  const BigInt pm1 = pm * rec.p;
  return (pm1 * rec.A + (pm1 - pm) * rec.B) / (rec.p * (rec.p - 1));
}

LocalDensity pi_Np2_via_lifting(const LocalCountRecord& rec) {
  rec.check_invariants();
  const int m = 2 * rec.d + 1;
  const auto um = static_cast<unsigned long>(m);
  const BigInt pm = big_pow(rec.p, um);
  const BigInt pm1 = pm * rec.p;
  LocalDensity out{DensityKind::kPowerFree, rec.d, rec.p, 2, {}, {}};
  out.affineValue = ExactRational::normalize(pm1 * rec.A + (pm1 - pm) * rec.B, pm1 * pm1);
  out.value = ExactRational::normalize(lifted_projective_count(rec), projective_size(m, rec.p, 2));
  return out;
}

LocalDensity pi_Npk_bruteforce(int d, long p, int k, Exec exec) {
  if (d < 2) throw ValidationError("degree must be >= 2");
  require_prime(p);
  if (k < 1 || k > 2 * d) throw ValidationError("pi_Npk_bruteforce needs 1 <= k <= 2d");
  const int n = 2 * d + 2;
  check_budget(big_pow(p, static_cast<unsigned long>(k * n)),
               "pi_Npk_bruteforce(d=" + std::to_string(d) + ", p=" + std::to_string(p) + ", k=" + std::to_string(k) + ")");
  const std::int64_t q = ipow(p, k);
  const auto total = static_cast<std::uint64_t>(ipow(q, n));
  const bool use_d2 = d == 2 && q < forms::kResultantD2I64Bound;
  std::uint64_t good = 0;
#pragma omp parallel if (exec == Exec::parallel)
  {
    std::vector<std::int64_t> x(n);
#pragma omp for reduction(+ : good) schedule(static)
    for (std::uint64_t idx = 0; idx < total; ++idx) {
      decode(idx, q, x);
      if (use_d2) {
        if (forms::resultant_d2_i64(x[0], x[1], x[2], x[3], x[4], x[5]) % q != 0) ++good;
      } else {
        const BigInt r = forms::sylvester_resultant(d, std::span<const std::int64_t>(x));
        if (mpz_divisible_ui_p(r.get_mpz_t(), static_cast<unsigned long>(q)) == 0) ++good;
      }
    }
  }
  LocalDensity out{DensityKind::kPowerFree, d, p, k, {}, {}};
  const BigInt all = big_pow(q, static_cast<unsigned long>(n));
  out.affineValue = ExactRational::normalize(from_u64(good), all);
  // Good tuples are unimodular (p | all entries forces p^(2d) | resultant).
  const BigInt units = all - big_pow(q / p, static_cast<unsigned long>(n));
  out.value = ExactRational::normalize(from_u64(good), units);
  return out;
}

LocalDensity pi_Gp(const LocalCountRecord& rec) {
  rec.check_invariants();
  LocalDensity out{DensityKind::goodReduction, rec.d, rec.p, 1, {}, {}};
  out.value = ExactRational::normalize(rec.A, rec.total() - 1);
  out.affineValue = ExactRational::normalize(rec.A, rec.total());
  return out;
}

IntPolynomial& IntPolynomial::add_term(std::int64_t coeff, std::vector<int> exponents) {
  if (static_cast<int>(exponents.size()) != nvars_) throw ValidationError("exponent vector has wrong length");
  if (std::any_of(exponents.begin(), exponents.end(), [](int e) { return e < 0; }))
    throw ValidationError("negative exponent");
  terms_.push_back({coeff, std::move(exponents)});
  return *this;
}

std::int64_t IntPolynomial::eval_mod(std::span<const std::int64_t> x, std::int64_t modulus) const {
  if (static_cast<int>(x.size()) != nvars_) throw ValidationError("point has wrong dimension");
  auto mulmod = [modulus](std::int64_t a, std::int64_t b) {
    return static_cast<std::int64_t>(static_cast<__int128>(a) * b % modulus);
  };
  std::int64_t acc = 0;
  for (const auto& t : terms_) {
    std::int64_t v = mod(t.coeff, modulus);
    for (int i = 0; i < nvars_; ++i) {
      const std::int64_t xi = mod(x[i], modulus);
      for (int e = 0; e < t.exponents[i]; ++e) v = mulmod(v, xi);
    }
    acc = (acc + v) % modulus;
  }
  return acc;
}

IntPolynomial IntPolynomial::partial(int var) const {
  if (var < 0 || var >= nvars_) throw ValidationError("variable index out of range");
  IntPolynomial out(nvars_);
  for (const auto& t : terms_) {
    if (t.exponents[var] == 0) continue;
    auto e = t.exponents;
    const std::int64_t c = t.coeff * e[var];
    --e[var];
    out.add_term(c, std::move(e));
  }
  return out;
}

BigInt brute_force_lift_count(const IntPolynomial& h, std::span<const std::int64_t> alpha, long p, int k) {
  require_prime(p);
  if (k < 1) throw ValidationError("lift level k must be >= 1");
  const int n = h.nvars();
  if (static_cast<int>(alpha.size()) != n) throw ValidationError("alpha has wrong dimension");
  if (h.eval_mod(alpha, p) != 0) throw ValidationError("alpha is not a root of h mod p");
  check_budget(big_pow(p, static_cast<unsigned long>(n * (k - 1))), "brute_force_lift_count");
  const std::int64_t q = ipow(p, k);
  const std::int64_t step_range = ipow(p, k - 1);
  const auto total = static_cast<std::uint64_t>(ipow(step_range, n));
  std::vector<std::int64_t> y(n), beta(n);
  std::uint64_t roots = 0;
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    decode(idx, step_range, y);
    for (int i = 0; i < n; ++i) beta[i] = mod(alpha[i], p) + p * y[i];
    if (h.eval_mod(beta, q) == 0) ++roots;
  }
  return from_u64(roots);
}

std::optional<BigInt> hensel_lift_prediction(const IntPolynomial& h, std::span<const std::int64_t> alpha,
                                             long p, int k) {
  for (int i = 0; i < h.nvars(); ++i)
    if (h.partial(i).eval_mod(alpha, p) != 0)
      return big_pow(p, static_cast<unsigned long>((h.nvars() - 1) * (k - 1)));
  return std::nullopt;
}

IntPolynomial random_rooted_polynomial(int n, long p, std::mt19937_64& rng, std::vector<std::int64_t>& alpha) {
  if (n < 1) throw ValidationError("need at least one variable");
  std::uniform_int_distribution<std::int64_t> coeff(-9, 9), residue(0, p - 1);
  std::uniform_int_distribution<int> expo(0, 3), nterms(1, 4);
  for (;;) {
    IntPolynomial h(n);
    const int terms = nterms(rng);
    for (int t = 0; t < terms; ++t) {
      std::vector<int> e(n);
      int deg = 0;
      for (auto& x : e) deg += (x = expo(rng));
      if (deg == 0) continue;
      h.add_term(coeff(rng), std::move(e));
    }
    alpha.assign(n, 0);
    for (auto& a : alpha) a = residue(rng);
    // Shift the constant term so that alpha becomes a root mod p.
    h.add_term(-h.eval_mod(alpha, p), std::vector<int>(n, 0));
    if (hensel_lift_prediction(h, alpha, p, 1)) return h;
  }
}

namespace {

struct D2Flags {
  bool in_c, in_d, in_bprime;
};

inline D2Flags classify_d2(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d, std::int64_t e,
                           std::int64_t f, std::int64_t P) {
  D2Flags fl{};
  fl.in_c = (c * e - b * f) % P == 0 && (c * d - a * f) % P == 0 && (b * d - a * e) % P == 0;
  fl.in_d = (e * e - 4 * d * f) % P == 0 && (2 * c * d - b * e + 2 * a * f) % P == 0 && (b * b - 4 * a * c) % P == 0;
  if (forms::resultant_d2_i64(a, b, c, d, e, f) % P == 0) {
    const auto g = forms::resultant_d2_gradient_i64(a, b, c, d, e, f);
    fl.in_bprime = g.da % P == 0 && g.db % P == 0 && g.dc % P == 0 && g.dd % P == 0 && g.de % P == 0 && g.df % P == 0;
  }
  return fl;
}

template <typename Visit>
void for_each_d2_point(long p, Visit&& visit) {
  const std::int64_t P = p;
  for (std::int64_t a = 0; a < P; ++a)
    for (std::int64_t b = 0; b < P; ++b)
      for (std::int64_t c = 0; c < P; ++c)
        for (std::int64_t d = 0; d < P; ++d)
          for (std::int64_t e = 0; e < P; ++e)
            for (std::int64_t f = 0; f < P; ++f) visit(classify_d2(a, b, c, d, e, f, P));
}

void validate_d2_locus(long p) {
  require_prime(p);
  check_budget(big_pow(p, 6), "degree-2 locus enumeration at p=" + std::to_string(p));
}

}  // namespace

BigInt count_Cp(long p) {
  validate_d2_locus(p);
  std::uint64_t n = 0;
  for_each_d2_point(p, [&](const D2Flags& fl) { n += fl.in_c; });
  return from_u64(n);
}

BigInt count_Dp_minus_Cp(long p) {
  validate_d2_locus(p);
  std::uint64_t n = 0;
  for_each_d2_point(p, [&](const D2Flags& fl) { n += fl.in_d && !fl.in_c; });
  return from_u64(n);
}

DecompositionReport decomposition_report(long p) {
  validate_d2_locus(p);
  std::uint64_t bprime = 0, c = 0, dmc = 0, bad = 0;
  for_each_d2_point(p, [&](const D2Flags& fl) {
    bprime += fl.in_bprime;
    c += fl.in_c;
    dmc += fl.in_d && !fl.in_c;
    bad += fl.in_bprime != (fl.in_c || fl.in_d);
  });
  return {p, from_u64(bprime), from_u64(c), from_u64(dmc), from_u64(bad)};
}

bool verify_Bprime_decomposition(long p) {
  if (p <= 3) throw ValidationError("the decomposition identity is only claimed for p > 3");
  return decomposition_report(p).identityHolds();
}

nlohmann::json to_json(const LocalCountRecord& rec) {
  return nlohmann::json{{"d", rec.d},
                        {"p", rec.p},
                        {"A", rec.A.get_si()},
                        {"B", rec.B.get_si()},
                        {"Aprime", rec.Aprime.get_si()},
                        {"Bprime", rec.Bprime.get_si()},
                        {"pi_N2", exact::to_json(pi_Np2_via_lifting(rec).value)},
                        {"pi_G", exact::to_json(pi_Gp(rec).value)}};
}

LocalCountRecord record_from_json(const nlohmann::json& j) {
  auto rec = make_record(j.at("d").get<int>(), j.at("p").get<long>(), big_from_i64(j.at("A").get<std::int64_t>()),
                         big_from_i64(j.at("B").get<std::int64_t>()));
  if (rec.Aprime != big_from_i64(j.at("Aprime").get<std::int64_t>()) ||
      rec.Bprime != big_from_i64(j.at("Bprime").get<std::int64_t>()))
    throw ValidationError("inconsistent LocalCountRecord JSON");
  return rec;
}

std::string csv_header() { return "p,A,B,pi_N2_num,pi_N2_den"; }

std::string csv_row(const LocalCountRecord& rec) {
  const auto pi = pi_Np2_via_lifting(rec).value;
  return std::to_string(rec.p) + "," + big_to_string(rec.A) + "," + big_to_string(rec.B) + "," +
         big_to_string(pi.num()) + "," + big_to_string(pi.den());
}

}  // namespace resdensity::localcount
