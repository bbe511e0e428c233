#include "resdensity/cli.hpp"

#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "resdensity/arith.hpp"
#include "resdensity/boxstat.hpp"
#include "resdensity/euler.hpp"
#include "resdensity/exact.hpp"
#include "resdensity/forms.hpp"
#include "resdensity/heights.hpp"
#include "resdensity/localcount.hpp"
#include "resdensity/parallel.hpp"

namespace resdensity::cli {

namespace {

using nlohmann::json;

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const BudgetExceeded& e) {
    err << "error: budget exceeded: " << e.what() << "\n";
    return kBudget;
  }
}

std::vector<long> sorted_unique_sigma(std::vector<long> sigma) {
  for (long p : sigma)
    if (!arith::is_prime(p)) throw ValidationError("sigma entry " + std::to_string(p) + " is not prime");
  std::sort(sigma.begin(), sigma.end());
  if (std::adjacent_find(sigma.begin(), sigma.end()) != sigma.end()) throw ValidationError("duplicate prime in sigma");
  return sigma;
}

struct CheckList {
  json checks = json::array();
  json info = json::array();
  bool all = true;

  void add(const std::string& name, bool ok, const std::string& detail = {}) {
    checks.push_back({{"name", name}, {"passed", ok}, {"detail", detail}});
    all = all && ok;
  }
};

std::string rec_tag(const localcount::LocalCountRecord& r) {
  return "d=" + std::to_string(r.d) + " p=" + std::to_string(r.p);
}

void warning_suite(CheckList& cl) {
  std::vector<localcount::LocalCountRecord> recs;
  for (long p : {2L, 3L, 5L, 7L, 11L, 13L}) recs.push_back(localcount::count_mod_p(2, p));
  for (long p : {2L, 3L}) recs.push_back(localcount::count_mod_p(3, p));
  for (const auto& r : recs) {
    const BigInt P(r.p);
    const BigInt p2 = P * P;
    cl.add("p | A (" + rec_tag(r) + ")", r.A % P == 0, big_to_string(r.A));
    cl.add("p | A' (" + rec_tag(r) + ")", r.Aprime % P == 0, big_to_string(r.Aprime));
    cl.add("A' >= p^2 (" + rec_tag(r) + ")", r.Aprime >= p2);
    cl.add("A >= p^2 (" + rec_tag(r) + ")", r.A >= p2);
    cl.add("A' <= 2d p^(2d+1) (" + rec_tag(r) + ")",
           r.Aprime <= 2 * r.d * big_pow(r.p, static_cast<unsigned long>(2 * r.d + 1)));
  }
}

void bounds_suite(CheckList& cl) {
  for (long p : {2L, 3L, 5L, 7L, 11L, 13L}) {
    const auto r = localcount::count_mod_p(2, p);
    const BigInt P(p);
    cl.add("A' <= 2p^5 - p^3 (" + rec_tag(r) + ")", r.Aprime <= 2 * big_pow(P, 5) - big_pow(P, 3),
           big_to_string(r.Aprime));
    if (p > 3)
      cl.add("B' < p^4 + 3p^3 (" + rec_tag(r) + ")", r.Bprime < big_pow(P, 4) + 3 * big_pow(P, 3),
             big_to_string(r.Bprime));
    const auto g = localcount::pi_Gp(r).value;
    const auto n2 = localcount::pi_Np2_via_lifting(r).value;
    cl.add("pi(N1) <= pi(N2) (" + rec_tag(r) + ")", g <= n2, g.str() + " <= " + n2.str());
    cl.add("pi(G_p) >= p^-2d (" + rec_tag(r) + ")", g >= ExactRational::normalize(1, big_pow(P, 4)));
    if (p > 4) cl.add("pi(G_p) >= 1 - 2d/p (" + rec_tag(r) + ")", g >= ExactRational(1) - ExactRational::normalize(4, P));
  }
  for (const auto& [p, kmax] : std::vector<std::pair<long, int>>{{2, 4}, {3, 2}}) {
    ExactRational prev(0);
    for (int k = 1; k <= kmax; ++k) {
      const auto v = localcount::pi_Npk_bruteforce(2, p, k).value;
      cl.add("pi(N^(" + std::to_string(k) + ")) monotone (d=2 p=" + std::to_string(p) + ")", prev <= v, v.str());
      prev = v;
    }
  }
  const auto r23 = localcount::count_mod_p(2, 23);
  const auto exact23 = localcount::pi_Np2_via_lifting(r23).value;
  const auto factor23 = euler::tail_factor_d2(23);
  cl.add("tail_factor_d2(23) <= pi(N_23^(2))", factor23 <= exact23, exact23.str());
}

void hensel_suite(CheckList& cl) {
  for (long p : {2L, 3L}) {
    const auto brute = localcount::pi_Npk_bruteforce(2, p, 2).value;
    const auto lifted = localcount::pi_Np2_via_lifting(localcount::count_mod_p(2, p)).value;
    cl.add("brute force pi(N^(2)) == lifting formula (d=2 p=" + std::to_string(p) + ")", brute == lifted,
           brute.str() + " vs " + lifted.str());
  }
  std::mt19937_64 rng(20240601);
  for (long p : {2L, 3L, 5L})
    for (int n = 1; n <= 3; ++n)
      for (int k = 1; k <= 3; ++k) {
        int ok = 0;
        for (int trial = 0; trial < 20; ++trial) {
          std::vector<std::int64_t> alpha;
          const auto h = localcount::random_rooted_polynomial(n, p, rng, alpha);
          const auto predicted = localcount::hensel_lift_prediction(h, alpha, p, k);
          ok += predicted && *predicted == localcount::brute_force_lift_count(h, alpha, p, k);
        }
        cl.add("lift count p^((n-1)(k-1)) (p=" + std::to_string(p) + " n=" + std::to_string(n) +
                   " k=" + std::to_string(k) + ")",
               ok == 20, std::to_string(ok) + "/20");
      }
}

void decomposition_suite(CheckList& cl) {
  for (long p : {2L, 3L, 5L, 7L, 11L, 13L}) {
    const auto rep = localcount::decomposition_report(p);
    const BigInt P(p);
    json entry{{"p", p},
               {"Bprime", big_to_string(rep.bprime)},
               {"C", big_to_string(rep.c)},
               {"D_minus_C", big_to_string(rep.dMinusC)},
               {"mismatches", big_to_string(rep.mismatches)}};
    if (p <= 3) {
      cl.info.push_back(entry);
      continue;
    }
    cl.add("B' == C u D (p=" + std::to_string(p) + ")", rep.identityHolds(), big_to_string(rep.mismatches) + " mismatches");
    cl.add("|C| == p^3 + p(p^3-1) (p=" + std::to_string(p) + ")", rep.c == big_pow(P, 3) + P * (big_pow(P, 3) - 1),
           big_to_string(rep.c));
    cl.add("|D\\C| <= 2(p-1)^3 (p=" + std::to_string(p) + ")", rep.dMinusC <= 2 * big_pow(P - 1, 3),
           big_to_string(rep.dMinusC));
  }
}

}  // namespace

std::string canonical(const json& j) { return j.dump(); }

int cmd_table(int d, long pmax, Format format, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (pmax < 2) throw ValidationError("pmax must be >= 2");
    const auto primes = arith::primes_up_to(pmax);
    for (long p : primes)
      check_budget(big_pow(p, static_cast<unsigned long>(2 * d + 2)), "table row p=" + std::to_string(p));
    std::vector<localcount::LocalCountRecord> rows;
    for (long p : primes) {
      err << "counting d=" << d << " p=" << p << "\n";
      rows.push_back(localcount::count_mod_p(d, p));
    }
    if (format == Format::csv) {
      out << localcount::csv_header() << "\n";
      for (const auto& r : rows) out << localcount::csv_row(r) << "\n";
    } else {
      json arr = json::array();
      for (const auto& r : rows) arr.push_back(localcount::to_json(r));
      out << canonical(json{{"d", d}, {"rows", arr}}) << "\n";
    }
    return kOk;
  });
}

int cmd_euler(int d, long pmaxExact, long factorEnd, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (d != 2)
      throw ValidationError(
          "only d=2 has a certified Euler-product bound; for general d the large-prime factor depends on "
          "non-effective constants (gamma_2), so no certified number can be produced");
    err << "enumerating primes <= " << pmaxExact << ", factors up to " << factorEnd << "\n";
    const auto res = euler::lower_bound_mu_d2(pmaxExact, factorEnd);
    const ExactRational threshold = ExactRational::normalize(327, 1000);
    json j = euler::to_json(res);
    j["threshold"] = exact::to_json(threshold);
    j["exceeds_threshold"] = res.certifiedLowerBound > threshold;
    out << canonical(j) << "\n";
    if (pmaxExact >= 19 && factorEnd >= 10000 && !(res.certifiedLowerBound > threshold)) {
      err << "certified bound does not exceed 327/1000\n";
      return kCertification;
    }
    return kOk;
  });
}

int cmd_certify(int d, const std::string& coeffs, const std::vector<long>& sigma_in, std::ostream& out,
                std::ostream& err) {
  return guarded(err, [&] {
    const auto sigma = sorted_unique_sigma(sigma_in);
    const auto input = forms::parse_model(d, coeffs);
    const auto model = forms::normalize_point(d, input.coeffs);
    const BigInt r = forms::sylvester_resultant(d, model.coeffs);
    if (r == 0) throw ValidationError("degenerate: not a degree-" + std::to_string(d) + " map (resultant is 0)");
    json fac = json::array();
    for (const auto& pp : arith::factor(r)) fac.push_back({{"p", big_to_string(pp.prime)}, {"e", pp.exponent}});
    json good = json::object();
    for (long p : sigma) good[std::to_string(p)] = heights::has_good_reduction(model, p);
    const auto cert = heights::certify_minimal(model);
    const json j{{"input", forms::to_json(input)},
                 {"model", forms::to_json(model)},
                 {"height", big_to_string(model.height())},
                 {"resultant", big_to_string(r)},
                 {"factorization", fac},
                 {"sigma", sigma},
                 {"good_reduction", good},
                 {"V", heights::membership_VW(model, sigma, heights::Variant::V)},
                 {"W", heights::membership_VW(model, sigma, heights::Variant::W)},
                 {"certificate",
                  {{"status", heights::to_string(cert.status)}, {"witness_rule", heights::to_string(cert.witnessRule)}}}};
    out << canonical(j) << "\n";
    return kOk;
  });
}

int cmd_census(int d, const std::vector<long>& xs, const std::vector<long>& sigma_in, Format format,
               std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (xs.empty()) throw ValidationError("census needs at least one x");
    const auto sigma = sorted_unique_sigma(sigma_in);
    for (long x : xs) {
      if (x < 1) throw ValidationError("x must be >= 1");
      check_budget(big_pow(2 * x + 1, static_cast<unsigned long>(2 * d + 2)), "census x=" + std::to_string(x));
    }
    std::vector<heights::CensusRecord> rows;
    for (long x : xs) {
      err << "census d=" << d << " x=" << x << "\n";
      rows.push_back(heights::enumerate_census(d, x, sigma));
    }
    if (format == Format::csv) {
      out << heights::census_csv_header() << "\n";
      for (const auto& r : rows) out << heights::census_csv_row(r) << "\n";
    } else {
      json arr = json::array();
      for (const auto& r : rows) arr.push_back(heights::to_json(r));
      out << canonical(json{{"d", d}, {"rows", arr}}) << "\n";
    }
    return kOk;
  });
}

int cmd_box_sample(int d, const std::string& radii, std::uint64_t samples, std::uint64_t seed,
                   const std::string& predicate, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto box = boxstat::parse_radii(d, radii);
    const auto pred = boxstat::parse_predicate(predicate);
    err << "sampling " << samples << " tuples, seed " << seed << "\n";
    const auto est = boxstat::box_sample(d, box, samples, seed, pred);
    json j = boxstat::to_json(est);
    j["d"] = d;
    j["radii"] = box.radii;
    j["predicate"] = boxstat::to_string(pred);
    out << canonical(j) << "\n";
    return kOk;
  });
}

json run_verify_suite(const std::string& suite) {
  CheckList cl;
  if (suite == "warning") warning_suite(cl);
  else if (suite == "bounds") bounds_suite(cl);
  else if (suite == "hensel") hensel_suite(cl);
  else if (suite == "decomposition") decomposition_suite(cl);
  else throw ValidationError("unknown suite '" + suite + "' (warning|bounds|hensel|decomposition)");
  return json{{"suite", suite}, {"checks", cl.checks}, {"informational", cl.info}, {"passed", cl.all}};
}

int cmd_verify(const std::string& suite, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const json j = run_verify_suite(suite);
    out << canonical(j) << "\n";
    if (!j.at("passed").get<bool>()) {
      for (const auto& c : j.at("checks"))
        if (!c.at("passed").get<bool>()) err << "FAILED: " << c.at("name").get<std::string>() << "\n";
      return kCertification;
    }
    return kOk;
  });
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Densities of degree-d rational maps on P^1 over Q with prescribed reduction"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (default: all cores)");

  int d = 2;
  long pmax = 13, pmax_exact = 19, factor_end = 10000;
  std::string format = "json", coeffs, radii, predicate = "squarefree", suite;
  std::vector<long> sigma, xs;
  std::uint64_t samples = 0, seed = 0;

  auto add_format = [&format](CLI::App* sub) {
    sub->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  };

  auto* table = app.add_subcommand("table", "local counts and pi(N_p^(2)) for all primes <= pmax");
  table->add_option("--d", d)->required();
  table->add_option("--pmax", pmax)->required();
  add_format(table);

  auto* eul = app.add_subcommand("euler", "certified lower bound for the squarefree-resultant density (d=2)");
  eul->add_option("--d", d)->required();
  eul->add_option("--pmax-exact", pmax_exact);
  eul->add_option("--factor-end", factor_end);

  auto* cert = app.add_subcommand("certify", "resultant, reduction and minimality of one map");
  cert->add_option("--d", d)->required();
  cert->add_option("--coeffs", coeffs, "A0,..,Ad,B0,..,Bd")->required();
  cert->add_option("--sigma", sigma)->delimiter(',');

  auto* census = app.add_subcommand("census", "exhaustive census of normalized tuples of height <= x");
  census->add_option("--d", d)->required();
  census->add_option("--x", xs, "height bound(s), comma separated")->required()->delimiter(',');
  census->add_option("--sigma", sigma)->delimiter(',');
  add_format(census);

  auto* box = app.add_subcommand("box-sample", "seeded Monte Carlo box density");
  box->add_option("--d", d)->required();
  box->add_option("--radii", radii, "r1,..,r(2d+2) or a single radius")->required();
  box->add_option("--samples", samples)->required();
  box->add_option("--seed", seed)->required();
  box->add_option("--predicate", predicate, "squarefree|map|normalized");

  auto* verify = app.add_subcommand("verify", "run an invariant suite");
  verify->add_option("--suite", suite)->required()->check(
      CLI::IsMember({"warning", "bounds", "hensel", "decomposition"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kValidation;
  }

  set_threads(threads);
  const Format fmt = format == "csv" ? Format::csv : Format::json;
  if (*table) return cmd_table(d, pmax, fmt, out, err);
  if (*eul) return cmd_euler(d, pmax_exact, factor_end, out, err);
  if (*cert) return cmd_certify(d, coeffs, sigma, out, err);
  if (*census) return cmd_census(d, xs, sigma, fmt, out, err);
  if (*box) return cmd_box_sample(d, radii, samples, seed, predicate, out, err);
  return cmd_verify(suite, out, err);
}

}  // namespace resdensity::cli
