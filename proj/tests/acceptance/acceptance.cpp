// Acceptance suite: one [PASS]/[FAIL] line per criterion, nonzero exit on
// any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "densagg/aggregator.hpp"
#include "densagg/distances.hpp"
#include "densagg/experiments.hpp"
#include "densagg/formats.hpp"
#include "densagg/lowerbound.hpp"
#include "densagg/sampling.hpp"
#include "oracles.hpp"
#include "weights_oracle.hpp"

namespace {

using namespace densagg;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

ExperimentConfig family_config(std::size_t m, std::vector<std::size_t> ns, std::size_t reps,
                               std::uint64_t seed) {
  ExperimentConfig c;
  c.seed = seed;
  c.M = m;
  c.n_values = std::move(ns);
  c.replications = reps;
  c.A = 2.0;
  return c;
}

ExperimentConfig oracle_config() {
  auto c = family_config(10, {50, 200, 1000}, 200, 11);
  c.truth = TruthSpec{TruthSpec::Kind::Candidate, 1, {}};
  return c;
}

ExperimentConfig yatracos_config() {
  auto c = family_config(16, {500}, 200, 5);
  c.truth = TruthSpec{TruthSpec::Kind::WorstCase, 0, {}};
  return c;
}

ExperimentConfig rate_config(std::size_t reps) {
  auto c = family_config(0, {100, 400, 1600}, reps, 2024);
  c.M_values = {4, 16, 64};
  return c;
}

Outcome ac1_oracle_inequality() {
  auto start = Clock::now();
  RiskReport report = run_oracle_experiment(oracle_config());
  double elapsed = seconds_since(start);
  bool pass = report.passed() && elapsed < 30.0;
  std::string detail;
  for (const RiskRow& r : report.rows) {
    detail += fmt("n=%.0f excess=%.3g<=%.3g; ", static_cast<double>(r.n), r.excess,
                  r.bound + 3.0 * r.se);
  }
  return {pass, detail + fmt("%.1fs", elapsed)};
}

Outcome ac2_closed_forms() {
  auto start = Clock::now();
  const std::size_t n = 1000;
  auto fam = choose_parameters(16, n, BoundParameter(2.0));
  auto set = build_separated_set(fam.code_length(), 16);
  std::vector<PiecewiseDensity> dens;
  for (const auto& w : set.words()) dens.push_back(perturbed_density(fam, w));
  double worst = 0.0;
  for (std::size_t i = 0; i < set.size(); ++i) {
    double kl = static_cast<double>(n) * kl_divergence(dens[i], dens[0]);
    worst = std::max(worst, std::abs(analytic_kl_product(fam, set[i], n) - kl));
    for (std::size_t j = 0; j < set.size(); ++j) {
      double h = hellinger(dens[i], dens[j]);
      worst = std::max(worst, std::abs(analytic_hellinger_sq(fam, set[i], set[j]) - h * h));
      worst = std::max(worst,
                       std::abs(analytic_l1(fam, set[i], set[j]) - l1_distance(dens[i], dens[j])));
    }
  }
  double elapsed = seconds_since(start);
  return {worst <= 1e-12 && elapsed < 1.0, fmt("max deviation %.3g, %.3fs", worst, elapsed)};
}

Outcome ac3_audit() {
  auto audit = run_lowerbound_audit(16, 1000, BoundParameter(2.0));
  std::size_t kl = 0, hellinger_pairs = 0;
  for (const auto& c : audit.report.checks) {
    kl += c.name.starts_with("kl_product");
    hellinger_pairs += c.name.starts_with("hellinger_sq");
  }
  bool complete = kl == 16 && hellinger_pairs == 16 * 15 / 2;
  auto bad = audit.report.violations();
  std::string detail = fmt("%.0f checks, %.0f violations", static_cast<double>(audit.report.checks.size()),
                           static_cast<double>(bad.size()));
  for (const auto& c : bad) detail += "; " + c.name;
  return {complete && bad.empty(), detail};
}

Outcome ac4_separated_sets() {
  bool pass = true;
  std::string detail;
  for (std::size_t d : {8u, 16u, 32u, 64u}) {
    const std::size_t m = std::size_t{1} << (d / 8);
    auto start = Clock::now();
    auto set = build_separated_set(d, m);
    bool ok = set.size() >= m && set[0].weight() == 0;
    for (std::size_t i = 0; i < set.size(); ++i) {
      std::string a = set[i].to_string();
      for (std::size_t j = i + 1; j < set.size(); ++j) {
        std::string b = set[j].to_string();
        std::size_t rho = 0;
        for (std::size_t k = 0; k < d; ++k) rho += a[k] != b[k];
        ok = ok && 8.0 * static_cast<double>(rho) >= static_cast<double>(d);
      }
    }
    pass = pass && ok;
    detail += fmt("D=%.0f |N|=%.0f (%.2fs); ", static_cast<double>(d),
                  static_cast<double>(set.size()), seconds_since(start));
  }
  return {pass, detail};
}

Outcome ac5_weights() {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::size_t> pick_m(2, 20), pick_n(0, 500), pick_cells(1, 12);
  double worst_sum = 0.0, worst_row = 0.0;
  bool uniform_start = true;
  for (int t = 0; t < 100; ++t) {
    std::size_t m = pick_m(rng);
    std::vector<PiecewiseDensity> cands;
    for (std::size_t j = 0; j < m; ++j) cands.push_back(oracle::random_density(rng, pick_cells(rng)));
    std::uniform_int_distribution<std::size_t> pick_truth(0, m - 1);
    auto xs = sample(cands[pick_truth(rng)], pick_n(rng), rng());
    auto traj = progressive_weights(CandidateSet(cands), xs);
    auto expected = oracle::weight_rows(cands, xs);
    for (std::size_t k = 0; k < traj.steps(); ++k) {
      double sum = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        sum += traj.row(k)[j];
        worst_row = std::max(worst_row, std::abs(traj.row(k)[j] - expected[k][j]));
      }
      worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
    }
    for (double w : traj.row(0)) uniform_start = uniform_start && w == 1.0 / static_cast<double>(m);
  }
  return {worst_sum <= 1e-12 && worst_row <= 1e-12 && uniform_start,
          fmt("max |sum-1| %.3g, max row deviation %.3g", worst_sum, worst_row) +
              (uniform_start ? ", k=0 uniform" : ", k=0 NOT uniform")};
}

Outcome ac6_yatracos() {
  auto start = Clock::now();
  const RiskRow r = run_yatracos_experiment(yatracos_config()).rows.at(0);
  return {r.pass, fmt("mean %.4g <= %.4g (+3SE %.3g)", r.mean_risk, r.bound, 3.0 * r.se) +
                      fmt(", %.1fs", seconds_since(start))};
}

Outcome ac7_rate() {
  auto start = Clock::now();
  RateStudy study = run_rate_study(rate_config(100));
  const RateFit& f = study.fit;
  return {f.pass && f.dropped_rows == 0 && f.slope >= 0.5 && f.slope <= 1.5,
          fmt("slope %.4f over %.0f rows", f.slope, static_cast<double>(f.used_rows)) +
              fmt(", %.1fs", seconds_since(start))};
}

Outcome ac8_determinism() {
  bool pass = true;
  std::string detail;
  auto check = [&](const char* name, const std::function<std::string(ExperimentConfig)>& run,
                   ExperimentConfig c) {
    std::string first = run(c);
    std::string again = run(c);
    c.threads = 4;
    std::string threaded = run(c);
    bool same = first == again && first == threaded;
    pass = pass && same;
    detail += std::string(name) + (same ? " identical; " : " DIFFERS; ");
  };
  check("oracle", [](ExperimentConfig c) { return risk_report_to_csv(run_oracle_experiment(c)); },
        oracle_config());
  check("yatracos", [](ExperimentConfig c) { return risk_report_to_csv(run_yatracos_experiment(c)); },
        yatracos_config());
  check("rate",
        [](ExperimentConfig c) {
          auto s = run_rate_study(c);
          return risk_report_to_csv(s.table) + rate_fit_to_json(s.fit);
        },
        [] {
          auto c = rate_config(10);
          c.M_values = {4, 16};
          return c;
        }());
  return {pass, detail};
}

}  // namespace

int main() {
  struct Criterion {
    const char* id;
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {"AC1", "oracle inequality", ac1_oracle_inequality},
      {"AC2", "closed-form agreement", ac2_closed_forms},
      {"AC3", "lower-bound hypothesis audit", ac3_audit},
      {"AC4", "separated-set construction", ac4_separated_sets},
      {"AC5", "weight invariants", ac5_weights},
      {"AC6", "Yatracos bound", ac6_yatracos},
      {"AC7", "rate study slope", ac7_rate},
      {"AC8", "determinism", ac8_determinism},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("[%s] %s %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, std::size(criteria));
  return failures == 0 ? 0 : 1;
}
