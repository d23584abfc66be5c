#include "densagg/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <thread>
#include <utility>

#include "densagg/aggregator.hpp"
#include "densagg/distances.hpp"
#include "densagg/errors.hpp"
#include "densagg/sampling.hpp"

namespace densagg {

namespace {

// Separates the random streams of the three experiment kinds.
enum StreamTag : std::uint64_t { kOracleStream = 1, kRateStream = 2, kYatracosStream = 3 };

template <typename Fn>
std::vector<double> parallel_map(std::size_t count, unsigned threads, Fn&& fn) {
  std::vector<double> out(count);
  std::size_t workers = threads == 0 ? std::max(1U, std::thread::hardware_concurrency()) : threads;
  workers = std::min(workers, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = next++; i < count; i = next++) out[i] = fn(i);
        } catch (...) {
          errors[w] = std::current_exception();
          next = count;
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

struct Summary {
  double mean;
  double se;
};

// Fixed-order summation so the result does not depend on scheduling.
Summary summarize(const std::vector<double>& xs) {
  const auto r = static_cast<double>(xs.size());
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / r;
  if (xs.size() < 2 || !std::isfinite(mean)) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (r - 1.0)) / std::sqrt(r)};
}

double loss_value(Loss loss, const PiecewiseDensity& truth, const PiecewiseDensity& estimate) {
  switch (loss) {
    case Loss::KL:
      return kl_divergence(truth, estimate);
    case Loss::Hellinger:
      return hellinger(truth, estimate);
    case Loss::L1:
      return l1_distance(truth, estimate);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double powered(double x, double q) { return q == 1.0 ? x : std::pow(x, q); }

// Builds candidate densities for one (M, n) row. Separated sets depend only
// on (D, M) and are cached.
class CandidateFactory {
 public:
  explicit CandidateFactory(const ExperimentConfig& config) : config_(config) {}

  std::vector<PiecewiseDensity> build(std::size_t m, std::size_t n) {
    if (config_.candidates.kind == CandidateSpec::Kind::Explicit) {
      return config_.candidates.densities;
    }
    const PerturbationFamily family =
        choose_parameters(m, config_.candidates.family_n.value_or(n), BoundParameter(*config_.A));
    auto key = std::make_pair(family.code_length(), m);
    auto it = sets_.find(key);
    if (it == sets_.end()) {
      it = sets_.emplace(key, build_separated_set(family.code_length(), m)).first;
    }
    std::vector<PiecewiseDensity> out;
    out.reserve(m);
    for (const BinaryWord& w : it->second.words()) out.push_back(perturbed_density(family, w));
    return out;
  }

 private:
  const ExperimentConfig& config_;
  std::map<std::pair<std::size_t, std::size_t>, SeparatedSet> sets_;
};

CandidateSet make_candidate_set(const ExperimentConfig& config,
                                std::vector<PiecewiseDensity> densities) {
  if (config.candidates.kind == CandidateSpec::Kind::Explicit && config.A) {
    return CandidateSet(std::move(densities), BoundParameter(*config.A));
  }
  return CandidateSet(std::move(densities));
}

struct Truth {
  std::size_t tag;  // stream component: candidate index, or M for an explicit density
  PiecewiseDensity density;
};

std::vector<Truth> truths_for(const TruthSpec& spec, const std::vector<PiecewiseDensity>& cands) {
  std::vector<Truth> out;
  switch (spec.kind) {
    case TruthSpec::Kind::Candidate:
      if (spec.index >= cands.size()) {
        throw ConfigError("truth index " + std::to_string(spec.index) + " is not below M = " +
                          std::to_string(cands.size()));
      }
      out.push_back({spec.index, cands[spec.index]});
      break;
    case TruthSpec::Kind::Density:
      if (!spec.density) throw ConfigError("density truth without a density");
      out.push_back({cands.size(), *spec.density});
      break;
    case TruthSpec::Kind::WorstCase:
      for (std::size_t j = 0; j < cands.size(); ++j) out.push_back({j, cands[j]});
      break;
  }
  return out;
}

std::size_t candidate_count(const ExperimentConfig& config) {
  if (config.candidates.kind == CandidateSpec::Kind::Explicit) {
    std::size_t m = config.candidates.densities.size();
    if (config.M != 0 && config.M != m) {
      throw ConfigError("M = " + std::to_string(config.M) + " but " + std::to_string(m) +
                        " explicit candidates were given");
    }
    return m;
  }
  return config.M;
}

double oracle_risk(Loss loss, double q, const PiecewiseDensity& truth,
                   const std::vector<PiecewiseDensity>& cands) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : cands) best = std::min(best, powered(loss_value(loss, truth, c), q));
  if (!std::isfinite(best)) {
    throw ConfigError("every candidate is at infinite divergence from the truth");
  }
  return best;
}

struct TruthResult {
  Summary summary;
  double oracle;
};

// Runs `risk(seed, sample)` over all replications for one truth.
template <typename Risk>
TruthResult replicate(const ExperimentConfig& config, std::uint64_t stream, std::size_t row,
                      const Truth& truth, std::size_t n, double oracle, Risk&& risk) {
  const DensitySampler sampler(truth.density);
  std::vector<double> risks = parallel_map(config.replications, config.threads, [&](std::size_t r) {
    std::vector<double> xs = sampler.draw(n, derive_seed(config.seed, {stream, row, truth.tag, r}));
    return risk(xs);
  });
  return {summarize(risks), oracle};
}

}  // namespace

void ExperimentConfig::validate() const {
  if (replications < 1) throw ConfigError("replications must be >= 1");
  if (n_values.empty()) throw ConfigError("n_values must not be empty");
  if (!(q > 0.0) || !std::isfinite(q)) throw ConfigError("exponent q must be > 0");
  if (A && !(*A > 1.0)) throw ConfigError("A must be > 1");
  if (candidates.kind == CandidateSpec::Kind::Perturbation) {
    if (!A) throw ConfigError("perturbation candidates need A");
    if (M < 2 && M_values.empty()) throw ConfigError("perturbation candidates need M >= 2");
    for (std::size_t m : M_values) {
      if (m < 2) throw ConfigError("perturbation candidates need every M >= 2");
    }
    if (!candidates.family_n) {
      for (std::size_t n : n_values) {
        if (n < 1) throw ConfigError("perturbation candidates need every n >= 1");
      }
    }
  } else if (candidates.densities.empty()) {
    throw ConfigError("explicit candidate list is empty");
  }
  if (truth && truth->kind == TruthSpec::Kind::Density && !truth->density) {
    throw ConfigError("density truth without a density");
  }
}

bool RiskReport::passed() const noexcept {
  return std::all_of(rows.begin(), rows.end(), [](const RiskRow& r) { return r.pass; });
}

RiskReport run_oracle_experiment(const ExperimentConfig& config) {
  config.validate();
  if (config.loss.value_or(Loss::KL) != Loss::KL || config.q != 1.0) {
    throw ConfigError("the oracle experiment uses KL loss with q = 1");
  }
  const std::size_t m = candidate_count(config);
  if (m < 2) throw ConfigError("the oracle experiment needs M >= 2");
  const TruthSpec spec = config.truth.value_or(TruthSpec{});

  CandidateFactory factory(config);
  RiskReport report;
  for (std::size_t row = 0; row < config.n_values.size(); ++row) {
    const std::size_t n = config.n_values[row];
    std::vector<PiecewiseDensity> cands = factory.build(m, n);
    const CandidateSet set = make_candidate_set(config, cands);
    const double bound = std::log(static_cast<double>(m)) / static_cast<double>(n + 1);

    RiskRow best;
    bool have = false;
    for (const Truth& truth : truths_for(spec, cands)) {
      const double oracle = oracle_risk(Loss::KL, 1.0, truth.density, cands);
      TruthResult res = replicate(config, kOracleStream, row, truth, n, oracle,
                                  [&](const std::vector<double>& xs) {
                                    return kl_divergence(truth.density, aggregate(set, xs).density);
                                  });
      RiskRow r{"oracle", m, n, config.replications, res.summary.mean, res.summary.se, oracle,
                res.summary.mean - oracle, bound, false};
      r.pass = r.excess <= bound + 3.0 * r.se;
      if (!have || r.excess > best.excess) {
        best = r;
        have = true;
      }
    }
    report.rows.push_back(best);
  }
  return report;
}

RateStudy run_rate_study(const ExperimentConfig& config) {
  config.validate();
  if (config.candidates.kind != CandidateSpec::Kind::Perturbation) {
    throw ConfigError("the rate study runs on perturbation-family candidates");
  }
  const std::vector<std::size_t> ms = config.M_values.empty() ? std::vector<std::size_t>{config.M}
                                                              : config.M_values;
  if (std::set<std::size_t>(ms.begin(), ms.end()).size() < 2) {
    throw ParameterError("the rate study needs at least 2 distinct M values");
  }
  if (std::set<std::size_t>(config.n_values.begin(), config.n_values.end()).size() < 3) {
    throw ParameterError("the rate study needs at least 3 distinct n values");
  }
  const Loss loss = config.loss.value_or(Loss::KL);
  const double q = config.q;
  const double exponent = loss == Loss::KL ? q : q / 2.0;
  const TruthSpec spec = config.truth.value_or(TruthSpec{TruthSpec::Kind::WorstCase, 0, {}});

  CandidateFactory factory(config);
  RateStudy study;
  std::vector<std::pair<double, double>> points;
  std::size_t row = 0;
  for (std::size_t m : ms) {
    for (std::size_t n : config.n_values) {
      std::vector<PiecewiseDensity> cands = factory.build(m, n);
      const CandidateSet set(cands);
      const double psi = std::log(static_cast<double>(m)) / static_cast<double>(n);

      RiskRow best;
      bool have = false;
      for (const Truth& truth : truths_for(spec, cands)) {
        const double oracle = oracle_risk(loss, q, truth.density, cands);
        TruthResult res = replicate(config, kRateStream, row, truth, n, oracle,
                                    [&](const std::vector<double>& xs) {
                                      return powered(
                                          loss_value(loss, truth.density, aggregate(set, xs).density),
                                          q);
                                    });
        RiskRow r{"rate", m, n, config.replications, res.summary.mean, res.summary.se, oracle,
                  res.summary.mean - oracle, std::pow(psi, exponent), false};
        if (!have || r.excess > best.excess) {
          best = r;
          have = true;
        }
      }
      best.pass = best.excess > 0.0 && std::isfinite(best.excess);
      if (best.pass) {
        points.emplace_back(std::log(psi), std::log(best.excess));
      } else {
        ++study.fit.dropped_rows;
      }
      study.table.rows.push_back(best);
      ++row;
    }
  }

  RateFit& fit = study.fit;
  fit.target_slope = exponent;
  fit.used_rows = points.size();
  double mx = 0.0;
  double my = 0.0;
  for (auto [x, y] : points) {
    mx += x;
    my += y;
  }
  const auto k = static_cast<double>(points.size());
  mx /= k;
  my /= k;
  double sxx = 0.0;
  double sxy = 0.0;
  for (auto [x, y] : points) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (points.size() >= 2 && sxx > 0.0) {
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.pass = std::abs(fit.slope - fit.target_slope) <= fit.tolerance;
  } else {
    fit.slope = std::numeric_limits<double>::quiet_NaN();
    fit.intercept = std::numeric_limits<double>::quiet_NaN();
    fit.pass = false;
  }
  return study;
}

RiskReport run_yatracos_experiment(const ExperimentConfig& config) {
  config.validate();
  if (config.loss.value_or(Loss::L1) != Loss::L1 || config.q != 1.0) {
    throw ConfigError("the Yatracos experiment uses L1 loss with q = 1");
  }
  for (std::size_t n : config.n_values) {
    if (n < 1) throw ConfigError("the Yatracos experiment needs every n >= 1");
  }
  const std::size_t m = candidate_count(config);
  const TruthSpec spec = config.truth.value_or(TruthSpec{});

  CandidateFactory factory(config);
  RiskReport report;
  for (std::size_t row = 0; row < config.n_values.size(); ++row) {
    const std::size_t n = config.n_values[row];
    std::vector<PiecewiseDensity> cands = factory.build(m, n);
    const CandidateSet set = make_candidate_set(config, cands);
    const double residual = std::sqrt(std::log(static_cast<double>(m)) / static_cast<double>(n));

    RiskRow best;
    bool have = false;
    for (const Truth& truth : truths_for(spec, cands)) {
      std::vector<double> distances;
      distances.reserve(m);
      for (const auto& c : cands) distances.push_back(l1_distance(truth.density, c));
      const double oracle = *std::min_element(distances.begin(), distances.end());
      TruthResult res = replicate(config, kYatracosStream, row, truth, n, oracle,
                                  [&](const std::vector<double>& xs) {
                                    return distances[yatracos_select(set, xs).index];
                                  });
      const double bound = 3.0 * oracle + residual;
      RiskRow r{"yatracos", m, n, config.replications, res.summary.mean, res.summary.se, oracle,
                res.summary.mean - oracle, bound, false};
      r.pass = r.mean_risk <= bound + 3.0 * r.se;
      if (!have || r.mean_risk - r.bound > best.mean_risk - best.bound) {
        best = r;
        have = true;
      }
    }
    report.rows.push_back(best);
  }
  return report;
}

LowerBoundAudit run_lowerbound_audit(std::size_t M, std::size_t n, BoundParameter A) {
  PerturbationFamily family = choose_parameters(M, n, A);
  SeparatedSet set = build_separated_set(family.code_length(), M);
  AuditReport report = audit_lemma_hypotheses(family, set, n);
  return {std::move(family), std::move(set), std::move(report)};
}

}  // namespace densagg
