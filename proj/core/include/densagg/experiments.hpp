#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "densagg/lowerbound.hpp"
#include "densagg/piecewise.hpp"

namespace densagg {

enum class Loss { KL, Hellinger, L1 };

struct TruthSpec {
  enum class Kind {
    Candidate,  // the candidate at `index` (0-based)
    Density,    // an explicit density
    WorstCase,  // every candidate in turn; the largest excess is reported
  };
  Kind kind = Kind::Candidate;
  std::size_t index = 0;
  std::optional<PiecewiseDensity> density;
};

struct CandidateSpec {
  enum class Kind {
    Perturbation,  // f_delta over a greedy separated set, built per row
    Explicit,      // fixed densities
  };
  Kind kind = Kind::Perturbation;
  // Sample size used to choose L. Unset: each row uses its own n.
  std::optional<std::size_t> family_n;
  std::vector<PiecewiseDensity> densities;
};

struct ExperimentConfig {
  std::uint64_t seed = 0;
  std::size_t M = 0;
  std::vector<std::size_t> M_values;  // rate study only; falls back to {M}
  std::vector<std::size_t> n_values;
  std::size_t replications = 0;
  // Required for perturbation candidates; explicit candidates are checked
  // against F_K(A) only when it is given.
  std::optional<double> A;
  std::optional<TruthSpec> truth;  // unset: candidate 0, or worst case in the rate study
  CandidateSpec candidates;
  std::optional<Loss> loss;  // unset: the experiment's natural loss
  double q = 1.0;
  // Worker threads for replications; 0 = hardware concurrency. Results do
  // not depend on it.
  unsigned threads = 1;

  /// Throws ConfigError on replications == 0, q <= 0, empty n_values, etc.
  void validate() const;
};

struct RiskRow {
  std::string experiment;
  std::size_t M = 0;
  std::size_t n = 0;
  std::size_t replications = 0;
  double mean_risk = 0.0;
  double se = 0.0;
  double oracle_risk = 0.0;
  double excess = 0.0;  // mean_risk - oracle_risk
  double bound = 0.0;
  bool pass = false;
};

struct RiskReport {
  std::vector<RiskRow> rows;
  bool passed() const noexcept;
};

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double target_slope = 1.0;
  double tolerance = 0.5;
  std::size_t used_rows = 0;
  std::size_t dropped_rows = 0;
  bool pass = false;
};

struct RateStudy {
  RiskReport table;  // bound column holds psi_n(M)^e, the rate being fitted
  RateFit fit;
};

struct LowerBoundAudit {
  PerturbationFamily family;
  SeparatedSet set;
  AuditReport report;
};

/// Monte Carlo check of E K(f | f~_n) <= min_j K(f | f_j) + log M / (n + 1).
/// A row passes iff excess <= log M / (n + 1) + 3 SE. Requires KL loss, q = 1.
RiskReport run_oracle_experiment(const ExperimentConfig& config);

/// Excess risk of the aggregate at the worst truth of the perturbation family
/// over the grid M_values x n_values, then least squares of log(excess) on
/// log(log M / n). Target slope is q for KL and q/2 for Hellinger and L1; the
/// fit passes within +-0.5 of it. Rows with nonpositive excess are dropped
/// from the fit and marked pass = false.
RateStudy run_rate_study(const ExperimentConfig& config);

/// Monte Carlo check of E v(f, f_yatracos) <= 3 min_j v(f, f_j) + sqrt(log M / n).
/// A row passes iff mean <= bound + 3 SE. Requires L1 loss, q = 1, n >= 1.
RiskReport run_yatracos_experiment(const ExperimentConfig& config);

/// choose_parameters -> build_separated_set -> audit_lemma_hypotheses.
LowerBoundAudit run_lowerbound_audit(std::size_t M, std::size_t n, BoundParameter A);

}  // namespace densagg
