#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "densagg/aggregator.hpp"
#include "densagg/experiments.hpp"
#include "densagg/lowerbound.hpp"
#include "densagg/piecewise.hpp"

namespace densagg {

// File formats
//
//   density        {"breakpoints": [...], "values": [...]}
//   candidates     [density, ...]  or  {"candidates": [density, ...]}
//   sample         one real per line
//   trajectory     CSV, header k,w_1,...,w_M
//   separated set  one bit string per line (delta_1 first)
//   audit report   JSON {M, n, A, D, L, pass, checks: [{name, bound, achieved, pass}]}
//   risk report    CSV, header experiment,M,n,replications,mean_risk,se,oracle_risk,excess,bound,pass
//
// Reals are written in the shortest form that round-trips, so identical
// values always produce identical bytes. All parse errors throw
// ValidationError (ConfigError for experiment configs).

std::string format_real(double x);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

std::string function_to_json(const PiecewiseFunction& f);
PiecewiseFunction parse_function_json(std::string_view text);
PiecewiseDensity parse_density_json(std::string_view text);
std::vector<PiecewiseDensity> parse_candidates_json(std::string_view text);
std::string candidates_to_json(std::span<const PiecewiseDensity> candidates);

std::vector<double> parse_sample_text(std::string_view text);
std::string sample_to_text(std::span<const double> sample);

std::string trajectory_to_csv(const WeightTrajectory& trajectory);

std::string separated_set_to_text(const SeparatedSet& set);
SeparatedSet parse_separated_set_text(std::string_view text);

std::string audit_report_to_json(const AuditReport& report);

std::string risk_report_to_csv(const RiskReport& report);
std::string rate_fit_to_json(const RateFit& fit);

std::string yatracos_selection_to_json(const YatracosSelection& selection);

/// Experiment config JSON:
///   {"seed": 7, "M": 10, "M_values": [...], "n_values": [50, 200],
///    "replications": 200, "A": 2.0,
///    "truth_spec": {"type": "candidate", "index": 1}
///                | {"type": "density", "breakpoints": [...], "values": [...]}
///                | {"type": "worst_case"},
///    "candidate_spec": {"type": "perturbation", "n": 1000}
///                    | {"type": "explicit", "densities": [density, ...]},
///    "loss": "KL" | "H" | "L1", "q": 1.0}
/// Only seed, n_values and replications are required. validate() is applied.
ExperimentConfig parse_experiment_config(std::string_view text);

}  // namespace densagg
