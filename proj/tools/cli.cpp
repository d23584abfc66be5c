#include "cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <ostream>

#include "densagg/aggregator.hpp"
#include "densagg/errors.hpp"
#include "densagg/experiments.hpp"
#include "densagg/formats.hpp"

namespace densagg::cli {

namespace {

struct SelectionArgs {
  std::string candidates;
  std::string sample;
  std::string out;
  std::string trajectory;
  std::optional<double> A;
};

struct AuditArgs {
  std::size_t M = 0;
  std::size_t n = 0;
  double A = 0.0;
  std::string out = "lowerbound_audit.json";
  std::string set_out;
};

struct ExperimentArgs {
  std::string config;
  std::string out;
  std::string fit_out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> M;
  std::optional<std::size_t> n;
  std::optional<double> A;
  std::optional<std::size_t> replications;
  unsigned threads = 1;
};

CandidateSet load_candidates(const SelectionArgs& a) {
  auto densities = parse_candidates_json(read_text_file(a.candidates));
  if (a.A) return CandidateSet(std::move(densities), BoundParameter(*a.A));
  return CandidateSet(std::move(densities));
}

int run_aggregate(const SelectionArgs& a) {
  const CandidateSet set = load_candidates(a);
  const std::vector<double> xs = parse_sample_text(read_text_file(a.sample));
  if (!a.trajectory.empty()) {
    write_text_file(a.trajectory, trajectory_to_csv(progressive_weights(set, xs)));
  }
  write_text_file(a.out, function_to_json(aggregate(set, xs).density));
  return kSuccess;
}

int run_yatracos(const SelectionArgs& a) {
  const CandidateSet set = load_candidates(a);
  const std::vector<double> xs = parse_sample_text(read_text_file(a.sample));
  write_text_file(a.out, yatracos_selection_to_json(yatracos_select(set, xs)));
  return kSuccess;
}

int run_audit(const AuditArgs& a) {
  LowerBoundAudit audit = run_lowerbound_audit(a.M, a.n, BoundParameter(a.A));
  write_text_file(a.out, audit_report_to_json(audit.report));
  if (!a.set_out.empty()) write_text_file(a.set_out, separated_set_to_text(audit.set));
  return audit.report.passed() ? kSuccess : kCheckFailed;
}

ExperimentConfig load_config(const ExperimentArgs& a) {
  ExperimentConfig c = parse_experiment_config(read_text_file(a.config));
  if (a.seed) c.seed = *a.seed;
  if (a.M) {
    c.M = *a.M;
    c.M_values.clear();
  }
  if (a.n) c.n_values = {*a.n};
  if (a.A) c.A = *a.A;
  if (a.replications) c.replications = *a.replications;
  c.threads = a.threads;
  c.validate();
  return c;
}

int run_experiment(const std::string& name, const ExperimentArgs& a) {
  const ExperimentConfig config = load_config(a);
  if (name == "oracle-exp") {
    RiskReport report = run_oracle_experiment(config);
    write_text_file(a.out, risk_report_to_csv(report));
    return report.passed() ? kSuccess : kCheckFailed;
  }
  if (name == "yatracos-exp") {
    RiskReport report = run_yatracos_experiment(config);
    write_text_file(a.out, risk_report_to_csv(report));
    return report.passed() ? kSuccess : kCheckFailed;
  }
  RateStudy study = run_rate_study(config);
  write_text_file(a.out, risk_report_to_csv(study.table));
  write_text_file(a.fit_out.empty() ? a.out + ".fit.json" : a.fit_out, rate_fit_to_json(study.fit));
  return study.table.passed() && study.fit.pass ? kSuccess : kCheckFailed;
}

void add_selection_options(CLI::App* cmd, SelectionArgs& a) {
  cmd->add_option("--candidates", a.candidates, "candidate densities (JSON)")->required();
  cmd->add_option("--sample", a.sample, "observations, one per line")->required();
  cmd->add_option("--out", a.out, "output path")->required();
  cmd->add_option("--A", a.A, "require candidates bounded by A");
}

void add_experiment_options(CLI::App* cmd, ExperimentArgs& a) {
  cmd->add_option("--config", a.config, "experiment config (JSON)")->required();
  cmd->add_option("--out", a.out, "risk report (CSV)")->required();
  cmd->add_option("--seed", a.seed, "override the config seed");
  cmd->add_option("--M", a.M, "override M (clears M_values)");
  cmd->add_option("--n", a.n, "run a single sample size");
  cmd->add_option("--A", a.A, "override A");
  cmd->add_option("--replications", a.replications, "override replications");
  cmd->add_option("--threads", a.threads, "worker threads, 0 = all cores (results unchanged)");
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& err) {
  CLI::App app{"Model-selection aggregation of step densities", "densagg"};
  app.require_subcommand(1);

  SelectionArgs agg_args;
  add_selection_options(app.add_subcommand("aggregate", "progressive-mixture aggregate"), agg_args);
  auto* agg = app.get_subcommand("aggregate");
  agg->add_option("--trajectory", agg_args.trajectory, "weight trajectory (CSV)");

  SelectionArgs yat_args;
  add_selection_options(app.add_subcommand("yatracos", "minimum-distance selection"), yat_args);

  AuditArgs audit_args;
  auto* audit = app.add_subcommand("lowerbound-audit", "audit the lower-bound construction");
  audit->add_option("--M", audit_args.M, "family size")->required();
  audit->add_option("--n", audit_args.n, "sample size")->required();
  audit->add_option("--A", audit_args.A, "density bound A > 1")->required();
  audit->add_option("--out", audit_args.out, "audit report (JSON)")->capture_default_str();
  audit->add_option("--set-out", audit_args.set_out, "separated set dump");

  ExperimentArgs exp_args;
  for (const char* name : {"oracle-exp", "rate-study", "yatracos-exp"}) {
    add_experiment_options(app.add_subcommand(name, "Monte Carlo experiment"), exp_args);
  }
  app.get_subcommand("rate-study")
      ->add_option("--fit-out", exp_args.fit_out, "slope fit (JSON), default <out>.fit.json");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) reversed.pop_back();  // program name
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "densagg: error: " << e.what() << "\n";
    return kValidationError;
  }

  try {
    if (agg->parsed()) return run_aggregate(agg_args);
    if (app.get_subcommand("yatracos")->parsed()) return run_yatracos(yat_args);
    if (audit->parsed()) return run_audit(audit_args);
    for (const char* name : {"oracle-exp", "rate-study", "yatracos-exp"}) {
      if (app.get_subcommand(name)->parsed()) return run_experiment(name, exp_args);
    }
    err << "densagg: error: no subcommand\n";
    return kValidationError;
  } catch (const std::invalid_argument& e) {  // ValidationError and its subclasses
    err << "densagg: error: " << e.what() << "\n";
    return kValidationError;
  } catch (const std::domain_error& e) {
    err << "densagg: error: " << e.what() << "\n";
    return kValidationError;
  } catch (const std::out_of_range& e) {
    err << "densagg: error: " << e.what() << "\n";
    return kValidationError;
  } catch (const std::exception& e) {
    err << "densagg: internal error: " << e.what() << "\n";
    return kInternalError;
  }
}

}  // namespace densagg::cli
