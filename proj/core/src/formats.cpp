#include "densagg/formats.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include <nlohmann/json.hpp>

#include "densagg/errors.hpp"

namespace densagg {

using nlohmann::json;

namespace {

json parse_json(std::string_view text, const char* what) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed ") + what + " JSON: " + e.what());
  }
}

std::vector<double> real_array(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ValidationError(std::string("density JSON lacks \"") + key + "\"");
  }
  const json& arr = j.at(key);
  if (!arr.is_array()) throw ValidationError(std::string("\"") + key + "\" must be an array");
  std::vector<double> out;
  out.reserve(arr.size());
  for (const json& v : arr) {
    if (!v.is_number()) throw ValidationError(std::string("\"") + key + "\" holds a non-number");
    out.push_back(v.get<double>());
  }
  return out;
}

PiecewiseFunction function_from(const json& j) {
  return {real_array(j, "breakpoints"), real_array(j, "values")};
}

json function_json(const PiecewiseFunction& f) {
  return json{{"breakpoints", std::vector<double>(f.breakpoints().begin(), f.breakpoints().end())},
              {"values", std::vector<double>(f.values().begin(), f.values().end())}};
}

std::string_view trim(std::string_view s) {
  const char* ws = " \t\r";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

template <typename T>
T config_field(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field \"") + key + "\": " + e.what());
  }
}

std::size_t config_count(const json& j, const char* key) {
  const json& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ConfigError(std::string("config field \"") + key + "\" must be a nonnegative integer");
  }
  return v.get<std::size_t>();
}

std::vector<std::size_t> config_counts(const json& j, const char* key) {
  const json& v = j.at(key);
  if (!v.is_array()) throw ConfigError(std::string("config field \"") + key + "\" must be an array");
  std::vector<std::size_t> out;
  for (const json& x : v) {
    if (!x.is_number_integer() || x.get<long long>() < 0) {
      throw ConfigError(std::string("config field \"") + key +
                        "\" must hold nonnegative integers");
    }
    out.push_back(x.get<std::size_t>());
  }
  return out;
}

}  // namespace

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), end);
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw ValidationError("failed writing " + path.string());
}

std::string function_to_json(const PiecewiseFunction& f) { return function_json(f).dump() + "\n"; }

PiecewiseFunction parse_function_json(std::string_view text) {
  return function_from(parse_json(text, "density"));
}

PiecewiseDensity parse_density_json(std::string_view text) {
  return PiecewiseDensity(parse_function_json(text));
}

std::vector<PiecewiseDensity> parse_candidates_json(std::string_view text) {
  json j = parse_json(text, "candidates");
  const json& arr = j.is_object() && j.contains("candidates") ? j.at("candidates") : j;
  if (!arr.is_array()) throw ValidationError("candidates JSON must be an array of densities");
  std::vector<PiecewiseDensity> out;
  out.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    try {
      out.emplace_back(function_from(arr[i]));
    } catch (const ValidationError& e) {
      throw ValidationError("candidate " + std::to_string(i) + ": " + e.what());
    }
  }
  return out;
}

std::string candidates_to_json(std::span<const PiecewiseDensity> candidates) {
  json arr = json::array();
  for (const auto& c : candidates) arr.push_back(function_json(c));
  return json{{"candidates", arr}}.dump() + "\n";
}

std::vector<double> parse_sample_text(std::string_view text) {
  std::vector<double> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    auto nl = text.find('\n');
    std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty()) continue;
    double x = 0.0;
    auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), x);
    if (ec != std::errc{} || ptr != line.data() + line.size() || !std::isfinite(x)) {
      throw ValidationError("sample line " + std::to_string(line_no) + " is not a real number");
    }
    out.push_back(x);
  }
  return out;
}

std::string sample_to_text(std::span<const double> sample) {
  std::string out;
  for (double x : sample) {
    out += format_real(x);
    out += '\n';
  }
  return out;
}

std::string trajectory_to_csv(const WeightTrajectory& trajectory) {
  std::string out = "k";
  for (std::size_t j = 1; j <= trajectory.candidates(); ++j) out += ",w_" + std::to_string(j);
  out += '\n';
  for (std::size_t k = 0; k < trajectory.steps(); ++k) {
    out += std::to_string(k);
    for (double w : trajectory.row(k)) {
      out += ',';
      out += format_real(w);
    }
    out += '\n';
  }
  return out;
}

std::string separated_set_to_text(const SeparatedSet& set) {
  std::string out;
  for (const BinaryWord& w : set.words()) {
    out += w.to_string();
    out += '\n';
  }
  return out;
}

SeparatedSet parse_separated_set_text(std::string_view text) {
  std::vector<BinaryWord> words;
  while (!text.empty()) {
    auto nl = text.find('\n');
    std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (!line.empty()) words.push_back(BinaryWord::from_string(line));
  }
  if (words.empty()) throw ValidationError("separated set file holds no words");
  std::size_t length = words.front().size();
  return SeparatedSet(BinaryCode(length, std::move(words)));
}

std::string audit_report_to_json(const AuditReport& report) {
  json checks = json::array();
  for (const AuditCheck& c : report.checks) {
    checks.push_back({{"name", c.name}, {"bound", c.bound}, {"achieved", c.achieved}, {"pass", c.pass}});
  }
  json j{{"M", report.target_size},  {"n", report.sample_size}, {"A", report.bound},
         {"D", report.code_length},  {"L", report.amplitude},   {"pass", report.passed()},
         {"checks", std::move(checks)}};
  return j.dump(2) + "\n";
}

std::string risk_report_to_csv(const RiskReport& report) {
  std::string out = "experiment,M,n,replications,mean_risk,se,oracle_risk,excess,bound,pass\n";
  for (const RiskRow& r : report.rows) {
    out += r.experiment + ',' + std::to_string(r.M) + ',' + std::to_string(r.n) + ',' +
           std::to_string(r.replications) + ',' + format_real(r.mean_risk) + ',' +
           format_real(r.se) + ',' + format_real(r.oracle_risk) + ',' + format_real(r.excess) +
           ',' + format_real(r.bound) + ',' + (r.pass ? "true" : "false") + '\n';
  }
  return out;
}

std::string rate_fit_to_json(const RateFit& fit) {
  auto real = [](double x) { return std::isfinite(x) ? json(x) : json(nullptr); };
  json j{{"slope", real(fit.slope)},
         {"intercept", real(fit.intercept)},
         {"target_slope", fit.target_slope},
         {"tolerance", fit.tolerance},
         {"used_rows", fit.used_rows},
         {"dropped_rows", fit.dropped_rows},
         {"pass", fit.pass}};
  return j.dump(2) + "\n";
}

std::string yatracos_selection_to_json(const YatracosSelection& selection) {
  json j{{"index", selection.index}, {"distance", selection.distance}, {"scores", selection.scores}};
  return j.dump(2) + "\n";
}

ExperimentConfig parse_experiment_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed config JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config JSON must be an object");
  for (const char* key : {"seed", "n_values", "replications"}) {
    if (!j.contains(key)) throw ConfigError(std::string("config lacks required field \"") + key + "\"");
  }

  ExperimentConfig c;
  if (!j.at("seed").is_number_unsigned()) throw ConfigError("config field \"seed\" must be a nonnegative integer");
  c.seed = j.at("seed").get<std::uint64_t>();
  c.n_values = config_counts(j, "n_values");
  c.replications = config_count(j, "replications");
  if (j.contains("M")) c.M = config_count(j, "M");
  if (j.contains("M_values")) c.M_values = config_counts(j, "M_values");
  if (j.contains("A")) c.A = config_field<double>(j, "A");
  if (j.contains("q")) c.q = config_field<double>(j, "q");
  if (j.contains("loss")) {
    auto name = config_field<std::string>(j, "loss");
    if (name == "KL") {
      c.loss = Loss::KL;
    } else if (name == "H") {
      c.loss = Loss::Hellinger;
    } else if (name == "L1") {
      c.loss = Loss::L1;
    } else {
      throw ConfigError("config field \"loss\" must be KL, H or L1");
    }
  }

  if (j.contains("truth_spec")) {
    const json& t = j.at("truth_spec");
    auto type = config_field<std::string>(t, "type");
    TruthSpec spec;
    if (type == "candidate") {
      spec.kind = TruthSpec::Kind::Candidate;
      spec.index = t.contains("index") ? config_count(t, "index") : 0;
    } else if (type == "density") {
      spec.kind = TruthSpec::Kind::Density;
      try {
        spec.density = PiecewiseDensity(function_from(t));
      } catch (const ValidationError& e) {
        throw ConfigError(std::string("truth_spec density: ") + e.what());
      }
    } else if (type == "worst_case") {
      spec.kind = TruthSpec::Kind::WorstCase;
    } else {
      throw ConfigError("truth_spec type must be candidate, density or worst_case");
    }
    c.truth = std::move(spec);
  }

  if (j.contains("candidate_spec")) {
    const json& s = j.at("candidate_spec");
    auto type = config_field<std::string>(s, "type");
    if (type == "perturbation") {
      c.candidates.kind = CandidateSpec::Kind::Perturbation;
      if (s.contains("n")) c.candidates.family_n = config_count(s, "n");
    } else if (type == "explicit") {
      c.candidates.kind = CandidateSpec::Kind::Explicit;
      if (!s.contains("densities")) throw ConfigError("explicit candidate_spec lacks \"densities\"");
      try {
        c.candidates.densities = parse_candidates_json(s.at("densities").dump());
      } catch (const ValidationError& e) {
        throw ConfigError(std::string("candidate_spec: ") + e.what());
      }
    } else {
      throw ConfigError("candidate_spec type must be perturbation or explicit");
    }
  }

  c.validate();
  return c;
}

}  // namespace densagg
