#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include <filesystem>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "densagg/formats.hpp"
#include "densagg/lowerbound.hpp"
#include "densagg/sampling.hpp"

namespace densagg {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    std::random_device rd;
    dir_ = fs::temp_directory_path() / ("densagg_cli_" + std::to_string(rd()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write(const std::string& name, const std::string& text) const {
    write_text_file(path(name), text);
    return path(name);
  }

  int run(std::vector<std::string> args) {
    args.insert(args.begin(), "densagg");
    std::ostringstream err;
    int code = cli::dispatch(args, err);
    last_err_ = err.str();
    return code;
  }

  fs::path dir_;
  std::string last_err_;
};

const char* kCandidates = R"({"candidates": [
  {"breakpoints": [0, 0.5, 1], "values": [1.5, 0.5]},
  {"breakpoints": [0, 0.5, 1], "values": [0.5, 1.5]}]})";

TEST_F(CliTest, AggregateWritesADensity) {
  write("c.json", kCandidates);
  write("s.txt", "0.25\n0.75\n0.25\n");
  ASSERT_EQ(run({"aggregate", "--candidates", path("c.json"), "--sample", path("s.txt"), "--out",
                 path("agg.json"), "--trajectory", path("traj.csv")}),
            cli::kSuccess)
      << last_err_;
  auto agg = parse_density_json(read_text_file(path("agg.json")));
  EXPECT_NEAR(agg.mass(), 1.0, 1e-12);
  std::string traj = read_text_file(path("traj.csv"));
  EXPECT_EQ(traj.substr(0, traj.find('\n')), "k,w_1,w_2");

  std::string first = read_text_file(path("agg.json"));
  ASSERT_EQ(run({"aggregate", "--candidates", path("c.json"), "--sample", path("s.txt"), "--out",
                 path("agg.json")}),
            cli::kSuccess);
  EXPECT_EQ(read_text_file(path("agg.json")), first);
}

TEST_F(CliTest, YatracosWritesTheWinner) {
  write("c.json", kCandidates);
  write("s.txt", sample_to_text(sample(PiecewiseDensity({0.0, 0.5, 1.0}, {0.5, 1.5}), 2000, 1)));
  ASSERT_EQ(run({"yatracos", "--candidates", path("c.json"), "--sample", path("s.txt"), "--out",
                 path("y.json")}),
            cli::kSuccess)
      << last_err_;
  EXPECT_EQ(nlohmann::json::parse(read_text_file(path("y.json"))).at("index"), 1);
}

TEST_F(CliTest, LowerBoundAuditPasses) {
  ASSERT_EQ(run({"lowerbound-audit", "--M", "16", "--n", "1000", "--A", "2", "--out",
                 path("audit.json"), "--set-out", path("set.txt")}),
            cli::kSuccess)
      << last_err_;
  auto j = nlohmann::json::parse(read_text_file(path("audit.json")));
  EXPECT_EQ(j.at("pass"), true);
  for (const auto& c : j.at("checks")) EXPECT_EQ(c.at("pass"), true);
  EXPECT_EQ(parse_separated_set_text(read_text_file(path("set.txt"))).size(), 16u);
}

TEST_F(CliTest, ValidationFailuresExitOne) {
  write("zero.json", R"({"seed": 1, "M": 10, "A": 2, "n_values": [50], "replications": 0})");
  EXPECT_EQ(run({"oracle-exp", "--config", path("zero.json"), "--out", path("o.csv")}),
            cli::kValidationError);
  EXPECT_NE(last_err_.find("replications"), std::string::npos);
  EXPECT_EQ(last_err_.find('\n'), last_err_.size() - 1);
  EXPECT_FALSE(fs::exists(path("o.csv")));

  EXPECT_EQ(run({"frobnicate"}), cli::kValidationError);
  EXPECT_EQ(run({}), cli::kValidationError);
  EXPECT_EQ(run({"lowerbound-audit", "--M", "2", "--n", "10", "--A", "1.01", "--out",
                 path("a.json")}),
            cli::kValidationError);
  EXPECT_NE(last_err_.find("log"), std::string::npos);

  write("bad.json", "{not json");
  write("s.txt", "0.5\n");
  EXPECT_EQ(run({"aggregate", "--candidates", path("bad.json"), "--sample", path("s.txt"), "--out",
                 path("agg.json")}),
            cli::kValidationError);
  write("c.json", kCandidates);
  EXPECT_EQ(run({"aggregate", "--candidates", path("c.json"), "--sample", path("s.txt"), "--out",
                 path("agg.json"), "--A", "1.2"}),
            cli::kValidationError);
  write("far.txt", "1.5\n");
  EXPECT_EQ(run({"aggregate", "--candidates", path("c.json"), "--sample", path("far.txt"),
                 "--out", path("agg.json")}),
            cli::kValidationError);
  EXPECT_EQ(run({"aggregate", "--candidates", path("missing.json"), "--sample", path("s.txt"),
                 "--out", path("agg.json")}),
            cli::kValidationError);
}

TEST_F(CliTest, ExperimentOutputsAreReproducible) {
  write("cfg.json", R"({"seed": 3, "M": 10, "A": 2, "n_values": [50, 200], "replications": 40})");
  ASSERT_EQ(run({"oracle-exp", "--config", path("cfg.json"), "--out", path("a.csv")}),
            cli::kSuccess)
      << last_err_;
  ASSERT_EQ(run({"oracle-exp", "--config", path("cfg.json"), "--out", path("b.csv"), "--threads",
                 "3"}),
            cli::kSuccess);
  EXPECT_EQ(read_text_file(path("a.csv")), read_text_file(path("b.csv")));
  ASSERT_EQ(run({"oracle-exp", "--config", path("cfg.json"), "--out", path("c.csv"), "--seed",
                 "4"}),
            cli::kSuccess);
  EXPECT_NE(read_text_file(path("a.csv")), read_text_file(path("c.csv")));

  ASSERT_EQ(run({"yatracos-exp", "--config", path("cfg.json"), "--out", path("y.csv"), "--M",
                 "16", "--n", "500"}),
            cli::kSuccess)
      << last_err_;
  std::string y = read_text_file(path("y.csv"));
  EXPECT_NE(y.find("yatracos,16,500,40,"), std::string::npos);
}

TEST_F(CliTest, FailingRowExitsTwo) {
  // The truth sits halfway between the two members of a fixed M = 2 family,
  // so the mixture beats both candidates and the excess is negative.
  auto fam = choose_parameters(2, 1000, BoundParameter(2.0));
  auto set = build_separated_set(fam.code_length(), 2);
  auto f0 = perturbed_density(fam, set[0]);
  auto f1 = perturbed_density(fam, set[1]);
  std::vector<double> mid;
  for (std::size_t i = 0; i < f0.cell_count(); ++i) mid.push_back(0.5 * (f0.values()[i] + f1.values()[i]));
  auto truth = nlohmann::json::parse(
      function_to_json(PiecewiseFunction(std::vector<double>(f0.breakpoints().begin(),
                                                             f0.breakpoints().end()),
                                         mid)));
  truth["type"] = "density";
  nlohmann::json cfg{{"seed", 5},
                     {"M_values", {2, 4}},
                     {"n_values", {100, 400, 1600}},
                     {"replications", 20},
                     {"A", 2.0},
                     {"truth_spec", truth},
                     {"candidate_spec", {{"type", "perturbation"}, {"n", 1000}}}};
  write("rate.json", cfg.dump());
  EXPECT_EQ(run({"rate-study", "--config", path("rate.json"), "--out", path("r.csv")}),
            cli::kCheckFailed)
      << last_err_;
  std::string csv = read_text_file(path("r.csv"));
  EXPECT_NE(csv.find("rate,2,100,20,"), std::string::npos);
  EXPECT_NE(csv.find(",false\n"), std::string::npos);
  EXPECT_TRUE(fs::exists(path("r.csv.fit.json")));
}

TEST_F(CliTest, PassingRateStudyExitsZero) {
  write("rate.json",
        R"({"seed": 2024, "M_values": [4, 16], "n_values": [100, 400, 1600], "replications": 20, "A": 2})");
  ASSERT_EQ(run({"rate-study", "--config", path("rate.json"), "--out", path("r.csv"), "--fit-out",
                 path("fit.json")}),
            cli::kSuccess)
      << last_err_;
  EXPECT_EQ(read_text_file(path("r.csv")).find(",false"), std::string::npos);
  EXPECT_EQ(nlohmann::json::parse(read_text_file(path("fit.json"))).at("pass"), true);
}

}  // namespace
}  // namespace densagg
