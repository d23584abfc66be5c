#include "densagg/aggregator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>

#include "densagg/errors.hpp"

namespace densagg {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::vector<PiecewiseDensity> require_nonempty(std::vector<PiecewiseDensity> candidates) {
  if (candidates.empty()) throw ValidationError("candidate set is empty");
  return candidates;
}

// Neumaier-compensated running sum; -infinity is absorbing.
struct LogLikelihood {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    if (sum == kNegInf) return;
    if (x == kNegInf) {
      sum = kNegInf;
      carry = 0.0;
      return;
    }
    double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      carry += (sum - t) + x;
    } else {
      carry += (x - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum == kNegInf ? kNegInf : sum + carry; }
};

void check_sample_point(double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::domain_error("sample point " + std::to_string(x) + " lies outside [0, 1]");
  }
}

// Calls on_row(k, row) for k = 0..n with the normalized weights w^(k).
template <typename OnRow>
void run_weights(const CandidateSet& c, std::span<const double> sample, OnRow&& on_row) {
  const std::size_t m = c.size();
  if (m < 2) throw ValidationError("aggregation needs at least 2 candidates");
  std::vector<double> row(m, 1.0 / static_cast<double>(m));
  on_row(std::size_t{0}, std::span<const double>(row));

  std::vector<LogLikelihood> loglik(m);
  for (std::size_t k = 1; k <= sample.size(); ++k) {
    check_sample_point(sample[k - 1]);
    auto logs = c.log_values(c.locate(sample[k - 1]));
    double peak = kNegInf;
    for (std::size_t j = 0; j < m; ++j) {
      loglik[j].add(logs[j]);
      peak = std::max(peak, loglik[j].value());
    }
    if (peak == kNegInf) {
      throw DegenerateWeightsError("every candidate has zero likelihood after observation " +
                                   std::to_string(k) + " (x = " + std::to_string(sample[k - 1]) +
                                   ")");
    }
    double norm = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      double l = loglik[j].value();
      row[j] = l == kNegInf ? 0.0 : std::exp(l - peak);
      norm += row[j];
    }
    for (double& w : row) w /= norm;
    on_row(k, std::span<const double>(row));
  }
}

}  // namespace

CandidateSet::CandidateSet(std::vector<PiecewiseDensity> candidates)
    : candidates_(require_nonempty(std::move(candidates))) {
  std::vector<const PiecewiseFunction*> fs;
  fs.reserve(candidates_.size());
  for (const auto& f : candidates_) fs.push_back(&f.function());
  grid_ = merge_breakpoints(fs);

  const std::size_t m = candidates_.size();
  values_.assign(grid_cells() * m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    PiecewiseFunction refined = candidates_[j].function().refined_to(grid_);
    for (std::size_t t = 0; t < grid_cells(); ++t) values_[t * m + j] = refined.values()[t];
  }
  log_values_.resize(values_.size());
  std::transform(values_.begin(), values_.end(), log_values_.begin(),
                 [](double v) { return v > 0.0 ? std::log(v) : kNegInf; });
}

CandidateSet::CandidateSet(std::vector<PiecewiseDensity> candidates, BoundParameter bound)
    : CandidateSet(std::move(candidates)) {
  for (std::size_t j = 0; j < size(); ++j) {
    if (!validate_class(candidates_[j], DensityClass::FK, bound)) {
      throw ValidationError("candidate " + std::to_string(j) + " is not a density bounded by A = " +
                            std::to_string(bound.value()));
    }
  }
}

std::size_t CandidateSet::locate(double x) const {
  check_sample_point(x);
  auto it = std::upper_bound(grid_.begin(), grid_.end(), x);
  return std::min(static_cast<std::size_t>(it - grid_.begin()), grid_cells()) - 1;
}

WeightTrajectory::WeightTrajectory(std::size_t candidates, std::vector<double> rows)
    : m_(candidates), rows_(std::move(rows)) {
  if (m_ == 0 || rows_.empty() || rows_.size() % m_ != 0) {
    throw ValidationError("weight trajectory must hold a whole number of nonempty rows");
  }
  const std::size_t steps = rows_.size() / m_;
  averaged_.assign(m_, 0.0);
  for (std::size_t k = 0; k < steps; ++k) {
    for (std::size_t j = 0; j < m_; ++j) averaged_[j] += rows_[k * m_ + j];
  }
  for (double& w : averaged_) w /= static_cast<double>(steps);
}

double empirical_kl(const PiecewiseDensity& f, std::span<const double> sample) {
  if (sample.empty()) throw std::domain_error("empirical Kullback loss of an empty sample");
  double total = 0.0;
  for (double x : sample) {
    check_sample_point(x);
    double v = f(x);
    if (v <= 0.0) return std::numeric_limits<double>::infinity();
    total += std::log(v);
  }
  return -total / static_cast<double>(sample.size());
}

WeightTrajectory progressive_weights(const CandidateSet& c, std::span<const double> sample) {
  std::vector<double> rows;
  rows.reserve((sample.size() + 1) * c.size());
  run_weights(c, sample, [&](std::size_t, std::span<const double> row) {
    rows.insert(rows.end(), row.begin(), row.end());
  });
  return WeightTrajectory(c.size(), std::move(rows));
}

std::vector<double> averaged_weights(const CandidateSet& c, std::span<const double> sample) {
  std::vector<double> sum(c.size(), 0.0);
  run_weights(c, sample, [&](std::size_t, std::span<const double> row) {
    for (std::size_t j = 0; j < row.size(); ++j) sum[j] += row[j];
  });
  for (double& w : sum) w /= static_cast<double>(sample.size() + 1);
  return sum;
}

AggregateDensity aggregate(const CandidateSet& c, std::span<const double> sample) {
  std::vector<double> weights = averaged_weights(c, sample);
  std::vector<double> values(c.grid_cells(), 0.0);
  for (std::size_t t = 0; t < c.grid_cells(); ++t) {
    double v = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j) v += weights[j] * c.value(j, t);
    values[t] = v;
  }
  std::vector<double> grid(c.grid().begin(), c.grid().end());
  return {PiecewiseDensity(std::move(grid), std::move(values)), std::move(weights)};
}

std::vector<CellSet> yatracos_class(const CandidateSet& c) {
  std::vector<CellSet> sets;
  std::set<CellSet> seen;
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (std::size_t j = 0; j < c.size(); ++j) {
      CellSet cells;
      for (std::size_t t = 0; t < c.grid_cells(); ++t) {
        if (c.value(i, t) > c.value(j, t)) cells.push_back(t);
      }
      if (seen.insert(cells).second) sets.push_back(std::move(cells));
    }
  }
  return sets;
}

YatracosSelection yatracos_select(const CandidateSet& c, std::span<const double> sample) {
  if (sample.empty()) throw std::domain_error("Yatracos selection needs a nonempty sample");
  std::vector<double> frequency(c.grid_cells(), 0.0);
  for (double x : sample) frequency[c.locate(x)] += 1.0;
  for (double& p : frequency) p /= static_cast<double>(sample.size());

  const std::vector<CellSet> sets = yatracos_class(c);
  YatracosSelection best{0, std::numeric_limits<double>::infinity(), {}};
  best.scores.reserve(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    double sup = 0.0;
    for (const CellSet& set : sets) {
      double model = 0.0;
      double empirical = 0.0;
      for (std::size_t t : set) {
        model += c.value(i, t) * c.grid_width(t);
        empirical += frequency[t];
      }
      sup = std::max(sup, std::abs(model - empirical));
    }
    best.scores.push_back(sup);
    if (sup < best.distance) {
      best.distance = sup;
      best.index = i;
    }
  }
  return best;
}

}  // namespace densagg
