#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "densagg/piecewise.hpp"

namespace densagg {

/// The fixed candidates f_1..f_M of model-selection aggregation, cached on the
/// union of their grids. Candidate indices are 0-based throughout.
class CandidateSet {
 public:
  explicit CandidateSet(std::vector<PiecewiseDensity> candidates);
  /// Additionally requires every candidate to lie in F_K(A).
  CandidateSet(std::vector<PiecewiseDensity> candidates, BoundParameter bound);

  std::size_t size() const noexcept { return candidates_.size(); }
  const PiecewiseDensity& operator[](std::size_t j) const { return candidates_[j]; }
  std::span<const PiecewiseDensity> candidates() const noexcept { return candidates_; }

  std::span<const double> grid() const noexcept { return grid_; }
  std::size_t grid_cells() const noexcept { return grid_.size() - 1; }
  double grid_width(std::size_t cell) const { return grid_[cell + 1] - grid_[cell]; }

  /// Value of candidate j on shared cell `cell`.
  double value(std::size_t j, std::size_t cell) const { return values_[cell * size() + j]; }
  /// Row of all candidate log-values on one cell; -infinity where a value is 0.
  std::span<const double> log_values(std::size_t cell) const {
    return std::span<const double>(log_values_).subspan(cell * size(), size());
  }

  /// Shared cell containing x. Throws std::domain_error outside [0, 1].
  std::size_t locate(double x) const;

 private:
  std::vector<PiecewiseDensity> candidates_;
  std::vector<double> grid_;
  std::vector<double> values_;      // cell-major, M per cell
  std::vector<double> log_values_;  // same layout
};

/// Rows k = 0..n of the progressive weights w^(k), plus their column mean.
class WeightTrajectory {
 public:
  WeightTrajectory(std::size_t candidates, std::vector<double> rows);

  std::size_t steps() const noexcept { return rows_.size() / m_; }  // n + 1
  std::size_t candidates() const noexcept { return m_; }
  std::span<const double> row(std::size_t k) const {
    return std::span<const double>(rows_).subspan(k * m_, m_);
  }
  std::span<const double> averaged() const noexcept { return averaged_; }

 private:
  std::size_t m_;
  std::vector<double> rows_;
  std::vector<double> averaged_;
};

struct AggregateDensity {
  PiecewiseDensity density;     // sum_j averaged_j f_j on the shared grid
  std::vector<double> weights;  // the averaged weights
};

/// -(1/n) sum_i log f(X_i); +infinity if f vanishes at some X_i.
/// Throws std::domain_error on an empty sample or a point outside [0, 1].
double empirical_kl(const PiecewiseDensity& f, std::span<const double> sample);

/// Exponential weights w_j^(k) proportional to prod_{i<=k} f_j(X_i), computed
/// from compensated running log-likelihoods with max-subtraction. A candidate
/// that vanishes at an observation keeps weight exactly 0 afterwards.
/// Requires M >= 2; throws DegenerateWeightsError if every candidate vanishes.
WeightTrajectory progressive_weights(const CandidateSet& c, std::span<const double> sample);

/// Column mean of progressive_weights without materialising the rows.
std::vector<double> averaged_weights(const CandidateSet& c, std::span<const double> sample);

/// The progressive-mixture aggregate sum_j averaged_j f_j.
AggregateDensity aggregate(const CandidateSet& c, std::span<const double> sample);

/// A union of shared-grid cells, as sorted cell indices.
using CellSet = std::vector<std::size_t>;

/// {x : f_i(x) > f_j(x)} over ordered pairs (i, j), deduplicated, in order of
/// first appearance with i major. The empty set (from i == j) is always first.
std::vector<CellSet> yatracos_class(const CandidateSet& c);

struct YatracosSelection {
  std::size_t index;            // 0-based winner
  double distance;              // its sup over the class
  std::vector<double> scores;   // sup over the class for every candidate
};

/// Minimum-distance selection over the Yatracos class. Ties go to the
/// smallest index. Throws std::domain_error on an empty sample.
YatracosSelection yatracos_select(const CandidateSet& c, std::span<const double> sample);

}  // namespace densagg
