#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <vector>

#include "densagg/piecewise.hpp"

namespace densagg {

/// Inverse-CDF sampler for a step density: a cell is chosen by cumulative
/// mass, then the point is uniform within the cell. Draws depend only on the
/// seed, never on global state, so one sampler can serve many threads.
class DensitySampler {
 public:
  explicit DensitySampler(const PiecewiseDensity& density);

  std::vector<double> draw(std::size_t n, std::uint64_t seed) const;

 private:
  std::vector<double> breakpoints_;
  std::vector<double> cumulative_;  // cumulative_[i] = mass of cells 0..i
  std::size_t last_positive_ = 0;
};

std::vector<double> sample(const PiecewiseDensity& f, std::size_t n, std::uint64_t seed);

/// Deterministic stream seed for a position in an experiment (row, truth,
/// replication, ...). Independent of evaluation order.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path);

}  // namespace densagg
