#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "densagg/piecewise.hpp"
#include "oracles.hpp"

namespace densagg::oracle {

/// Rows k = 0..n of the exponential weights in long double: plain running
/// log-likelihood sums, normalised against their maximum at every k.
inline std::vector<std::vector<double>> weight_rows(std::span<const PiecewiseDensity> candidates,
                                                    std::span<const double> sample) {
  const std::size_t m = candidates.size();
  constexpr long double kNegInf = -std::numeric_limits<long double>::infinity();
  std::vector<long double> loglik(m, 0.0L);
  std::vector<std::vector<double>> rows;
  for (std::size_t k = 0; k <= sample.size(); ++k) {
    if (k > 0) {
      for (std::size_t j = 0; j < m; ++j) {
        double v = evaluate(candidates[j], sample[k - 1]);
        loglik[j] += v > 0.0 ? std::log(static_cast<long double>(v)) : kNegInf;
      }
    }
    long double peak = kNegInf;
    for (long double l : loglik) peak = std::max(peak, l);
    long double total = 0.0L;
    std::vector<long double> w(m, 0.0L);
    for (std::size_t j = 0; j < m; ++j) {
      if (loglik[j] != kNegInf) w[j] = std::exp(loglik[j] - peak);
      total += w[j];
    }
    std::vector<double> row(m);
    for (std::size_t j = 0; j < m; ++j) row[j] = static_cast<double>(w[j] / total);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace densagg::oracle
