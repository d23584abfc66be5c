#include "densagg/distances.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace densagg {
namespace {

// Calls fn(width, f_value, g_value) for every cell of the common refinement.
template <typename Fn>
void for_each_common_cell(const PiecewiseFunction& f, const PiecewiseFunction& g, Fn&& fn) {
  auto fb = f.breakpoints();
  auto gb = g.breakpoints();
  auto fv = f.values();
  auto gv = g.values();
  std::size_t i = 0;
  std::size_t j = 0;
  double left = 0.0;
  while (i < fv.size() && j < gv.size()) {
    double right = std::min(fb[i + 1], gb[j + 1]);
    fn(right - left, fv[i], gv[j]);
    if (fb[i + 1] == right) ++i;
    if (gb[j + 1] == right) ++j;
    left = right;
  }
}

}  // namespace

double kl_divergence(const PiecewiseDensity& f, const PiecewiseDensity& g) {
  double total = 0.0;
  bool infinite = false;
  for_each_common_cell(f, g, [&](double width, double fx, double gx) {
    if (fx <= 0.0) return;
    if (gx <= 0.0) {
      infinite = true;
      return;
    }
    total += width * fx * std::log(fx / gx);
  });
  if (infinite) return std::numeric_limits<double>::infinity();
  // Rounding can leave a result of order -1e-17 for f == g.
  return std::max(total, 0.0);
}

double hellinger(const PiecewiseFunction& f, const PiecewiseFunction& g) {
  if (f.min_value() < 0.0 || g.min_value() < 0.0) {
    throw std::domain_error("hellinger distance requires nonnegative functions");
  }
  double total = 0.0;
  for_each_common_cell(f, g, [&](double width, double fx, double gx) {
    double d = std::sqrt(fx) - std::sqrt(gx);
    total += width * d * d;
  });
  return std::sqrt(total);
}

double l1_distance(const PiecewiseFunction& f, const PiecewiseFunction& g) {
  double total = 0.0;
  for_each_common_cell(f, g, [&](double width, double fx, double gx) {
    total += width * std::abs(fx - gx);
  });
  return total;
}

}  // namespace densagg
