#include "densagg/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "densagg/errors.hpp"

namespace densagg {

PiecewiseFunction::PiecewiseFunction(std::vector<double> breakpoints, std::vector<double> values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
  if (breakpoints_.size() < 2) {
    throw ValidationError("piecewise function needs at least two breakpoints");
  }
  if (values_.size() + 1 != breakpoints_.size()) {
    throw ValidationError("piecewise function has " + std::to_string(breakpoints_.size()) +
                          " breakpoints but " + std::to_string(values_.size()) +
                          " values (expected breakpoints - 1)");
  }
  if (breakpoints_.front() != 0.0 || breakpoints_.back() != 1.0) {
    throw ValidationError("breakpoints must start at 0 and end at 1");
  }
  for (std::size_t i = 1; i < breakpoints_.size(); ++i) {
    if (!(breakpoints_[i] > breakpoints_[i - 1])) {
      throw ValidationError("breakpoints must be strictly increasing (index " + std::to_string(i) +
                            ")");
    }
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw ValidationError("piecewise function values must be finite");
  }
}

PiecewiseFunction PiecewiseFunction::constant(double value) { return {{0.0, 1.0}, {value}}; }

std::size_t PiecewiseFunction::cell_index(double x) const {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::domain_error("point " + std::to_string(x) + " lies outside [0, 1]");
  }
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
  auto idx = static_cast<std::size_t>(it - breakpoints_.begin());
  // x == 1 belongs to the last cell.
  return std::min(idx, values_.size()) - 1;
}

double PiecewiseFunction::integral() const noexcept {
  double total = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) total += cell_width(i) * values_[i];
  return total;
}

double PiecewiseFunction::sup_abs() const noexcept {
  double s = 0.0;
  for (double v : values_) s = std::max(s, std::abs(v));
  return s;
}

double PiecewiseFunction::min_value() const noexcept {
  return *std::min_element(values_.begin(), values_.end());
}

PiecewiseFunction PiecewiseFunction::refined_to(std::span<const double> grid) const {
  std::vector<double> out;
  out.reserve(grid.size() - 1);
  std::size_t cell = 0;
  for (std::size_t t = 0; t + 1 < grid.size(); ++t) {
    while (cell + 1 < values_.size() && breakpoints_[cell + 1] <= grid[t]) ++cell;
    out.push_back(values_[cell]);
  }
  return {std::vector<double>(grid.begin(), grid.end()), std::move(out)};
}

namespace {

PiecewiseFunction checked_density(PiecewiseFunction f) {
  if (f.min_value() < 0.0) throw ValidationError("density has a negative cell value");
  double mass = f.integral();
  if (std::abs(mass - 1.0) > PiecewiseDensity::kMassTolerance) {
    throw ValidationError("density mass " + std::to_string(mass) +
                          " differs from 1 by more than 1e-12");
  }
  return f;
}

}  // namespace

PiecewiseDensity::PiecewiseDensity(std::vector<double> breakpoints, std::vector<double> values)
    : f_(checked_density(PiecewiseFunction(std::move(breakpoints), std::move(values)))) {}

PiecewiseDensity::PiecewiseDensity(PiecewiseFunction f) : f_(checked_density(std::move(f))) {}

PiecewiseDensity PiecewiseDensity::renormalized(const PiecewiseFunction& f) {
  if (f.min_value() < 0.0) throw ValidationError("cannot renormalize a function with negative values");
  double mass = f.integral();
  if (!(mass > 0.0)) throw ValidationError("cannot renormalize a function with zero mass");
  std::vector<double> values(f.values().begin(), f.values().end());
  for (double& v : values) v /= mass;
  return PiecewiseDensity(std::vector<double>(f.breakpoints().begin(), f.breakpoints().end()),
                          std::move(values));
}

PiecewiseDensity PiecewiseDensity::uniform() { return PiecewiseDensity({0.0, 1.0}, {1.0}); }

BoundParameter::BoundParameter(double a) : a_(a) {
  if (!(a > 1.0) || !std::isfinite(a)) {
    throw ParameterError("bound parameter A must be a finite number > 1, got " + std::to_string(a));
  }
}

double BoundParameter::slack() const noexcept { return std::min(1.0, a_ - 1.0); }

bool validate_class(const PiecewiseFunction& f, DensityClass cls, BoundParameter bound) {
  if (f.sup_abs() > bound.value()) return false;
  switch (cls) {
    case DensityClass::Fv:
      return true;
    case DensityClass::FH:
      return f.min_value() >= 0.0;
    case DensityClass::F:
    case DensityClass::FK:
      return f.min_value() >= 0.0 &&
             std::abs(f.integral() - 1.0) <= PiecewiseDensity::kMassTolerance;
  }
  return false;
}

std::vector<double> merge_breakpoints(std::span<const PiecewiseFunction* const> functions) {
  std::vector<double> grid;
  for (const PiecewiseFunction* f : functions) {
    grid.insert(grid.end(), f->breakpoints().begin(), f->breakpoints().end());
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

std::pair<PiecewiseFunction, PiecewiseFunction> common_refinement(const PiecewiseFunction& f,
                                                                  const PiecewiseFunction& g) {
  const PiecewiseFunction* both[] = {&f, &g};
  std::vector<double> grid = merge_breakpoints(both);
  return {f.refined_to(grid), g.refined_to(grid)};
}

}  // namespace densagg
