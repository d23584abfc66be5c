#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace densagg {

/// A real step function on [0, 1].
///
/// values()[i] holds on [breakpoints()[i], breakpoints()[i + 1]); the last
/// cell is closed at 1 so every point of [0, 1] has a value. Breakpoints are
/// strictly increasing, start at exactly 0 and end at exactly 1. Instances are
/// immutable once constructed.
class PiecewiseFunction {
 public:
  PiecewiseFunction(std::vector<double> breakpoints, std::vector<double> values);

  static PiecewiseFunction constant(double value);

  std::span<const double> breakpoints() const noexcept { return breakpoints_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t cell_count() const noexcept { return values_.size(); }
  double cell_width(std::size_t cell) const { return breakpoints_[cell + 1] - breakpoints_[cell]; }

  /// Index of the cell containing x. Throws std::domain_error outside [0, 1].
  std::size_t cell_index(double x) const;
  double operator()(double x) const { return values_[cell_index(x)]; }

  /// Exact integral over [0, 1].
  double integral() const noexcept;
  double sup_abs() const noexcept;
  double min_value() const noexcept;

  /// Same function expressed on a finer grid. `grid` must contain every
  /// breakpoint of *this (as produced by merge_breakpoints).
  PiecewiseFunction refined_to(std::span<const double> grid) const;

  friend bool operator==(const PiecewiseFunction&, const PiecewiseFunction&) = default;

 private:
  std::vector<double> breakpoints_;
  std::vector<double> values_;
};

/// A nonnegative step function with unit mass (within kMassTolerance).
class PiecewiseDensity {
 public:
  static constexpr double kMassTolerance = 1e-12;

  PiecewiseDensity(std::vector<double> breakpoints, std::vector<double> values);
  explicit PiecewiseDensity(PiecewiseFunction f);

  /// Divides a nonnegative function with positive mass by its integral.
  static PiecewiseDensity renormalized(const PiecewiseFunction& f);
  static PiecewiseDensity uniform();

  const PiecewiseFunction& function() const noexcept { return f_; }
  operator const PiecewiseFunction&() const noexcept { return f_; }  // NOLINT

  std::span<const double> breakpoints() const noexcept { return f_.breakpoints(); }
  std::span<const double> values() const noexcept { return f_.values(); }
  std::size_t cell_count() const noexcept { return f_.cell_count(); }
  double cell_width(std::size_t cell) const { return f_.cell_width(cell); }
  std::size_t cell_index(double x) const { return f_.cell_index(x); }
  double operator()(double x) const { return f_(x); }
  double mass() const noexcept { return f_.integral(); }

  friend bool operator==(const PiecewiseDensity&, const PiecewiseDensity&) = default;

 private:
  PiecewiseFunction f_;
};

/// The A of the classes F(A), F_K(A), F_H(A), F_v(A). Always > 1.
class BoundParameter {
 public:
  explicit BoundParameter(double a);
  double value() const noexcept { return a_; }
  /// min(1, A - 1), the slack that appears in the parameter gate.
  double slack() const noexcept;

 private:
  double a_;
};

enum class DensityClass {
  F,   // densities bounded by A (the truth class)
  FK,  // densities bounded by A, aggregated under KL
  FH,  // nonnegative functions bounded by A, aggregated under Hellinger
  Fv,  // functions bounded by A in absolute value, aggregated under L1
};

bool validate_class(const PiecewiseFunction& f, DensityClass cls, BoundParameter bound);

/// Sorted union of the breakpoints of all inputs.
std::vector<double> merge_breakpoints(std::span<const PiecewiseFunction* const> functions);

/// Both inputs re-expressed on the sorted union of their breakpoints.
std::pair<PiecewiseFunction, PiecewiseFunction> common_refinement(const PiecewiseFunction& f,
                                                                  const PiecewiseFunction& g);

}  // namespace densagg
