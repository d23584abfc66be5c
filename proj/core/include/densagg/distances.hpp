#pragma once

#include "densagg/piecewise.hpp"

namespace densagg {

// All three losses are evaluated exactly on the common refinement of the two
// grids; no quadrature is involved.

/// K(f|g) = integral of f log(f/g). Returns +infinity when f > 0 on a cell
/// where g = 0. Cells with f = 0 contribute nothing.
double kl_divergence(const PiecewiseDensity& f, const PiecewiseDensity& g);

/// ||sqrt(f) - sqrt(g)||_2. Throws std::domain_error on a negative value.
double hellinger(const PiecewiseFunction& f, const PiecewiseFunction& g);

/// integral of |f - g|.
double l1_distance(const PiecewiseFunction& f, const PiecewiseFunction& g);

}  // namespace densagg
