#pragma once

#include "subdiff/grid.hpp"

#include <span>
#include <vector>

namespace subdiff {

/// Riemann-Liouville fractional integral of order sigma > 0 of a grid
/// function over [0, t], discretised by product integration on the
/// piecewise-linear interpolant (exact for piecewise-linear h, O(dt^2) for
/// smooth h). Returns the integral at every grid node.
GridFunction rl_integral(const GridFunction& h, double sigma);
std::vector<double> rl_integral(std::span<const double> h, double dt, double sigma);

/// Caputo derivative of order alpha in (0,1) by the L1 scheme; O(dt^(2-alpha))
/// for smooth h. Value at the first node is zero by convention.
GridFunction caputo_l1(const GridFunction& h, double alpha);
std::vector<double> caputo_l1(std::span<const double> h, double dt, double alpha);

} // namespace subdiff
