#pragma once

#include <functional>
#include <vector>

namespace degenspec {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms_residual = 0.0;
  std::size_t points = 0;
};

/// Ordinary least squares y = a x + b. Needs at least two distinct x.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);
/// Least squares y = a x through the origin.
LineFit fit_through_origin(const std::vector<double>& x, const std::vector<double>& y);

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
};

/// Double-exponential quadrature; b may be +infinity. Tolerates endpoint singularities.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b, double tolerance = 1e-10,
                           unsigned max_depth = 30);

/// Geometric grid of n points from a to b inclusive.
std::vector<double> geometric_grid(double a, double b, int n);

}  // namespace degenspec
