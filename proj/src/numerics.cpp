#include "degenspec/numerics.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace degenspec {

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit: need at least two points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("fit: abscissae are all equal");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.points = x.size();
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.slope * x[i] + f.intercept);
    ss += r * r;
  }
  f.rms_residual = std::sqrt(ss / n);
  return f;
}

LineFit fit_through_origin(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.empty()) throw std::invalid_argument("fit: need at least one point");
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("fit: abscissae are all zero");
  LineFit f;
  f.slope = sxy / sxx;
  f.points = x.size();
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - f.slope * x[i];
    ss += r * r;
  }
  f.rms_residual = std::sqrt(ss / static_cast<double>(x.size()));
  return f;
}

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b, double tolerance,
                           unsigned max_depth) {
  QuadratureResult r;
  const std::size_t levels = std::min<std::size_t>(max_depth, 15);
  if (std::isinf(b)) {
    boost::math::quadrature::exp_sinh<double> q(levels);
    r.value = q.integrate([&](double x) { return f(x + a); }, tolerance, &r.error);
  } else if (a == b) {
    r.value = 0.0;
  } else {
    boost::math::quadrature::tanh_sinh<double> q(levels);
    r.value = q.integrate(f, a, b, tolerance, &r.error);
  }
  if (!std::isfinite(r.value)) throw std::runtime_error("quadrature: non-finite result");
  return r;
}

std::vector<double> geometric_grid(double a, double b, int n) {
  if (n < 1 || !(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("grid: geometric grid needs positive ends");
  std::vector<double> g(static_cast<std::size_t>(n));
  if (n == 1) {
    g[0] = a;
    return g;
  }
  const double la = std::log(a), lb = std::log(b);
  for (int i = 0; i < n; ++i) g[i] = std::exp(la + (lb - la) * i / (n - 1));
  g.front() = a;
  g.back() = b;
  return g;
}

}  // namespace degenspec
