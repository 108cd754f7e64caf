#include "degenspec/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "degenspec/linalg.hpp"
#include "degenspec/numerics.hpp"

namespace degenspec {

namespace {

constexpr double kResidualTolerance = 1e-8;

std::string symbol_descriptor(const SymbolSpec& spec) {
  std::string s = to_string(spec.kind) + "(d=" + std::to_string(spec.dimension);
  if (spec.kind == SymbolKind::LatticeBCS) {
    s += ",mu=" + std::to_string(spec.mu) + (spec.base == LatticeBase::MV ? ",base=MV" : ",base=Standard");
  }
  if (spec.power_inv_s != 1.0) s += ",s=" + std::to_string(1.0 / spec.power_inv_s);
  return s + ")";
}

}  // namespace

SpectrumResult negative_eigenvalues(const Eigen::MatrixXd& h) {
  SpectrumResult out;
  if (h.rows() == 0) return out;
  // Gershgorin lower bound for the spectrum
  double lower = 0.0;
  for (Eigen::Index i = 0; i < h.rows(); ++i) {
    lower = std::min(lower, h(i, i) - (h.row(i).cwiseAbs().sum() - std::abs(h(i, i))));
  }
  lower -= 1.0;
  const auto eig = linalg::sym_eigen_range(h, lower, -kZeroEigenvalueFloor, true);
  out.e.reserve(static_cast<std::size_t>(eig.values.size()));
  for (Eigen::Index j = 0; j < eig.values.size(); ++j) {
    const double lambda = eig.values(j);
    const Eigen::VectorXd v = eig.vectors.col(j);
    const double res = (h * v - lambda * v).norm() / v.norm();
    if (!(res <= kResidualTolerance * std::max(1.0, h.cwiseAbs().maxCoeff()))) {
      throw std::runtime_error("spectra: eigenpair residual " + std::to_string(res) + " exceeds tolerance");
    }
    out.e.push_back(-lambda);
    out.residuals.push_back(res);
  }
  return out;
}

SpectrumResult negative_eigenvalues(const SymbolSpec& spec, const PotentialField& v, const TorusGrid& grid,
                                    std::size_t dense_cap) {
  SpectrumResult out = negative_eigenvalues(assemble_dense(spec, v, grid, dense_cap));
  out.grid_descriptor = grid.descriptor();
  out.symbol_descriptor = symbol_descriptor(spec);
  out.potential_descriptor = v.descriptor;
  out.seed = v.seed;
  return out;
}

std::vector<double> all_eigenvalues(const SymbolSpec& spec, const PotentialField& v, const TorusGrid& grid,
                                    std::size_t dense_cap) {
  const Eigen::VectorXd w = linalg::sym_eigenvalues(assemble_dense(spec, v, grid, dense_cap));
  return {w.data(), w.data() + w.size()};
}

std::size_t count_below(const SpectrumResult& result, double e) {
  return static_cast<std::size_t>(std::count_if(result.e.begin(), result.e.end(), [e](double x) { return x > e; }));
}

double riesz_mean(const SpectrumResult& result, double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("riesz_mean: gamma must be positive");
  double s = 0.0;
  for (double x : result.e) s += std::pow(x, gamma);
  return s;
}

double log_bracket_inverse(double e) {
  if (!(e > 0.0)) throw std::invalid_argument("log_bracket_inverse: e must be positive");
  if (e < 1.0) return -std::log(e) + 0.5 * std::log1p(2.0 * e * e);
  return 0.5 * std::log(2.0 + 1.0 / (e * e));
}

double log_moment(const SpectrumResult& result, double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("log_moment: gamma must be positive");
  double s = 0.0;
  for (double x : result.e) s += std::pow(log_bracket_inverse(x), -gamma);
  return s;
}

LogRepresentation check_log_representation(double e, double gamma) {
  if (!(e > 0.0) || !(gamma > 0.0)) throw std::invalid_argument("log representation: need e > 0 and gamma > 0");
  LogRepresentation out;
  out.closed_form = std::pow(log_bracket_inverse(e), -gamma);
  // r = e exp(-u) turns dr / r^3 <1/r>^-2 into du / (1 + 2 r^2); then
  // v = (l0 / (l0 + u))^gamma maps the algebraic tail onto a smooth integrand on (0, 1]
  const double log_e = std::log(e);
  const double l0 = log_bracket_inverse(e);
  auto integrand = [&](double v) {
    const double u = l0 * (std::pow(v, -1.0 / gamma) - 1.0);
    if (!std::isfinite(u)) return std::pow(l0, -gamma);
    const double log_r = log_e - u;
    const double r2 = std::exp(2.0 * log_r);
    const double ell = log_r < 0.0 ? -log_r + 0.5 * std::log1p(2.0 * r2) : 0.5 * std::log(2.0 + 1.0 / r2);
    const double du_dv = (l0 / gamma) * std::pow(v, -1.0 / gamma - 1.0);
    const double val = gamma * std::pow(ell, -gamma - 1.0) / (1.0 + 2.0 * r2) * du_dv;
    return std::isfinite(val) ? val : std::pow(l0, -gamma);
  };
  const auto q = integrate(integrand, 0.0, 1.0, 1e-12, 30);
  out.quadrature = q.value;
  out.error_estimate = q.error;
  return out;
}

double riesz_mean_by_quadrature(const SpectrumResult& result, double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("riesz_mean: gamma must be positive");
  std::vector<double> pts = result.e;
  std::sort(pts.begin(), pts.end(), std::greater<>());
  double total = 0.0;
  double lo = 0.0;
  // N_e is constant between consecutive eigenvalues, counting from the smallest
  for (std::size_t k = pts.size(); k > 0; --k) {
    const double hi = pts[k - 1];
    if (hi > lo) {
      const auto q = integrate([gamma](double x) { return gamma * std::pow(x, gamma - 1.0); }, lo, hi, 1e-13);
      total += static_cast<double>(k) * q.value;
    }
    lo = std::max(lo, hi);
  }
  return total;
}

}  // namespace degenspec
