#include "degenspec/schatten.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "degenspec/kernels.hpp"
#include "degenspec/linalg.hpp"
#include "degenspec/spectra.hpp"

namespace degenspec {

namespace {

std::vector<double> resolvent_kernel(const SymbolSpec& spec, const TorusGrid& grid, double e) {
  if (!(e > 0.0)) throw std::invalid_argument("bs: e must be positive");
  if (!is_bcs(spec.kind)) throw std::invalid_argument("bs: needs a nonnegative (BCS) symbol");
  auto m = symbol_on_grid(spec, grid);
  for (double& t : m) t = 1.0 / (t + e);
  return kernel_from_multiplier(grid, m);
}

double sqrt_abs(double v) { return std::sqrt(std::abs(v)); }
double sqrt_signed(double v) { return v < 0.0 ? -std::sqrt(-v) : std::sqrt(v); }

SingularSpectrum sorted_spectrum(const Eigen::VectorXd& s, std::string source) {
  SingularSpectrum out;
  out.svals.assign(s.data(), s.data() + s.size());
  for (double& x : out.svals) x = std::max(x, 0.0);
  std::sort(out.svals.begin(), out.svals.end(), std::greater<>());
  out.source = std::move(source);
  return out;
}

Eigen::MatrixXd psd_power(const linalg::SymmetricEigen& eig, double p) {
  Eigen::VectorXd d = eig.values;
  for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = d(i) > 0.0 ? std::pow(d(i), p) : 0.0;
  return eig.vectors * d.asDiagonal() * eig.vectors.transpose();
}

linalg::SymmetricEigen checked_psd(const Eigen::MatrixXd& a, const char* name) {
  if (a.rows() != a.cols()) throw std::invalid_argument("alt_trace: matrix is not square");
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, a.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument(std::string("alt_trace: ") + name + " is not symmetric");
  }
  auto eig = linalg::sym_eigen(0.5 * (a + a.transpose()));
  const double scale = std::max(1.0, eig.values.cwiseAbs().maxCoeff());
  if (eig.values.size() > 0 && eig.values.minCoeff() < -1e-12 * scale) {
    throw std::invalid_argument(std::string("alt_trace: ") + name + " is not positive semidefinite");
  }
  return eig;
}

double trace_power(const Eigen::MatrixXd& x, double m) {
  const Eigen::VectorXd w = linalg::sym_eigenvalues(0.5 * (x + x.transpose()));
  double s = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) s += w(i) > 0.0 ? std::pow(w(i), m) : 0.0;
  return s;
}

}  // namespace

Eigen::MatrixXd birman_schwinger(const SymbolSpec& spec, const PotentialField& v, const TorusGrid& grid, double e,
                                 std::size_t dense_cap) {
  if (grid.size() > dense_cap) throw std::invalid_argument("bs: grid exceeds the dense cap");
  if (v.values.size() != grid.size()) throw std::invalid_argument("bs: potential size mismatch");
  const auto kernel = resolvent_kernel(spec, grid, e);
  TranslationBlock block;
  block.grid = &grid;
  block.kernel = &kernel;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    block.rows.push_back(i);
    block.left.push_back(sqrt_abs(v.values[i]));
    block.right.push_back(sqrt_signed(v.values[i]));
  }
  block.cols = block.rows;
  Eigen::MatrixXd m;
  parallel::fill_translation_invariant(block, m);
  return m;
}

SingularSpectrum bs_singular_values(const SymbolSpec& spec, const PotentialField& v, const TorusGrid& grid,
                                    double e, std::size_t dense_cap) {
  if (v.values.size() != grid.size()) throw std::invalid_argument("bs: potential size mismatch");
  const auto kernel = resolvent_kernel(spec, grid, e);
  TranslationBlock block;
  block.grid = &grid;
  block.kernel = &kernel;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (v.values[i] == 0.0) continue;
    block.rows.push_back(i);
    block.left.push_back(sqrt_abs(v.values[i]));
    block.right.push_back(sqrt_signed(v.values[i]));
  }
  if (block.rows.size() > dense_cap) throw std::invalid_argument("bs: support exceeds the dense cap");
  block.cols = block.rows;
  Eigen::MatrixXd m;
  parallel::fill_translation_invariant(block, m);
  return sorted_spectrum(linalg::singular_values(m), "bs(e=" + std::to_string(e) + "," + v.descriptor + ")");
}

SingularSpectrum singular_values(const Eigen::MatrixXd& m) { return sorted_spectrum(linalg::singular_values(m), "matrix"); }

SingularSpectrum singular_values(const Eigen::MatrixXcd& m) {
  return sorted_spectrum(linalg::singular_values(m), "matrix");
}

double schatten_norm_pow(const SingularSpectrum& s, double p) {
  if (!(p > 0.0)) throw std::invalid_argument("schatten: p must be positive");
  double acc = 0.0;
  for (double x : s.svals) acc += std::pow(x, p);
  return acc;
}

double schatten_norm(const SingularSpectrum& s, double p) { return std::pow(schatten_norm_pow(s, p), 1.0 / p); }

double weak_schatten_norm(const SingularSpectrum& s, double p) {
  if (!(p > 0.0)) throw std::invalid_argument("schatten: p must be positive");
  double best = 0.0;
  for (std::size_t i = 0; i < s.svals.size(); ++i) {
    best = std::max(best, std::pow(static_cast<double>(i + 1), 1.0 / p) * s.svals[i]);
  }
  return best;
}

std::size_t counting_n(const SingularSpectrum& s, double lambda) {
  return static_cast<std::size_t>(
      std::count_if(s.svals.begin(), s.svals.end(), [lambda](double x) { return x > lambda; }));
}

BsCheck verify_bs_principle(const SymbolSpec& spec, const PotentialField& v, const TorusGrid& grid, double e,
                            std::size_t dense_cap) {
  if (!v.nonnegative()) throw std::invalid_argument("bs: the principle check needs V >= 0");
  if (!(e > 0.0)) throw std::invalid_argument("bs: e must be positive");
  BsCheck out;
  const auto spec_result = negative_eigenvalues(spec, v, grid, dense_cap);
  const auto sv = bs_singular_values(spec, v, grid, e, dense_cap);
  out.n_e = count_below(spec_result, e);
  out.n_one = counting_n(sv, 1.0);
  out.margin_e = std::numeric_limits<double>::infinity();
  out.margin_one = std::numeric_limits<double>::infinity();
  for (double x : spec_result.e) out.margin_e = std::min(out.margin_e, std::abs(x - e));
  for (double x : sv.svals) out.margin_one = std::min(out.margin_one, std::abs(x - 1.0));
  out.indeterminate = out.margin_e <= kBsGuard || out.margin_one <= kBsGuard;
  out.agree = out.n_e == out.n_one;
  return out;
}

AltTraceCheck alt_trace_check(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double m) {
  if (!(m >= 1.0)) throw std::invalid_argument("alt_trace: m must be >= 1");
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("alt_trace: size mismatch");
  const auto ea = checked_psd(a, "A");
  const auto eb = checked_psd(b, "B");
  const Eigen::MatrixXd b_half = psd_power(eb, 0.5);
  const Eigen::MatrixXd b_m2 = psd_power(eb, 0.5 * m);
  const Eigen::MatrixXd a_m = psd_power(ea, m);
  AltTraceCheck out;
  out.lhs = trace_power(b_half * a * b_half, m);
  out.rhs = trace_power(b_m2 * a_m * b_m2, 1.0);
  out.holds = out.lhs <= out.rhs + 1e-8 * out.rhs;
  return out;
}

}  // namespace degenspec
