#include "degenspec/kernels.hpp"

#include <omp.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace degenspec {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

int g_workers = 0;

struct BlockIndex {
  std::vector<std::size_t> strides;
  std::vector<int> row_mi;  // rows.size() x d
  std::vector<int> col_mi;
  int d = 0;
  int L = 0;
};

BlockIndex index_block(const TranslationBlock& b) {
  if (!b.grid || !b.kernel) throw std::invalid_argument("kernels: block without grid or kernel");
  if (b.kernel->size() != b.grid->size()) throw std::invalid_argument("kernels: kernel size mismatch");
  if (b.left.size() != b.rows.size() || b.right.size() != b.cols.size()) {
    throw std::invalid_argument("kernels: weight size mismatch");
  }
  BlockIndex ix;
  ix.d = b.grid->dim();
  ix.L = b.grid->points_per_axis();
  ix.strides.assign(static_cast<std::size_t>(ix.d), 1);
  for (int j = ix.d - 2; j >= 0; --j) ix.strides[j] = ix.strides[j + 1] * static_cast<std::size_t>(ix.L);
  for (auto r : b.rows) {
    auto mi = b.grid->multi_index(r);
    ix.row_mi.insert(ix.row_mi.end(), mi.begin(), mi.end());
  }
  for (auto c : b.cols) {
    auto mi = b.grid->multi_index(c);
    ix.col_mi.insert(ix.col_mi.end(), mi.begin(), mi.end());
  }
  return ix;
}

inline double block_entry(const TranslationBlock& b, const BlockIndex& ix, std::size_t a, std::size_t c) {
  std::size_t off = 0;
  for (int j = 0; j < ix.d; ++j) {
    int diff = ix.row_mi[a * ix.d + j] - ix.col_mi[c * ix.d + j];
    if (diff < 0) diff += ix.L;
    off += static_cast<std::size_t>(diff) * ix.strides[j];
  }
  return b.left[a] * (*b.kernel)[off] * b.right[c];
}

inline std::complex<double> ft_entry(const PointCloud& points, const std::vector<double>& weights,
                                     std::span<const double> x) {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    auto p = points[i];
    double phase = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) phase += x[j] * p[j];
    phase *= kTwoPi;
    re += weights[i] * std::cos(phase);
    im += weights[i] * std::sin(phase);
  }
  return {re, im};
}

void check_ft(const PointCloud& points, const std::vector<double>& weights, const PointCloud& xs) {
  if (points.size() != weights.size()) throw std::invalid_argument("kernels: weight count mismatch");
  if (!xs.empty() && xs.dim() != points.dim()) throw std::invalid_argument("kernels: dimension mismatch");
}

struct SublevelSetup {
  int d;
  int n;
  std::size_t total;
  double ref;
  bool bcs;
};

SublevelSetup sublevel_setup(const SymbolSpec& spec, int n) {
  if (!is_lattice(spec.kind)) throw std::invalid_argument("kernels: sublevel counting needs a lattice symbol");
  if (n < 1) throw std::invalid_argument("kernels: samples_per_axis must be positive");
  SublevelSetup s{spec.dimension, n, 1, reference_level(spec), is_bcs(spec.kind)};
  for (int j = 0; j < s.d; ++j) s.total *= static_cast<std::size_t>(n);
  return s;
}

inline bool sublevel_hit(const SymbolSpec& spec, const SublevelSetup& s, std::size_t idx, double threshold,
                         std::vector<double>& xi) {
  std::size_t rem = idx;
  for (int j = s.d - 1; j >= 0; --j) {
    xi[j] = (static_cast<double>(rem % s.n) + 0.5) / s.n - 0.5;
    rem /= s.n;
  }
  double t = base_symbol(spec, xi);
  if (s.bcs) {
    t = std::abs(t - s.ref);
    if (spec.power_inv_s != 1.0) t = std::pow(t, spec.power_inv_s);
  }
  return t <= threshold;
}

void extension_matrix(const PointCloud& points, const std::vector<double>& weights, const PotentialSamples& v,
                      std::size_t i_begin, std::size_t i_end, Eigen::MatrixXcd& g) {
  for (std::size_t i = i_begin; i < i_end; ++i) {
    const double sw = std::sqrt(weights[i]);
    auto xi = points[i];
    for (std::size_t k = 0; k < v.positions.size(); ++k) {
      auto x = v.positions[k];
      double phase = 0.0;
      for (std::size_t j = 0; j < xi.size(); ++j) phase += x[j] * xi[j];
      phase *= -kTwoPi;
      g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          sw * std::complex<double>(std::cos(phase), std::sin(phase));
    }
  }
}

inline std::complex<double> vs_entry(const Eigen::MatrixXcd& g, const PotentialSamples& v, Eigen::Index i,
                                     Eigen::Index j) {
  std::complex<double> acc = 0.0;
  for (Eigen::Index k = 0; k < g.cols(); ++k) {
    acc += g(i, k) * v.values[static_cast<std::size_t>(k)] * std::conj(g(j, k));
  }
  return acc;
}

void check_vs(const PointCloud& points, const std::vector<double>& weights, const PotentialSamples& v) {
  if (points.size() != weights.size()) throw std::invalid_argument("kernels: weight count mismatch");
  if (v.positions.size() != v.values.size()) throw std::invalid_argument("kernels: potential sample mismatch");
  if (!v.positions.empty() && v.positions.dim() != points.dim()) {
    throw std::invalid_argument("kernels: dimension mismatch");
  }
}

void hermitize(Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd h = 0.5 * (b + b.adjoint());
  b = std::move(h);
}

}  // namespace

void set_worker_count(int workers) {
  g_workers = workers > 0 ? workers : 0;
  if (g_workers > 0) omp_set_num_threads(g_workers);
}

int worker_count() { return g_workers > 0 ? g_workers : omp_get_max_threads(); }

namespace serial {

void fill_translation_invariant(const TranslationBlock& block, Eigen::MatrixXd& out) {
  const auto ix = index_block(block);
  out.resize(static_cast<Eigen::Index>(block.rows.size()), static_cast<Eigen::Index>(block.cols.size()));
  for (std::size_t c = 0; c < block.cols.size(); ++c) {
    for (std::size_t a = 0; a < block.rows.size(); ++a) {
      out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(c)) = block_entry(block, ix, a, c);
    }
  }
}

std::vector<std::complex<double>> surface_ft(const PointCloud& points, const std::vector<double>& weights,
                                             const PointCloud& xs) {
  check_ft(points, weights, xs);
  std::vector<std::complex<double>> out(xs.size());
  for (std::size_t q = 0; q < xs.size(); ++q) out[q] = ft_entry(points, weights, xs[q]);
  return out;
}

std::size_t sublevel_count(const SymbolSpec& spec, int samples_per_axis, double threshold) {
  const auto s = sublevel_setup(spec, samples_per_axis);
  std::vector<double> xi(static_cast<std::size_t>(s.d));
  std::size_t count = 0;
  for (std::size_t idx = 0; idx < s.total; ++idx) {
    if (sublevel_hit(spec, s, idx, threshold, xi)) ++count;
  }
  return count;
}

Eigen::MatrixXcd vs_matrix(const PointCloud& points, const std::vector<double>& weights,
                           const PotentialSamples& v) {
  check_vs(points, weights, v);
  const auto m = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXcd g(m, static_cast<Eigen::Index>(v.positions.size()));
  extension_matrix(points, weights, v, 0, points.size(), g);
  Eigen::MatrixXcd b(m, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index i = 0; i < m; ++i) b(i, j) = vs_entry(g, v, i, j);
  }
  hermitize(b);
  return b;
}

}  // namespace serial

namespace parallel {

void fill_translation_invariant(const TranslationBlock& block, Eigen::MatrixXd& out) {
  const auto ix = index_block(block);
  const auto nr = static_cast<std::ptrdiff_t>(block.rows.size());
  const auto nc = static_cast<std::ptrdiff_t>(block.cols.size());
  out.resize(nr, nc);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < nc; ++c) {
    for (std::ptrdiff_t a = 0; a < nr; ++a) {
      out(a, c) = block_entry(block, ix, static_cast<std::size_t>(a), static_cast<std::size_t>(c));
    }
  }
}

std::vector<std::complex<double>> surface_ft(const PointCloud& points, const std::vector<double>& weights,
                                             const PointCloud& xs) {
  check_ft(points, weights, xs);
  const auto nq = static_cast<std::ptrdiff_t>(xs.size());
  std::vector<std::complex<double>> out(xs.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t q = 0; q < nq; ++q) out[q] = ft_entry(points, weights, xs[static_cast<std::size_t>(q)]);
  return out;
}

std::size_t sublevel_count(const SymbolSpec& spec, int samples_per_axis, double threshold) {
  const auto s = sublevel_setup(spec, samples_per_axis);
  const auto total = static_cast<std::ptrdiff_t>(s.total);
  std::size_t count = 0;
#pragma omp parallel reduction(+ : count)
  {
    std::vector<double> xi(static_cast<std::size_t>(s.d));
#pragma omp for schedule(static)
    for (std::ptrdiff_t idx = 0; idx < total; ++idx) {
      if (sublevel_hit(spec, s, static_cast<std::size_t>(idx), threshold, xi)) ++count;
    }
  }
  return count;
}

Eigen::MatrixXcd vs_matrix(const PointCloud& points, const std::vector<double>& weights,
                           const PotentialSamples& v) {
  check_vs(points, weights, v);
  const auto m = static_cast<std::ptrdiff_t>(points.size());
  Eigen::MatrixXcd g(m, static_cast<Eigen::Index>(v.positions.size()));
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < m; ++i) {
    extension_matrix(points, weights, v, static_cast<std::size_t>(i), static_cast<std::size_t>(i) + 1, g);
  }
  Eigen::MatrixXcd b(m, m);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < m; ++j) {
    for (std::ptrdiff_t i = 0; i < m; ++i) b(i, j) = vs_entry(g, v, i, j);
  }
  hermitize(b);
  return b;
}

}  // namespace parallel

}  // namespace degenspec
