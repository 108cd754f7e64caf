#pragma once

// Data-parallel inner loops. Each kernel has a serial reference and an
// OpenMP version; every output entry is reduced in the same order in both,
// so results agree bitwise for any thread count.

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "degenspec/symbols.hpp"
#include "degenspec/torus.hpp"
#include "degenspec/types.hpp"

namespace degenspec {

/// Rows/columns of a translation-invariant operator restricted to index sets:
/// out(a, b) = left[a] * K(x_rows[a] - x_cols[b]) * right[b].
struct TranslationBlock {
  const TorusGrid* grid = nullptr;
  const std::vector<double>* kernel = nullptr;
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;
  std::vector<double> left;
  std::vector<double> right;
};

/// Point samples of a potential used for exact Fourier sums.
struct PotentialSamples {
  PointCloud positions;
  std::vector<double> values;  // already multiplied by the cell volume
};

namespace serial {

void fill_translation_invariant(const TranslationBlock& block, Eigen::MatrixXd& out);
std::vector<std::complex<double>> surface_ft(const PointCloud& points, const std::vector<double>& weights,
                                             const PointCloud& xs);
std::size_t sublevel_count(const SymbolSpec& spec, int samples_per_axis, double threshold);
Eigen::MatrixXcd vs_matrix(const PointCloud& points, const std::vector<double>& weights,
                           const PotentialSamples& v);

}  // namespace serial

namespace parallel {

void fill_translation_invariant(const TranslationBlock& block, Eigen::MatrixXd& out);
std::vector<std::complex<double>> surface_ft(const PointCloud& points, const std::vector<double>& weights,
                                             const PointCloud& xs);
std::size_t sublevel_count(const SymbolSpec& spec, int samples_per_axis, double threshold);
Eigen::MatrixXcd vs_matrix(const PointCloud& points, const std::vector<double>& weights,
                           const PotentialSamples& v);

}  // namespace parallel

/// Worker count used by the parallel kernels; 0 restores the OpenMP default.
void set_worker_count(int workers);
int worker_count();

}  // namespace degenspec
