#pragma once

// Periodic grid {0..L-1}^d with spacing h. h = 1 is the lattice Z^d; h < 1
// approximates R^d by a box of side L*h. Indices are row-major with the
// last axis fastest. Frequencies use the usual DFT storage order.

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "degenspec/symbols.hpp"
#include "degenspec/types.hpp"

namespace degenspec {

class TorusGrid {
 public:
  TorusGrid(int d, int L, double h = 1.0);

  int dim() const { return d_; }
  int points_per_axis() const { return L_; }
  double spacing() const { return h_; }
  std::size_t size() const { return n_; }
  bool lattice_mode() const { return h_ == 1.0; }
  /// h^d, the quadrature weight of one grid point.
  double cell_volume() const;

  std::vector<int> multi_index(std::size_t idx) const;
  std::size_t flat_index(const std::vector<int>& mi) const;
  /// Signed position n or n - L (times h) along one axis.
  double coordinate(int n) const;
  /// Signed DFT wavenumber of axis index n, in [-L/2, L/2).
  int wavenumber(int n) const;
  std::string descriptor() const;

 private:
  int d_;
  int L_;
  double h_;
  std::size_t n_;
};

struct PotentialField {
  std::vector<double> values;
  std::string descriptor;
  std::uint64_t seed = 0;

  /// sum_x |V(x)|^p h^d
  double norm_pow(const TorusGrid& grid, double p) const;
  double lp_norm(const TorusGrid& grid, double p) const;
  /// Same quantities for the positive part V_+.
  double positive_norm_pow(const TorusGrid& grid, double p) const;
  double max_abs() const;
  bool nonnegative() const;
  PotentialField scaled(double kappa) const;
  PotentialField positive_part() const;
};

PotentialField zero_potential(const TorusGrid& grid);
/// A exp(-|x|^2 / w^2) centred at the origin.
PotentialField gaussian_potential(const TorusGrid& grid, double amplitude, double width);
/// A exp(1 - 1/(1 - |x|^2/R^2)) on |x| < R.
PotentialField bump_potential(const TorusGrid& grid, double amplitude, double radius);
/// A on |x| <= R.
PotentialField plateau_potential(const TorusGrid& grid, double amplitude, double radius);
/// g at the origin; in continuum mode the value is g / h^d so that the integral is g.
PotentialField delta_potential(const TorusGrid& grid, double g);
/// Uniform [0, A) on |x| <= R, from mt19937_64(seed).
PotentialField random_potential(const TorusGrid& grid, double amplitude, double radius, std::uint64_t seed);
/// Rows "i_1,...,i_d,value"; unlisted points are zero, '#' starts a comment.
PotentialField load_potential_csv(const TorusGrid& grid, const std::string& path);
/// V(x - a) for an integer shift a.
PotentialField translate_potential(const TorusGrid& grid, const PotentialField& v, const std::vector<int>& shift);

/// All N dual points xi_k = k/(L h) in storage order.
PointCloud frequencies(const TorusGrid& grid);

/// T(xi_k) for every grid frequency. Lattice kinds need h = 1.
std::vector<double> symbol_on_grid(const SymbolSpec& spec, const TorusGrid& grid);

/// K(x) = N^-1 sum_k m(xi_k) exp(2 pi i k.x / L) for an even multiplier m,
/// which makes K real and symmetric.
std::vector<double> kernel_from_multiplier(const TorusGrid& grid, const std::vector<double>& multiplier);

/// DFT^-1 (T . DFT u) - V u, matrix-free.
std::vector<std::complex<double>> apply_hamiltonian(const SymbolSpec& spec, const PotentialField& v,
                                                    const TorusGrid& grid,
                                                    const std::vector<std::complex<double>>& u);

/// Dense H. Real symmetric because every symbol here is even.
Eigen::MatrixXd assemble_dense(const SymbolSpec& spec, const PotentialField& v, const TorusGrid& grid,
                               std::size_t dense_cap = 8192);

/// Largest |V| compared with T at the frequency cutoff (continuum aliasing guard).
struct AliasingCheck {
  double cutoff_symbol = 0.0;
  double max_potential = 0.0;
  bool ok = true;
};
AliasingCheck aliasing_check(const SymbolSpec& spec, const PotentialField& v, const TorusGrid& grid,
                             double factor = 100.0);

/// Smallest positive |T(xi_k)| on the grid, the finite-size spectral resolution.
double spectral_resolution(const SymbolSpec& spec, const TorusGrid& grid);

}  // namespace degenspec
