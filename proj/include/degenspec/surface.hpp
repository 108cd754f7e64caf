#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "degenspec/symbols.hpp"
#include "degenspec/torus.hpp"
#include "degenspec/types.hpp"

namespace degenspec {

/// Quadrature nodes on a level set with Leray weights w_i ~ dSigma / |grad P|.
struct SurfaceMesh {
  PointCloud points;
  std::vector<double> weights;
  std::vector<double> levels;  // value of P each point was projected onto
  double t = 0.0;
  int resolution = 0;
  double cell_size = 0.0;
  std::string descriptor;
};

struct LevelSetOptions {
  int resolution = 512;           // cells per axis
  double critical_guard = 1e-6;   // minimum distance of every sheet level to Z
  double newton_tolerance = 1e-13;
};

/// S_t = {P = t} for plain Laplacians, {|P - ref| = t} (two sheets) for BCS kinds.
/// d = 2 uses marching squares, d = 3 marching tetrahedra.
SurfaceMesh extract_level_set(const SymbolSpec& spec, double t, const LevelSetOptions& options = {});

double surface_measure_total(const SurfaceMesh& mesh);
std::complex<double> surface_ft(const SurfaceMesh& mesh, std::span<const double> x);
std::vector<std::complex<double>> surface_ft(const SurfaceMesh& mesh, const PointCloud& xs);

/// 1 / (8 * mean nearest-neighbour spacing of the mesh points).
double nyquist_radius(const SurfaceMesh& mesh);

/// 16 directions over a half circle in d = 2 (|FT| is even), the 26 normalised vectors of {-1,0,1}^3 \ 0 in d = 3.
PointCloud default_directions(int d);

struct DecayFit {
  double r_hat = 0.0;
  double residual = 0.0;
  double nyquist = 0.0;
  std::vector<double> radii;     // shell centres used in the fit
  std::vector<double> envelope;  // sup |FT| over directions and the shell
};

/// Least-squares slope of log envelope vs log |x|, negated. Shell i covers
/// [R_i, R_{i+1}], widened to at least one oscillation period of the mesh.
/// Throws when the largest radius exceeds the Nyquist guard.
DecayFit decay_rate(const SurfaceMesh& mesh, const PointCloud& directions, const std::vector<double>& radii,
                    int samples_per_shell = 32);
/// Geometric radii from r_min up to the Nyquist guard.
std::vector<double> default_decay_radii(const SurfaceMesh& mesh, double r_min = 4.0, int count = 12);

/// B = D^(1/2) K D^(1/2), K_ij = sum_x V(x) h^d exp(-2 pi i x.(xi_i - xi_j)).
Eigen::MatrixXcd vs_operator(const SurfaceMesh& mesh, const PotentialField& v, const TorusGrid& grid);
/// Eigenvalues a_S^j, descending.
std::vector<double> vs_eigenvalues(const Eigen::MatrixXcd& b);

}  // namespace degenspec
