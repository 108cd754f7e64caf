#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "degenspec/symbols.hpp"
#include "degenspec/torus.hpp"

namespace degenspec {

/// Negative spectrum of H = T - V as magnitudes e_1 >= e_2 >= ... > 0, so the
/// H-eigenvalues -e_1 <= -e_2 <= ... are in non-decreasing order.
struct SpectrumResult {
  std::vector<double> e;
  std::vector<double> residuals;  // ||H v_j + e_j v_j|| for unit v_j
  std::string grid_descriptor;
  std::string symbol_descriptor;
  std::string potential_descriptor;
  std::uint64_t seed = 0;
};

/// Eigenvalues with |lambda| < this are treated as zero rather than negative.
inline constexpr double kZeroEigenvalueFloor = 1e-12;

/// Dense diagonalisation restricted to (-inf, -1e-12]; throws when a
/// residual exceeds 1e-8.
SpectrumResult negative_eigenvalues(const SymbolSpec& spec, const PotentialField& v, const TorusGrid& grid,
                                    std::size_t dense_cap = 8192);
/// Same from an already assembled H.
SpectrumResult negative_eigenvalues(const Eigen::MatrixXd& h);

/// Full spectrum of H, ascending.
std::vector<double> all_eigenvalues(const SymbolSpec& spec, const PotentialField& v, const TorusGrid& grid,
                                    std::size_t dense_cap = 8192);

/// N_e(V) = #{j : e_j > e}.
std::size_t count_below(const SpectrumResult& result, double e);
/// sum_j e_j^gamma
double riesz_mean(const SpectrumResult& result, double gamma);
/// sum_j log(<1/e_j>)^-gamma with <x> = (2 + x^2)^(1/2)
double log_moment(const SpectrumResult& result, double gamma);
/// log <1/e>, evaluated without overflow for tiny e.
double log_bracket_inverse(double e);

struct LogRepresentation {
  double closed_form = 0.0;
  double quadrature = 0.0;
  double error_estimate = 0.0;
};
/// gamma int_0^e log(<1/r>)^(-gamma-1) <1/r>^-2 dr / r^3 against log(<1/e>)^-gamma.
LogRepresentation check_log_representation(double e, double gamma);

/// gamma int_0^inf e^(gamma-1) N_e de, integrated piecewise between eigenvalues.
double riesz_mean_by_quadrature(const SpectrumResult& result, double gamma);

}  // namespace degenspec
