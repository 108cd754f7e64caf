#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "degenspec/spectra.hpp"
#include "degenspec/surface.hpp"
#include "degenspec/symbols.hpp"
#include "degenspec/torus.hpp"

namespace degenspec {

enum class TheoremTag {
  T3_1_1, T3_1_2, T3_1_3,
  T3_2_1, T3_2_2,
  T3_3,
  T3_4,
  T4_1_1, T4_1_2,
  T4_2_1, T4_2_2,
  T4_3,
  T4_5,
};

std::string to_string(TheoremTag tag);
TheoremTag theorem_tag_from_string(const std::string& name);
std::vector<TheoremTag> all_theorem_tags();

/// Parameters of the bound functionals. s is the growth exponent of the
/// symbol for the continuum theorems 3.1-3.3 and the fractional power for
/// 3.4 / 4.5. r is the decay rate; when r > 0, m must equal sigma(q, r).
struct BoundParams {
  int d = 2;
  double s = 2.0;
  double m = 2.0;
  double q = 1.0;
  double r = 0.0;
  double delta = 0.0;
  double gamma = 1.0;
  double e = 1.0;
  double p = 2.0;
  double epsilon = 1e-2;
};

/// Throws std::invalid_argument when params violate the hypotheses of the tag.
void check_hypotheses(TheoremTag tag, const BoundParams& params);

/// Right-hand side of the tagged bound with unit constant.
double rhs_structural(TheoremTag tag, const PotentialField& v, const TorusGrid& grid, const BoundParams& params);

/// Left-hand side: Schatten norm^m of BS(e), Riesz mean, log-moment or N_0.
double lhs_functional(TheoremTag tag, const SymbolSpec& spec, const PotentialField& v, const TorusGrid& grid,
                      const BoundParams& params);

/// Stress-family member: gaussian | bump | plateau | delta | random.
struct FamilySpec {
  std::string kind = "gaussian";
  double amplitude = 1.0;
  double size = 2.0;  // width or radius
  std::uint64_t seed = 0;
  std::string name() const;
};

PotentialField make_family_potential(const TorusGrid& grid, const FamilySpec& family);
/// gaussian, plateau, delta and seeded random with a common amplitude.
std::vector<FamilySpec> default_stress_families(double amplitude, std::uint64_t seed);
/// The wider set: gaussian of widths 1, 2, 3, bump, plateau, delta, random.
std::vector<FamilySpec> extended_stress_families(double amplitude, std::uint64_t seed);

struct BoundRecord {
  std::string instance;
  std::string family;
  double kappa = 1.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

struct BoundReport {
  TheoremTag tag = TheoremTag::T4_1_1;
  std::vector<BoundRecord> records;
  double c_hat = 0.0;             // max ratio over instances with lhs > 0
  double median_ratio = 0.0;
  double max_over_median = 0.0;
  std::size_t positive_instances = 0;
  double factor = 10.0;
  bool pass = false;
  std::optional<double> slope;
};

BoundReport run_bound_family(TheoremTag tag, const SymbolSpec& spec, const TorusGrid& grid,
                             const std::vector<FamilySpec>& families, const BoundParams& params,
                             const std::vector<double>& kappas = {0.5, 1.0, 2.0}, double factor = 10.0);

/// ||BS(e)||_m^m over an e-grid and the log-log slope with the largest
/// `drop_largest` values of e left out.
struct SchattenSweep {
  std::vector<double> e;
  std::vector<double> norm_pow;
  double slope = 0.0;
  double residual = 0.0;
  std::size_t fitted = 0;
};
SchattenSweep schatten_e_sweep(const SymbolSpec& spec, const PotentialField& v, const TorusGrid& grid, double m,
                               const std::vector<double>& e_grid, std::size_t drop_largest = 2);

struct ClusterRate {
  double slope = 0.0;
  double residual = 0.0;
  double predicted = 0.0;  // 1 / sigma(q)
  std::size_t used = 0;
  bool conclusive = false;
};
/// Fit of log log(1/e_n) against log n over eigenvalues in (0, 1).
ClusterRate cluster_rate_check(const SpectrumResult& result, double q, double sigma_q, double norm_q);

struct WeakCouplingPoint {
  double lambda = 0.0;
  std::vector<double> e;  // tracked e_j(lambda), NaN when absent
  std::vector<bool> used;
};

struct WeakCouplingFit {
  std::vector<int> tracked;
  std::vector<WeakCouplingPoint> points;
  std::vector<double> a_fit;
  std::vector<double> a_surface;
  std::vector<double> mismatch;
  std::vector<double> window_max_lambda;  // largest lambda kept by the adaptive window
  std::vector<std::size_t> fitted_points;
  double resolution = 0.0;       // smallest positive |T(xi_k)|
  double e_floor = 1e-12;
  double resolution_factor = 10.0;
  bool precondition_ok = true;   // e_1(lambda_max) < 0.1 tau
  bool conclusive = false;
};

WeakCouplingFit weak_coupling_sweep(const SymbolSpec& spec, const PotentialField& v, const TorusGrid& grid,
                                    const SurfaceMesh& mesh, const std::vector<double>& lambdas,
                                    const std::vector<int>& tracked = {1}, double resolution_factor = 10.0);

struct ClrStudy {
  std::vector<double> kappas;
  std::vector<std::size_t> n0;
  std::vector<double> norm_pow;  // ||(kappa V)_+||_p^p
  double growth_exponent = 0.0;  // d log N_0 / d log ||kappa V||_p^p
  double kappa_exponent = 0.0;   // d log N_0 / d log kappa
  bool growth_conclusive = false;
  std::vector<double> alphas;
  std::vector<double> sublevel_measure;  // |{T_mu <= alpha^(2s)}|
  std::vector<double> halving_ratios;    // measure(alpha) / measure(alpha / 2)
};

/// N_0 scaling over kappa and the sub-level measure over alpha for a
/// fractional BCS symbol |P - mu|^(1/s). Continuum symbols take no alphas.
ClrStudy clr_scaling_study(const SymbolSpec& spec, double p, const PotentialField& v, const TorusGrid& grid,
                           const std::vector<double>& kappas, const std::vector<double>& alphas,
                           int sublevel_samples = 4096);

}  // namespace degenspec
