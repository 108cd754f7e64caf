#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "degenspec/symbols.hpp"
#include "degenspec/torus.hpp"

namespace degenspec {

struct SingularSpectrum {
  std::vector<double> svals;  // nonincreasing, >= 0
  std::string source;
};

/// BS(e) = |V|^(1/2) (T + e)^-1 V^(1/2) on the whole grid, with sgn(0) = 1.
Eigen::MatrixXd birman_schwinger(const SymbolSpec& spec, const PotentialField& v, const TorusGrid& grid, double e,
                                 std::size_t dense_cap = 8192);
/// Singular values of BS(e) computed on supp V only; the omitted ones are zero.
SingularSpectrum bs_singular_values(const SymbolSpec& spec, const PotentialField& v, const TorusGrid& grid,
                                    double e, std::size_t dense_cap = 8192);

SingularSpectrum singular_values(const Eigen::MatrixXd& m);
SingularSpectrum singular_values(const Eigen::MatrixXcd& m);

/// (sum s_n^p)^(1/p)
double schatten_norm(const SingularSpectrum& s, double p);
/// sum s_n^p
double schatten_norm_pow(const SingularSpectrum& s, double p);
/// sup_{m >= 1} m^(1/p) s_m with s_1 the largest singular value.
double weak_schatten_norm(const SingularSpectrum& s, double p);
/// #{n : s_n > lambda}
std::size_t counting_n(const SingularSpectrum& s, double lambda);

struct BsCheck {
  std::size_t n_e = 0;       // eigenvalues of T - V below -e
  std::size_t n_one = 0;     // singular values of BS(e) above 1
  bool agree = false;
  bool indeterminate = false;  // some value within the guard of e or 1
  double margin_e = 0.0;       // closest |e_j - e|
  double margin_one = 0.0;     // closest |s_n - 1|
};

inline constexpr double kBsGuard = 1e-8;

/// N_e(V) = n(1, BS(e)) for V >= 0, exact integer comparison.
BsCheck verify_bs_principle(const SymbolSpec& spec, const PotentialField& v, const TorusGrid& grid, double e,
                            std::size_t dense_cap = 8192);

struct AltTraceCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

/// ||B^(1/2) A B^(1/2)||_m^m <= ||B^(m/2) A^m B^(m/2)||_1 for PSD A, B.
AltTraceCheck alt_trace_check(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double m);

}  // namespace degenspec
