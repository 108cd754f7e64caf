#pragma once

// Kinetic symbols T(xi) whose zero set is a hypersurface, plus the
// restriction-theory exponent arithmetic used to pick Schatten indices.
//
// Conventions: Fourier transforms use exp(-2 pi i x.xi). Lattice symbols
// live on the Brillouin zone [-1/2, 1/2)^d; continuum symbols on R^d.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace degenspec {

enum class SymbolKind {
  ContinuumBCS,       // |1 - 4 pi^2 |xi|^2|
  ContinuumBCSPower,  // |1 - 4 pi^2 |xi|^2|^(1/s), s > 1
  LatticeStandard,    // d^-1 sum_j cos(2 pi xi_j)
  LatticeMV,          // prod_j cos(2 pi xi_j)
  LatticeBCS,         // |P(xi) - mu|^(1/s), P standard or MV
};

enum class LatticeBase { Standard, MV };

struct SymbolSpec {
  SymbolKind kind = SymbolKind::LatticeStandard;
  int dimension = 1;
  double mu = 0.0;           // Fermi level (LatticeBCS only)
  double power_inv_s = 1.0;  // 1/s for fractional powers of BCS symbols
  LatticeBase base = LatticeBase::Standard;

  static SymbolSpec continuum_bcs(int d);
  static SymbolSpec continuum_bcs_power(int d, double s);
  static SymbolSpec lattice_standard(int d);
  static SymbolSpec lattice_mv(int d);
  static SymbolSpec lattice_bcs(int d, double mu, LatticeBase base = LatticeBase::Standard,
                                double s = 1.0);

  /// Throws std::invalid_argument when the invariants of the kind are violated.
  void validate() const;
};

bool is_lattice(SymbolKind kind);
bool is_bcs(SymbolKind kind);
std::string to_string(SymbolKind kind);
SymbolKind symbol_kind_from_string(const std::string& name);

/// Smooth base function P whose level sets define the Fermi surfaces.
/// For continuum kinds this is 1 - 4 pi^2 |xi|^2.
double base_symbol(const SymbolSpec& spec, std::span<const double> xi);

/// Level of P on which T vanishes: mu for lattice BCS, 0 for continuum BCS.
/// Plain lattice Laplacians have no such level and return 0.
double reference_level(const SymbolSpec& spec);

/// T(xi). BCS kinds return |P - ref|^(1/s) >= 0; plain Laplacians return P.
/// Lattice kinds reject points outside [-1/2, 1/2)^d with std::domain_error.
double eval_symbol(const SymbolSpec& spec, std::span<const double> xi);

/// Analytic gradient of the base P.
std::vector<double> grad_symbol(const SymbolSpec& spec, std::span<const double> xi);

/// Exact critical values of the base symbol of a lattice kind, ascending.
/// Continuum kinds throw std::invalid_argument.
std::vector<double> critical_values(const SymbolSpec& spec);

/// Low-energy window tau: half the distance from the Fermi level to the
/// nearest other critical value of P (BCS kinds only).
double low_energy_window(const SymbolSpec& spec);

/// Growth exponent of a continuum symbol at infinity: T ~ |xi|^(2/s).
/// Lattice kinds throw.
double growth_exponent(const SymbolSpec& spec);

/// Measured (not assumed) constants of a BCS symbol, sampled on a grid:
/// c_P = min |grad P| on {|P - ref| <= tau}. For continuum kinds C1 is the
/// largest constant with T >= C1 |xi|^g off a unit ball and C2 = min T
/// outside the window.
struct SymbolDiagnostics {
  double tau = 0.0;
  double gradient_floor = 0.0;
  double ellipticity_c1 = 0.0;
  double ellipticity_c2 = 0.0;
};
SymbolDiagnostics diagnose_symbol(const SymbolSpec& spec, int samples_per_axis = 256);

/// sigma(q) = (d-1)q/(d-q) and its decay-rate generalisation sigma(q, r).
struct ExponentTable {
  int d = 2;
  double r = 0.5;
  double epsilon = 1e-2;  // slack added to 2rq in the lower branch
};

double sigma_exponent(const ExponentTable& table, double q);
double sigma_exponent_general(const ExponentTable& table, double q);

}  // namespace degenspec
