#include "degenspec/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace degenspec {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kCriticalGuard = 1e-6;

double standard_base(std::span<const double> xi) {
  double s = 0.0;
  for (double x : xi) s += std::cos(2.0 * kPi * x);
  return s / static_cast<double>(xi.size());
}

double mv_base(std::span<const double> xi) {
  double p = 1.0;
  for (double x : xi) p *= std::cos(2.0 * kPi * x);
  return p;
}

double continuum_base(std::span<const double> xi) {
  double r2 = 0.0;
  for (double x : xi) r2 += x * x;
  return 1.0 - 4.0 * kPi * kPi * r2;
}

bool uses_mv(const SymbolSpec& spec) {
  return spec.kind == SymbolKind::LatticeMV ||
         (spec.kind == SymbolKind::LatticeBCS && spec.base == LatticeBase::MV);
}

void check_dimension(const SymbolSpec& spec, std::span<const double> xi) {
  if (static_cast<int>(xi.size()) != spec.dimension) {
    throw std::invalid_argument("symbol: point dimension does not match the symbol");
  }
}

}  // namespace

SymbolSpec SymbolSpec::continuum_bcs(int d) {
  SymbolSpec s;
  s.kind = SymbolKind::ContinuumBCS;
  s.dimension = d;
  s.validate();
  return s;
}

SymbolSpec SymbolSpec::continuum_bcs_power(int d, double s_exp) {
  SymbolSpec s;
  s.kind = SymbolKind::ContinuumBCSPower;
  s.dimension = d;
  s.power_inv_s = 1.0 / s_exp;
  s.validate();
  return s;
}

SymbolSpec SymbolSpec::lattice_standard(int d) {
  SymbolSpec s;
  s.kind = SymbolKind::LatticeStandard;
  s.dimension = d;
  s.validate();
  return s;
}

SymbolSpec SymbolSpec::lattice_mv(int d) {
  SymbolSpec s;
  s.kind = SymbolKind::LatticeMV;
  s.dimension = d;
  s.validate();
  return s;
}

SymbolSpec SymbolSpec::lattice_bcs(int d, double mu, LatticeBase base, double s_exp) {
  SymbolSpec s;
  s.kind = SymbolKind::LatticeBCS;
  s.dimension = d;
  s.mu = mu;
  s.base = base;
  s.power_inv_s = 1.0 / s_exp;
  s.validate();
  return s;
}

void SymbolSpec::validate() const {
  if (dimension < 1) throw std::invalid_argument("symbol: dimension must be >= 1");
  if (!(power_inv_s > 0.0) || power_inv_s > 1.0) {
    throw std::invalid_argument("symbol: power_inv_s must lie in (0, 1]");
  }
  switch (kind) {
    case SymbolKind::ContinuumBCS:
      if (power_inv_s != 1.0) throw std::invalid_argument("symbol: ContinuumBCS has s = 1");
      break;
    case SymbolKind::ContinuumBCSPower:
      if (!(power_inv_s < 1.0)) throw std::invalid_argument("symbol: ContinuumBCSPower needs s > 1");
      break;
    case SymbolKind::LatticeStandard:
    case SymbolKind::LatticeMV:
      if (power_inv_s != 1.0) throw std::invalid_argument("symbol: plain lattice Laplacians take no power");
      break;
    case SymbolKind::LatticeBCS: {
      if (!std::isfinite(mu) || mu <= -1.0 || mu >= 1.0) {
        throw std::invalid_argument("symbol: LatticeBCS needs mu strictly inside (-1, 1)");
      }
      for (double z : critical_values(*this)) {
        if (std::abs(z - mu) < kCriticalGuard) {
          throw std::invalid_argument("symbol: mu lies on a critical value of the base symbol");
        }
      }
      break;
    }
  }
}

bool is_lattice(SymbolKind kind) {
  return kind == SymbolKind::LatticeStandard || kind == SymbolKind::LatticeMV ||
         kind == SymbolKind::LatticeBCS;
}

bool is_bcs(SymbolKind kind) {
  return kind == SymbolKind::ContinuumBCS || kind == SymbolKind::ContinuumBCSPower ||
         kind == SymbolKind::LatticeBCS;
}

std::string to_string(SymbolKind kind) {
  switch (kind) {
    case SymbolKind::ContinuumBCS: return "ContinuumBCS";
    case SymbolKind::ContinuumBCSPower: return "ContinuumBCSPower";
    case SymbolKind::LatticeStandard: return "LatticeStandard";
    case SymbolKind::LatticeMV: return "LatticeMV";
    case SymbolKind::LatticeBCS: return "LatticeBCS";
  }
  return "unknown";
}

SymbolKind symbol_kind_from_string(const std::string& name) {
  for (auto k : {SymbolKind::ContinuumBCS, SymbolKind::ContinuumBCSPower, SymbolKind::LatticeStandard,
                 SymbolKind::LatticeMV, SymbolKind::LatticeBCS}) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("symbol: unknown kind '" + name + "'");
}

double base_symbol(const SymbolSpec& spec, std::span<const double> xi) {
  check_dimension(spec, xi);
  if (!is_lattice(spec.kind)) return continuum_base(xi);
  return uses_mv(spec) ? mv_base(xi) : standard_base(xi);
}

double reference_level(const SymbolSpec& spec) {
  return spec.kind == SymbolKind::LatticeBCS ? spec.mu : 0.0;
}

double eval_symbol(const SymbolSpec& spec, std::span<const double> xi) {
  check_dimension(spec, xi);
  if (is_lattice(spec.kind)) {
    for (double x : xi) {
      if (!(x >= -0.5) || !(x < 0.5)) throw std::domain_error("symbol: point outside the Brillouin zone");
    }
  } else {
    for (double x : xi) {
      if (!std::isfinite(x)) throw std::domain_error("symbol: non-finite frequency");
    }
  }
  const double p = base_symbol(spec, xi);
  if (!is_bcs(spec.kind)) return p;
  const double t = std::abs(p - reference_level(spec));
  return spec.power_inv_s == 1.0 ? t : std::pow(t, spec.power_inv_s);
}

std::vector<double> grad_symbol(const SymbolSpec& spec, std::span<const double> xi) {
  check_dimension(spec, xi);
  const int d = spec.dimension;
  std::vector<double> g(static_cast<std::size_t>(d));
  if (!is_lattice(spec.kind)) {
    for (int j = 0; j < d; ++j) g[j] = -8.0 * kPi * kPi * xi[j];
  } else if (uses_mv(spec)) {
    for (int j = 0; j < d; ++j) {
      double prod = -2.0 * kPi * std::sin(2.0 * kPi * xi[j]);
      for (int i = 0; i < d; ++i) {
        if (i != j) prod *= std::cos(2.0 * kPi * xi[i]);
      }
      g[j] = prod;
    }
  } else {
    for (int j = 0; j < d; ++j) g[j] = -2.0 * kPi * std::sin(2.0 * kPi * xi[j]) / d;
  }
  return g;
}

std::vector<double> critical_values(const SymbolSpec& spec) {
  if (!is_lattice(spec.kind)) {
    throw std::invalid_argument("symbol: critical values are only enumerated for lattice kinds");
  }
  const int d = spec.dimension;
  std::vector<double> z;
  if (uses_mv(spec)) {
    // stationary points: all sin vanish, or at least two cos vanish
    z = {-1.0, 1.0};
    if (d >= 2) z.push_back(0.0);
  } else {
    for (int k = 0; k <= d; ++k) z.push_back(static_cast<double>(d - 2 * k) / d);
  }
  std::sort(z.begin(), z.end());
  z.erase(std::unique(z.begin(), z.end()), z.end());
  return z;
}

double low_energy_window(const SymbolSpec& spec) {
  if (!is_bcs(spec.kind)) throw std::invalid_argument("symbol: low-energy window needs a BCS kind");
  if (!is_lattice(spec.kind)) return 0.5;
  double best = std::numeric_limits<double>::infinity();
  for (double z : critical_values(spec)) best = std::min(best, std::abs(z - spec.mu));
  return 0.5 * best;
}

double growth_exponent(const SymbolSpec& spec) {
  if (is_lattice(spec.kind)) throw std::invalid_argument("symbol: lattice symbols are bounded");
  return 2.0 * spec.power_inv_s;
}

SymbolDiagnostics diagnose_symbol(const SymbolSpec& spec, int samples_per_axis) {
  if (!is_bcs(spec.kind)) throw std::invalid_argument("symbol: diagnostics need a BCS kind");
  if (spec.dimension > 3) throw std::invalid_argument("symbol: diagnostics support d <= 3");
  SymbolDiagnostics out;
  out.tau = low_energy_window(spec);
  out.gradient_floor = std::numeric_limits<double>::infinity();
  out.ellipticity_c1 = std::numeric_limits<double>::infinity();
  out.ellipticity_c2 = std::numeric_limits<double>::infinity();

  const int d = spec.dimension;
  const int n = samples_per_axis;
  const bool lattice = is_lattice(spec.kind);
  // continuum samples cover [-2, 2)^d, well past the unit-ball cut
  const double lo = lattice ? -0.5 : -2.0;
  const double step = (lattice ? 1.0 : 4.0) / n;
  const double ref = reference_level(spec);
  const double g = lattice ? 0.0 : growth_exponent(spec);

  std::size_t total = 1;
  for (int j = 0; j < d; ++j) total *= static_cast<std::size_t>(n);
  std::vector<double> xi(static_cast<std::size_t>(d));
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rem = idx;
    double r2 = 0.0;
    for (int j = d - 1; j >= 0; --j) {
      xi[j] = lo + step * static_cast<double>(rem % n);
      rem /= n;
      r2 += xi[j] * xi[j];
    }
    const double p = base_symbol(spec, xi);
    if (std::abs(p - ref) <= out.tau) {
      double gn = 0.0;
      for (double v : grad_symbol(spec, xi)) gn += v * v;
      out.gradient_floor = std::min(out.gradient_floor, std::sqrt(gn));
    } else if (!lattice) {
      const double t = eval_symbol(spec, xi);
      out.ellipticity_c2 = std::min(out.ellipticity_c2, t);
      if (r2 >= 1.0) out.ellipticity_c1 = std::min(out.ellipticity_c1, t / std::pow(r2, 0.5 * g));
    }
  }
  if (lattice) {
    out.ellipticity_c1 = 0.0;
    out.ellipticity_c2 = 0.0;
  }
  return out;
}

double sigma_exponent(const ExponentTable& table, double q) {
  const double d = table.d;
  if (table.d < 2 || !(q >= 1.0) || !(q < d)) {
    throw std::invalid_argument("sigma: need d >= 2 and 1 <= q < d");
  }
  return (d - 1.0) * q / (d - q);
}

double sigma_exponent_general(const ExponentTable& table, double q) {
  const double d = table.d;
  const double r = table.r;
  if (table.d < 2 || !(r > 0.0) || !(r < d)) throw std::invalid_argument("sigma: need 0 < r < d");
  if (!(table.epsilon >= 0.0)) throw std::invalid_argument("sigma: epsilon must be >= 0");
  if (!(q >= 1.0) || !(q <= 1.0 + r) || !(q < d)) {
    throw std::invalid_argument("sigma: q outside [1, 1 + r]");
  }
  if (q >= d / (d - r)) return 2.0 * (d - 1.0 - r) * q / (d - q);
  return (2.0 * r * q + table.epsilon) / (2.0 * r * q - d * (q - 1.0));
}

}  // namespace degenspec
