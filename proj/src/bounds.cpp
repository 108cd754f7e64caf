#include "degenspec/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "degenspec/kernels.hpp"
#include "degenspec/numerics.hpp"
#include "degenspec/schatten.hpp"

namespace degenspec {

namespace {

struct TagName {
  TheoremTag tag;
  const char* name;
};

constexpr TagName kTagNames[] = {
    {TheoremTag::T3_1_1, "T3.1(1)"}, {TheoremTag::T3_1_2, "T3.1(2)"}, {TheoremTag::T3_1_3, "T3.1(3)"},
    {TheoremTag::T3_2_1, "T3.2(1)"}, {TheoremTag::T3_2_2, "T3.2(2)"}, {TheoremTag::T3_3, "T3.3"},
    {TheoremTag::T3_4, "T3.4"},      {TheoremTag::T4_1_1, "T4.1(1)"}, {TheoremTag::T4_1_2, "T4.1(2)"},
    {TheoremTag::T4_2_1, "T4.2(1)"}, {TheoremTag::T4_2_2, "T4.2(2)"}, {TheoremTag::T4_3, "T4.3"},
    {TheoremTag::T4_5, "T4.5"},
};

double theta(double x) { return x >= 0.0 ? 1.0 : 0.0; }

void require(bool ok, TheoremTag tag, const char* what) {
  if (!ok) throw std::invalid_argument("bounds: " + to_string(tag) + " needs " + what);
}

void require_sigma(TheoremTag tag, const BoundParams& p, bool lattice) {
  require(p.r > 0.0, tag, "r > 0");
  if (lattice) require(p.r <= 0.5 * (p.d - 1) + 1e-12, tag, "r <= (d-1)/2");
  require(p.q >= 1.0 && p.q <= p.r + 1.0, tag, "q in [1, r + 1]");
  const double sigma = sigma_exponent_general(ExponentTable{p.d, p.r, p.epsilon}, p.q);
  require(std::abs(sigma - p.m) <= 1e-9 * std::max(1.0, sigma), tag, "m = sigma(q, r)");
}

double vnorm_pow(const PotentialField& v, const TorusGrid& g, double p) { return v.norm_pow(g, p); }
double vnorm(const PotentialField& v, const TorusGrid& g, double p) { return v.lp_norm(g, p); }
double vpos_pow(const PotentialField& v, const TorusGrid& g, double p) { return v.positive_norm_pow(g, p); }
double vpos(const PotentialField& v, const TorusGrid& g, double p) {
  return std::pow(v.positive_norm_pow(g, p), 1.0 / p);
}

double median(std::vector<double> x) {
  if (x.empty()) return 0.0;
  std::sort(x.begin(), x.end());
  const std::size_t n = x.size();
  return n % 2 ? x[n / 2] : 0.5 * (x[n / 2 - 1] + x[n / 2]);
}

std::string fmt(double x) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << x;
  return os.str();
}

}  // namespace

std::string to_string(TheoremTag tag) {
  for (const auto& t : kTagNames) {
    if (t.tag == tag) return t.name;
  }
  return "unknown";
}

TheoremTag theorem_tag_from_string(const std::string& name) {
  for (const auto& t : kTagNames) {
    if (name == t.name) return t.tag;
  }
  throw std::invalid_argument("bounds: unknown theorem tag '" + name + "'");
}

std::vector<TheoremTag> all_theorem_tags() {
  std::vector<TheoremTag> out;
  for (const auto& t : kTagNames) out.push_back(t.tag);
  return out;
}

void check_hypotheses(TheoremTag tag, const BoundParams& p) {
  require(p.d >= 1, tag, "d >= 1");
  const double ds = p.d / p.s;
  switch (tag) {
    case TheoremTag::T3_1_1:
      require(p.e > 0.0, tag, "e > 0");
      require(p.m > ds, tag, "m > d/s");
      break;
    case TheoremTag::T3_1_2:
    case TheoremTag::T3_1_3:
      require(p.e > 0.0, tag, "e > 0");
      require_sigma(tag, p, false);
      require(p.m > ds, tag, "m > d/s");
      if (tag == TheoremTag::T3_1_3) require(p.q > ds, tag, "q > d/s");
      break;
    case TheoremTag::T3_2_1:
      require(p.gamma > ds - 1.0 && p.gamma > 0.0, tag, "gamma > d/s - 1");
      break;
    case TheoremTag::T3_2_2:
      require_sigma(tag, p, false);
      require(p.m > ds, tag, "m > d/s");
      require(p.gamma > p.m - ds && p.gamma > 0.0, tag, "gamma > m - d/s");
      break;
    case TheoremTag::T3_3:
      require_sigma(tag, p, false);
      require(p.m > ds, tag, "m > d/s");
      require(p.gamma > p.m, tag, "gamma > m");
      break;
    case TheoremTag::T3_4:
      require(p.d == 2, tag, "d = 2");
      require(p.s > 1.0, tag, "s > 1");
      break;
    case TheoremTag::T4_1_1:
      require(p.e > 0.0, tag, "e > 0");
      require(p.m >= 1.0, tag, "m >= 1");
      break;
    case TheoremTag::T4_1_2:
      require(p.e > 0.0, tag, "e > 0");
      require_sigma(tag, p, true);
      break;
    case TheoremTag::T4_2_1:
      require(p.gamma > 0.0, tag, "gamma > 0");
      break;
    case TheoremTag::T4_2_2:
      require_sigma(tag, p, true);
      require(p.delta >= 0.0 && p.delta <= p.m, tag, "delta in [0, m]");
      require(p.gamma > p.delta, tag, "gamma > delta");
      break;
    case TheoremTag::T4_3:
      require_sigma(tag, p, true);
      require(p.gamma > p.m, tag, "gamma > m");
      break;
    case TheoremTag::T4_5:
      require(p.s > 1.0, tag, "s > 1");
      require(p.p > 1.0 && p.p <= p.s, tag, "p in (1, s]");
      break;
  }
}

double rhs_structural(TheoremTag tag, const PotentialField& v, const TorusGrid& g, const BoundParams& p) {
  check_hypotheses(tag, p);
  const double e = p.e;
  const double m = p.m;
  const double ds = p.d / p.s;
  switch (tag) {
    case TheoremTag::T3_1_1:
      return (std::pow(e, 1.0 - m) * theta(1.0 - e) + std::pow(e, ds - m) * theta(e - 1.0)) * vnorm_pow(v, g, m);
    case TheoremTag::T3_1_2: {
      const double vm = vnorm(v, g, m), vq = vnorm(v, g, p.q);
      return (std::pow(vm, m) + std::pow(std::log(2.0 + 1.0 / e), m) * std::pow(vq, m)) * theta(1.0 - e) +
             (std::pow(e, ds - m) * std::pow(vm, m) + std::pow(e, -m) * std::pow(std::min(vm, vq), m)) *
                 theta(e - 1.0);
    }
    case TheoremTag::T3_1_3:
      return std::pow(vnorm(v, g, p.q), m) *
             (std::pow(std::log(2.0 + 1.0 / e), m) * theta(1.0 - e) + std::pow(e, m * p.d / (p.s * p.q) - m) * theta(e - 1.0));
    case TheoremTag::T3_2_1:
      return vpos_pow(v, g, p.gamma + 1.0) + vpos_pow(v, g, p.gamma + ds);
    case TheoremTag::T3_2_2:
      return std::pow(vpos(v, g, p.q), m) + vpos_pow(v, g, p.gamma + ds);
    case TheoremTag::T3_3:
      return vpos_pow(v, g, m) + std::pow(vpos(v, g, p.q), m);
    case TheoremTag::T3_4:
      return vpos_pow(v, g, p.s);
    case TheoremTag::T4_1_1:
      return std::min(std::pow(e, 1.0 - m), std::pow(e, -m)) * vnorm_pow(v, g, m);
    case TheoremTag::T4_1_2:
      return std::pow(vnorm(v, g, p.q), m) * std::pow(std::min(std::log(2.0 + 1.0 / e), 1.0 / e), m);
    case TheoremTag::T4_2_1:
      return vpos_pow(v, g, p.gamma + 1.0);
    case TheoremTag::T4_2_2:
      return std::pow(vpos(v, g, p.q), m) + vpos_pow(v, g, m + p.gamma - p.delta);
    case TheoremTag::T4_3:
      return std::pow(vpos(v, g, p.q), m);
    case TheoremTag::T4_5:
      return vpos_pow(v, g, p.p);
  }
  return 0.0;
}

double lhs_functional(TheoremTag tag, const SymbolSpec& spec, const PotentialField& v, const TorusGrid& grid,
                      const BoundParams& p) {
  switch (tag) {
    case TheoremTag::T3_1_1:
    case TheoremTag::T3_1_2:
    case TheoremTag::T3_1_3:
    case TheoremTag::T4_1_1:
    case TheoremTag::T4_1_2:
      return schatten_norm_pow(bs_singular_values(spec, v, grid, p.e), p.m);
    case TheoremTag::T3_2_1:
    case TheoremTag::T3_2_2:
    case TheoremTag::T4_2_1:
    case TheoremTag::T4_2_2:
      return riesz_mean(negative_eigenvalues(spec, v, grid), p.gamma);
    case TheoremTag::T3_3:
    case TheoremTag::T4_3:
      return log_moment(negative_eigenvalues(spec, v, grid), p.gamma);
    case TheoremTag::T3_4:
    case TheoremTag::T4_5:
      return static_cast<double>(count_below(negative_eigenvalues(spec, v, grid), 0.0));
  }
  return 0.0;
}

std::string FamilySpec::name() const {
  std::string n = kind + "(a=" + fmt(amplitude);
  if (kind != "delta") n += ",size=" + fmt(size);
  if (kind == "random") n += ",seed=" + std::to_string(seed);
  return n + ")";
}

PotentialField make_family_potential(const TorusGrid& grid, const FamilySpec& f) {
  if (f.kind == "gaussian") return gaussian_potential(grid, f.amplitude, f.size);
  if (f.kind == "bump") return bump_potential(grid, f.amplitude, f.size);
  if (f.kind == "plateau") return plateau_potential(grid, f.amplitude, f.size);
  if (f.kind == "delta") return delta_potential(grid, f.amplitude * grid.cell_volume());
  if (f.kind == "random") return random_potential(grid, f.amplitude, f.size, f.seed);
  if (f.kind == "zero") return zero_potential(grid);
  throw std::invalid_argument("bounds: unknown family kind '" + f.kind + "'");
}

std::vector<FamilySpec> default_stress_families(double amplitude, std::uint64_t seed) {
  return {{"gaussian", amplitude, 2.0, 0},
          {"plateau", amplitude, 2.0, 0},
          {"delta", amplitude, 0.0, 0},
          {"random", amplitude, 2.0, seed}};
}

std::vector<FamilySpec> extended_stress_families(double amplitude, std::uint64_t seed) {
  return {{"gaussian", amplitude, 1.0, 0}, {"gaussian", amplitude, 2.0, 0}, {"gaussian", amplitude, 3.0, 0},
          {"bump", amplitude, 3.0, 0},     {"plateau", amplitude, 2.0, 0},  {"delta", amplitude, 0.0, 0},
          {"random", amplitude, 2.0, seed}};
}

BoundReport run_bound_family(TheoremTag tag, const SymbolSpec& spec, const TorusGrid& grid,
                             const std::vector<FamilySpec>& families, const BoundParams& params,
                             const std::vector<double>& kappas, double factor) {
  if (families.empty()) throw std::invalid_argument("bounds: empty family");
  if (kappas.empty()) throw std::invalid_argument("bounds: empty kappa grid");
  check_hypotheses(tag, params);
  BoundReport report;
  report.tag = tag;
  report.factor = factor;
  std::vector<double> ratios;
  for (const auto& fam : families) {
    const auto base = make_family_potential(grid, fam);
    for (double kappa : kappas) {
      const auto v = base.scaled(kappa);
      BoundRecord rec;
      rec.family = fam.name();
      rec.kappa = kappa;
      rec.instance = fam.name() + "@kappa=" + fmt(kappa);
      rec.lhs = lhs_functional(tag, spec, v, grid, params);
      rec.rhs = rhs_structural(tag, v, grid, params);
      rec.ratio = rec.rhs > 0.0 ? rec.lhs / rec.rhs : (rec.lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
      if (rec.lhs > 0.0) ratios.push_back(rec.ratio);
      report.records.push_back(rec);
    }
  }
  report.positive_instances = ratios.size();
  if (ratios.empty()) {
    report.pass = true;
    return report;
  }
  report.c_hat = *std::max_element(ratios.begin(), ratios.end());
  report.median_ratio = median(ratios);
  report.max_over_median = report.c_hat / report.median_ratio;
  report.pass = std::isfinite(report.max_over_median) && report.max_over_median <= factor;
  return report;
}

SchattenSweep schatten_e_sweep(const SymbolSpec& spec, const PotentialField& v, const TorusGrid& grid, double m,
                               const std::vector<double>& e_grid, std::size_t drop_largest) {
  SchattenSweep out;
  out.e = e_grid;
  std::sort(out.e.begin(), out.e.end(), std::greater<>());
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < out.e.size(); ++i) {
    const double val = schatten_norm_pow(bs_singular_values(spec, v, grid, out.e[i]), m);
    out.norm_pow.push_back(val);
    if (i >= drop_largest && val > 0.0) {
      lx.push_back(std::log(out.e[i]));
      ly.push_back(std::log(val));
    }
  }
  out.fitted = lx.size();
  if (lx.size() >= 2) {
    const auto line = fit_line(lx, ly);
    out.slope = line.slope;
    out.residual = line.rms_residual;
  }
  return out;
}

ClusterRate cluster_rate_check(const SpectrumResult& result, double q, double sigma_q, double norm_q) {
  (void)q;
  (void)norm_q;
  ClusterRate out;
  out.predicted = 1.0 / sigma_q;
  std::vector<double> e;
  for (double x : result.e) {
    if (x > 0.0 && x < 1.0) e.push_back(x);
  }
  std::sort(e.begin(), e.end(), std::greater<>());
  std::vector<double> lx, ly;
  for (std::size_t n = 0; n < e.size(); ++n) {
    lx.push_back(std::log(static_cast<double>(n + 1)));
    ly.push_back(std::log(std::log(1.0 / e[n])));
  }
  out.used = e.size();
  if (e.size() < 5) return out;
  const auto line = fit_line(lx, ly);
  out.slope = line.slope;
  out.residual = line.rms_residual;
  out.conclusive = true;
  return out;
}

WeakCouplingFit weak_coupling_sweep(const SymbolSpec& spec, const PotentialField& v, const TorusGrid& grid,
                                    const SurfaceMesh& mesh, const std::vector<double>& lambdas,
                                    const std::vector<int>& tracked, double resolution_factor) {
  if (lambdas.empty()) throw std::invalid_argument("weak coupling: empty lambda grid");
  for (int j : tracked) {
    if (j < 1) throw std::invalid_argument("weak coupling: tracked indices are 1-based");
  }
  WeakCouplingFit fit;
  fit.tracked = tracked;
  fit.resolution = spectral_resolution(spec, grid);
  fit.resolution_factor = resolution_factor;
  const double cutoff = std::max(fit.e_floor, resolution_factor * fit.resolution);

  const auto a_s = vs_eigenvalues(vs_operator(mesh, v, grid));
  for (int j : tracked) {
    fit.a_surface.push_back(static_cast<std::size_t>(j) <= a_s.size() ? a_s[static_cast<std::size_t>(j) - 1] : 0.0);
  }

  std::vector<double> sorted = lambdas;
  std::sort(sorted.begin(), sorted.end());
  for (double lambda : sorted) {
    if (!(lambda > 0.0)) throw std::invalid_argument("weak coupling: lambda must be positive");
    const auto res = negative_eigenvalues(spec, v.scaled(lambda), grid);
    WeakCouplingPoint pt;
    pt.lambda = lambda;
    for (int j : tracked) {
      const auto k = static_cast<std::size_t>(j) - 1;
      const double e = k < res.e.size() ? res.e[k] : std::numeric_limits<double>::quiet_NaN();
      pt.e.push_back(e);
      pt.used.push_back(std::isfinite(e) && e >= cutoff);
    }
    fit.points.push_back(pt);
  }
  if (is_bcs(spec.kind) && !fit.points.empty() && std::isfinite(fit.points.back().e[0])) {
    fit.precondition_ok = fit.points.back().e[0] < 0.1 * low_energy_window(spec);
  }

  fit.conclusive = true;
  for (std::size_t t = 0; t < tracked.size(); ++t) {
    std::vector<double> x, y;
    for (const auto& pt : fit.points) {
      if (!pt.used[t]) continue;
      x.push_back(pt.lambda);
      y.push_back(1.0 / (-2.0 * std::log(pt.e[t])));
    }
    double a = std::numeric_limits<double>::quiet_NaN();
    double window = std::numeric_limits<double>::quiet_NaN();
    if (x.size() >= 2) {
      // drop the largest lambda while that still moves the slope by more than 2%
      std::size_t n = x.size();
      double slope = fit_through_origin({x.begin(), x.begin() + n}, {y.begin(), y.begin() + n}).slope;
      while (n > 3) {
        const double next = fit_through_origin({x.begin(), x.begin() + n - 1}, {y.begin(), y.begin() + n - 1}).slope;
        if (std::abs(next - slope) <= 0.02 * std::abs(slope)) break;
        slope = next;
        --n;
      }
      a = slope;
      window = x[n - 1];
      fit.fitted_points.push_back(n);
    } else {
      fit.fitted_points.push_back(x.size());
      fit.conclusive = false;
    }
    fit.a_fit.push_back(a);
    fit.window_max_lambda.push_back(window);
    const double as = fit.a_surface[t];
    fit.mismatch.push_back(as > 0.0 && std::isfinite(a) ? std::abs(a - as) / as
                                                        : std::numeric_limits<double>::quiet_NaN());
  }
  return fit;
}

ClrStudy clr_scaling_study(const SymbolSpec& spec, double p, const PotentialField& v, const TorusGrid& grid,
                           const std::vector<double>& kappas, const std::vector<double>& alphas,
                           int sublevel_samples) {
  if (spec.kind != SymbolKind::LatticeBCS && spec.kind != SymbolKind::ContinuumBCSPower) {
    throw std::invalid_argument("clr: needs a fractional BCS symbol");
  }
  if (spec.kind != SymbolKind::LatticeBCS && !alphas.empty()) {
    throw std::invalid_argument("clr: the sub-level measure is computed on the Brillouin zone only");
  }
  const double s = 1.0 / spec.power_inv_s;
  if (!(s > 1.0)) throw std::invalid_argument("clr: needs s > 1");
  if (!(p > 1.0) || p > s) throw std::invalid_argument("clr: needs p in (1, s]");
  ClrStudy out;
  out.kappas = kappas;
  std::vector<double> lk, ln, lnorm;
  for (double kappa : kappas) {
    const auto vk = v.scaled(kappa);
    const auto n0 = count_below(negative_eigenvalues(spec, vk, grid), 0.0);
    const double np = vk.positive_norm_pow(grid, p);
    out.n0.push_back(n0);
    out.norm_pow.push_back(np);
    if (n0 > 0 && np > 0.0) {
      lk.push_back(std::log(kappa));
      ln.push_back(std::log(static_cast<double>(n0)));
      lnorm.push_back(std::log(np));
    }
  }
  if (lk.size() >= 2) {
    out.growth_exponent = fit_line(lnorm, ln).slope;
    out.kappa_exponent = fit_line(lk, ln).slope;
    out.growth_conclusive = true;
  }
  // |{|P - mu| <= alpha^(2s)}| through the unpowered BCS symbol
  SymbolSpec plain = spec;
  plain.power_inv_s = 1.0;
  const double total = std::pow(static_cast<double>(sublevel_samples), spec.dimension);
  auto measure = [&](double alpha) {
    return static_cast<double>(parallel::sublevel_count(plain, sublevel_samples, std::pow(alpha, 2.0 * s))) / total;
  };
  for (double alpha : alphas) {
    const double full = measure(alpha);
    const double half = measure(0.5 * alpha);
    out.alphas.push_back(alpha);
    out.sublevel_measure.push_back(full);
    out.halving_ratios.push_back(half > 0.0 ? full / half : std::numeric_limits<double>::infinity());
  }
  return out;
}

}  // namespace degenspec
