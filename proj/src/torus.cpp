#include "degenspec/torus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "degenspec/fft.hpp"
#include "degenspec/kernels.hpp"

namespace degenspec {

TorusGrid::TorusGrid(int d, int L, double h) : d_(d), L_(L), h_(h), n_(1) {
  if (d < 1) throw std::invalid_argument("grid: dimension must be >= 1");
  if (L < 1 || (L > 1 && L % 2 != 0)) throw std::invalid_argument("grid: L must be 1 or even");
  if (!(h > 0.0) || h > 1.0) throw std::invalid_argument("grid: spacing must lie in (0, 1]");
  for (int j = 0; j < d; ++j) {
    if (n_ > std::numeric_limits<std::size_t>::max() / static_cast<std::size_t>(L)) {
      throw std::invalid_argument("grid: too many points");
    }
    n_ *= static_cast<std::size_t>(L);
  }
}

double TorusGrid::cell_volume() const { return std::pow(h_, d_); }

std::vector<int> TorusGrid::multi_index(std::size_t idx) const {
  std::vector<int> mi(static_cast<std::size_t>(d_));
  for (int j = d_ - 1; j >= 0; --j) {
    mi[j] = static_cast<int>(idx % static_cast<std::size_t>(L_));
    idx /= static_cast<std::size_t>(L_);
  }
  return mi;
}

std::size_t TorusGrid::flat_index(const std::vector<int>& mi) const {
  if (static_cast<int>(mi.size()) != d_) throw std::invalid_argument("grid: index dimension mismatch");
  std::size_t idx = 0;
  for (int j = 0; j < d_; ++j) {
    const int m = ((mi[j] % L_) + L_) % L_;
    idx = idx * static_cast<std::size_t>(L_) + static_cast<std::size_t>(m);
  }
  return idx;
}

double TorusGrid::coordinate(int n) const { return h_ * wavenumber(n); }

int TorusGrid::wavenumber(int n) const { return n < L_ / 2 || L_ == 1 ? n : n - L_; }

std::string TorusGrid::descriptor() const {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(17);
  os << "torus(d=" << d_ << ",L=" << L_ << ",h=" << h_ << ")";
  return os.str();
}

double PotentialField::norm_pow(const TorusGrid& grid, double p) const {
  if (!(p > 0.0)) throw std::invalid_argument("potential: norm exponent must be positive");
  double s = 0.0;
  for (double v : values) s += std::pow(std::abs(v), p);
  return s * grid.cell_volume();
}

double PotentialField::lp_norm(const TorusGrid& grid, double p) const {
  return std::pow(norm_pow(grid, p), 1.0 / p);
}

double PotentialField::positive_norm_pow(const TorusGrid& grid, double p) const {
  return positive_part().norm_pow(grid, p);
}

double PotentialField::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

bool PotentialField::nonnegative() const {
  return std::all_of(values.begin(), values.end(), [](double v) { return v >= 0.0; });
}

PotentialField PotentialField::scaled(double kappa) const {
  PotentialField out = *this;
  for (double& v : out.values) v *= kappa;
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(17);
  os << kappa << "*" << descriptor;
  out.descriptor = os.str();
  return out;
}

PotentialField PotentialField::positive_part() const {
  PotentialField out = *this;
  for (double& v : out.values) v = std::max(v, 0.0);
  out.descriptor = "(" + descriptor + ")_+";
  return out;
}

namespace {

std::string describe(const std::string& name, std::initializer_list<std::pair<const char*, double>> params) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(17);
  os << name << "(";
  bool first = true;
  for (const auto& [k, v] : params) {
    if (!first) os << ",";
    os << k << "=" << v;
    first = false;
  }
  os << ")";
  return os.str();
}

double radius_sq(const TorusGrid& grid, std::size_t idx) {
  double r2 = 0.0;
  for (int n : grid.multi_index(idx)) {
    const double x = grid.coordinate(n);
    r2 += x * x;
  }
  return r2;
}

template <class F>
PotentialField radial(const TorusGrid& grid, std::string descriptor, F&& f) {
  PotentialField v;
  v.descriptor = std::move(descriptor);
  v.values.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) v.values[i] = f(radius_sq(grid, i));
  return v;
}

}  // namespace

PotentialField zero_potential(const TorusGrid& grid) {
  PotentialField v;
  v.descriptor = "zero";
  v.values.assign(grid.size(), 0.0);
  return v;
}

PotentialField gaussian_potential(const TorusGrid& grid, double amplitude, double width) {
  if (!(width > 0.0)) throw std::invalid_argument("potential: gaussian width must be positive");
  return radial(grid, describe("gaussian", {{"amplitude", amplitude}, {"width", width}}),
                [&](double r2) { return amplitude * std::exp(-r2 / (width * width)); });
}

PotentialField bump_potential(const TorusGrid& grid, double amplitude, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("potential: bump radius must be positive");
  return radial(grid, describe("bump", {{"amplitude", amplitude}, {"radius", radius}}), [&](double r2) {
    const double u = r2 / (radius * radius);
    return u < 1.0 ? amplitude * std::exp(1.0 - 1.0 / (1.0 - u)) : 0.0;
  });
}

PotentialField plateau_potential(const TorusGrid& grid, double amplitude, double radius) {
  if (!(radius >= 0.0)) throw std::invalid_argument("potential: plateau radius must be >= 0");
  return radial(grid, describe("plateau", {{"amplitude", amplitude}, {"radius", radius}}),
                [&](double r2) { return r2 <= radius * radius * (1.0 + 1e-12) ? amplitude : 0.0; });
}

PotentialField delta_potential(const TorusGrid& grid, double g) {
  PotentialField v = zero_potential(grid);
  v.descriptor = describe("delta", {{"g", g}});
  v.values[0] = g / grid.cell_volume();
  return v;
}

PotentialField random_potential(const TorusGrid& grid, double amplitude, double radius, std::uint64_t seed) {
  if (!(radius >= 0.0)) throw std::invalid_argument("potential: random support radius must be >= 0");
  std::mt19937_64 rng(seed);
  PotentialField v = zero_potential(grid);
  v.descriptor = describe("random", {{"amplitude", amplitude}, {"radius", radius}});
  v.seed = seed;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    // draw for every point so the field does not depend on the radius ordering
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    if (radius_sq(grid, i) <= radius * radius * (1.0 + 1e-12)) v.values[i] = amplitude * u;
  }
  return v;
}

PotentialField load_potential_csv(const TorusGrid& grid, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("potential: cannot open '" + path + "'");
  PotentialField v = zero_potential(grid);
  v.descriptor = "csv(" + path + ")";
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    row.imbue(std::locale::classic());
    std::vector<int> mi(static_cast<std::size_t>(grid.dim()));
    double value = 0.0;
    for (int& m : mi) row >> m;
    row >> value;
    std::string extra;
    if (!row || (row >> extra)) {
      throw std::runtime_error("potential: malformed row " + std::to_string(lineno) + " in '" + path + "'");
    }
    for (int m : mi) {
      if (m < -grid.points_per_axis() || m >= grid.points_per_axis()) {
        throw std::runtime_error("potential: index out of range on row " + std::to_string(lineno));
      }
    }
    v.values[grid.flat_index(mi)] = value;
  }
  return v;
}

PotentialField translate_potential(const TorusGrid& grid, const PotentialField& v, const std::vector<int>& shift) {
  if (static_cast<int>(shift.size()) != grid.dim()) throw std::invalid_argument("potential: shift dimension");
  PotentialField out = v;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    auto mi = grid.multi_index(i);
    for (int j = 0; j < grid.dim(); ++j) mi[j] += shift[j];
    out.values[grid.flat_index(mi)] = v.values[i];
  }
  return out;
}

PointCloud frequencies(const TorusGrid& grid) {
  PointCloud out(grid.dim());
  out.reserve(grid.size());
  const double scale = 1.0 / (grid.points_per_axis() * grid.spacing());
  std::vector<double> xi(static_cast<std::size_t>(grid.dim()));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    auto mi = grid.multi_index(i);
    for (int j = 0; j < grid.dim(); ++j) xi[j] = grid.wavenumber(mi[j]) * scale;
    out.push_back(xi);
  }
  return out;
}

std::vector<double> symbol_on_grid(const SymbolSpec& spec, const TorusGrid& grid) {
  if (spec.dimension != grid.dim()) throw std::invalid_argument("grid: symbol dimension mismatch");
  if (is_lattice(spec.kind) && !grid.lattice_mode()) {
    throw std::invalid_argument("grid: lattice symbols need h = 1");
  }
  const auto xi = frequencies(grid);
  std::vector<double> t(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) t[i] = eval_symbol(spec, xi[i]);
  return t;
}

std::vector<double> kernel_from_multiplier(const TorusGrid& grid, const std::vector<double>& multiplier) {
  if (multiplier.size() != grid.size()) throw std::invalid_argument("grid: multiplier size mismatch");
  std::vector<std::complex<double>> buf(multiplier.begin(), multiplier.end());
  fft::backward(grid, buf);
  std::vector<double> k(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) k[i] = buf[i].real();
  return k;
}

std::vector<std::complex<double>> apply_hamiltonian(const SymbolSpec& spec, const PotentialField& v,
                                                    const TorusGrid& grid,
                                                    const std::vector<std::complex<double>>& u) {
  if (u.size() != grid.size() || v.values.size() != grid.size()) {
    throw std::invalid_argument("hamiltonian: vector size does not match the grid");
  }
  const auto t = symbol_on_grid(spec, grid);
  std::vector<std::complex<double>> w = u;
  fft::forward(grid, w);
  for (std::size_t i = 0; i < w.size(); ++i) w[i] *= t[i];
  fft::backward(grid, w);
  for (std::size_t i = 0; i < w.size(); ++i) w[i] -= v.values[i] * u[i];
  return w;
}

Eigen::MatrixXd assemble_dense(const SymbolSpec& spec, const PotentialField& v, const TorusGrid& grid,
                               std::size_t dense_cap) {
  if (grid.size() > dense_cap) throw std::invalid_argument("hamiltonian: grid exceeds the dense cap");
  if (v.values.size() != grid.size()) throw std::invalid_argument("hamiltonian: potential size mismatch");
  const auto kernel = kernel_from_multiplier(grid, symbol_on_grid(spec, grid));
  TranslationBlock block;
  block.grid = &grid;
  block.kernel = &kernel;
  block.rows.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) block.rows[i] = i;
  block.cols = block.rows;
  block.left.assign(grid.size(), 1.0);
  block.right.assign(grid.size(), 1.0);
  Eigen::MatrixXd h;
  parallel::fill_translation_invariant(block, h);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) -= v.values[i];
  }
  Eigen::MatrixXd sym = 0.5 * (h + h.transpose());
  return sym;
}

AliasingCheck aliasing_check(const SymbolSpec& spec, const PotentialField& v, const TorusGrid& grid,
                             double factor) {
  AliasingCheck out;
  out.max_potential = v.max_abs();
  if (is_lattice(spec.kind)) return out;
  std::vector<double> xi(static_cast<std::size_t>(grid.dim()), 0.0);
  xi[0] = 0.5 / grid.spacing();
  out.cutoff_symbol = eval_symbol(spec, xi);
  out.ok = out.cutoff_symbol >= factor * out.max_potential;
  return out;
}

double spectral_resolution(const SymbolSpec& spec, const TorusGrid& grid) {
  double best = std::numeric_limits<double>::infinity();
  for (double t : symbol_on_grid(spec, grid)) {
    if (std::abs(t) > 1e-12) best = std::min(best, std::abs(t));
  }
  return best;
}

}  // namespace degenspec
