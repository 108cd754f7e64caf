#include "degenspec/surface.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

#include "degenspec/kernels.hpp"
#include "degenspec/linalg.hpp"
#include "degenspec/numerics.hpp"

namespace degenspec {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> sheet_levels(const SymbolSpec& spec, double t, double guard) {
  std::vector<double> candidates;
  if (is_bcs(spec.kind)) {
    if (!(t >= 0.0)) throw std::invalid_argument("surface: BCS level sets need t >= 0");
    const double ref = reference_level(spec);
    if (t == 0.0) {
      candidates = {ref};
    } else {
      candidates = {ref - t, ref + t};
    }
  } else {
    candidates = {t};
  }
  const std::vector<double> z = is_lattice(spec.kind) ? critical_values(spec) : std::vector<double>{1.0};
  std::vector<double> levels;
  for (double c : candidates) {
    for (double zc : z) {
      if (std::abs(c - zc) < guard) throw std::invalid_argument("surface: level lies on a critical value");
    }
    const bool nonempty = is_lattice(spec.kind) ? (c > -1.0 && c < 1.0) : (c < 1.0);
    if (nonempty) levels.push_back(c);
  }
  if (levels.empty()) throw std::invalid_argument("surface: level set is empty");
  return levels;
}

double wrap_zone(double x) { return x - std::floor(x + 0.5); }

struct Projector {
  const SymbolSpec& spec;
  double tolerance;

  double gradient_norm(std::span<const double> xi) const {
    double g2 = 0.0;
    for (double g : grad_symbol(spec, xi)) g2 += g * g;
    return std::sqrt(g2);
  }

  void project(std::vector<double>& xi, double level) const {
    for (int it = 0; it < 60; ++it) {
      const double f = base_symbol(spec, xi) - level;
      if (std::abs(f) <= tolerance) break;
      const auto g = grad_symbol(spec, xi);
      double g2 = 0.0;
      for (double v : g) g2 += v * v;
      if (!(g2 > 0.0)) throw std::runtime_error("surface: vanishing gradient during projection");
      for (std::size_t j = 0; j < xi.size(); ++j) xi[j] -= f * g[j] / g2;
    }
    if (is_lattice(spec.kind)) {
      for (double& x : xi) x = wrap_zone(x);
    }
  }
};

// Root of P - level on the segment a + s (b - a), s in [0, 1].
std::vector<double> edge_root(const SymbolSpec& spec, double level, const std::vector<double>& a,
                              const std::vector<double>& b, double fa, double fb) {
  std::vector<double> x(a.size());
  auto at = [&](double s) {
    for (std::size_t j = 0; j < a.size(); ++j) x[j] = a[j] + s * (b[j] - a[j]);
    return base_symbol(spec, x) - level;
  };
  double s = 0.0;
  if (fa == 0.0) {
    s = 0.0;
  } else if (fb == 0.0) {
    s = 1.0;
  } else {
    std::uintmax_t iters = 100;
    auto r = boost::math::tools::toms748_solve(at, 0.0, 1.0, fa, fb, boost::math::tools::eps_tolerance<double>(50),
                                               iters);
    s = 0.5 * (r.first + r.second);
  }
  for (std::size_t j = 0; j < a.size(); ++j) x[j] = a[j] + s * (b[j] - a[j]);
  return x;
}

struct Box {
  double lo;
  double step;
  int n;
};

Box domain_box(const SymbolSpec& spec, const std::vector<double>& levels, int n) {
  if (n < 4) throw std::invalid_argument("surface: resolution must be >= 4");
  if (is_lattice(spec.kind)) return {-0.5, 1.0 / n, n};
  double rho = 0.0;
  for (double c : levels) rho = std::max(rho, std::sqrt((1.0 - c) / (4.0 * kPi * kPi)));
  const double half = 1.25 * rho;
  return {-half, 2.0 * half / n, n};
}

void add_node(SurfaceMesh& mesh, const Projector& proj, std::vector<double> centre, double measure, double level) {
  proj.project(centre, level);
  const double g = proj.gradient_norm(centre);
  if (!(g > 0.0)) throw std::runtime_error("surface: vanishing gradient on the level set");
  mesh.points.push_back(centre);
  mesh.weights.push_back(measure / g);
  mesh.levels.push_back(level);
}

void march_squares(const SymbolSpec& spec, double level, const Box& box, const Projector& proj, SurfaceMesh& mesh) {
  const int n = box.n;
  const int m = n + 1;
  std::vector<double> f(static_cast<std::size_t>(m) * m);
  std::vector<double> xi(2);
  auto vertex = [&](int i, int j) { return std::vector<double>{box.lo + i * box.step, box.lo + j * box.step}; };
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      xi = vertex(i, j);
      f[static_cast<std::size_t>(i) * m + j] = base_symbol(spec, xi) - level;
    }
  }
  auto fv = [&](int i, int j) { return f[static_cast<std::size_t>(i) * m + j]; };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const std::array<std::array<int, 2>, 4> c = {{{i, j}, {i + 1, j}, {i + 1, j + 1}, {i, j + 1}}};
      std::array<double, 4> val{};
      std::array<bool, 4> pos{};
      for (int k = 0; k < 4; ++k) {
        val[k] = fv(c[k][0], c[k][1]);
        pos[k] = val[k] > 0.0;
      }
      std::array<int, 4> crossing{};
      int nc = 0;
      for (int e = 0; e < 4; ++e) {
        if (pos[e] != pos[(e + 1) % 4]) crossing[nc++] = e;
      }
      if (nc == 0) continue;
      auto root = [&](int e) {
        const int a = e, b = (e + 1) % 4;
        return edge_root(spec, level, vertex(c[a][0], c[a][1]), vertex(c[b][0], c[b][1]), val[a], val[b]);
      };
      auto segment = [&](int e0, int e1) {
        const auto p = root(e0);
        const auto q = root(e1);
        const double len = std::hypot(q[0] - p[0], q[1] - p[1]);
        if (len == 0.0) return;
        add_node(mesh, proj, {0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])}, len, level);
      };
      if (nc == 2) {
        segment(crossing[0], crossing[1]);
      } else {
        std::vector<double> centre = {box.lo + (i + 0.5) * box.step, box.lo + (j + 0.5) * box.step};
        const bool centre_pos = base_symbol(spec, centre) - level > 0.0;
        if (centre_pos == pos[0]) {
          segment(0, 1);
          segment(2, 3);
        } else {
          segment(3, 0);
          segment(1, 2);
        }
      }
    }
  }
}

void march_tetrahedra(const SymbolSpec& spec, double level, const Box& box, const Projector& proj,
                      SurfaceMesh& mesh) {
  const int n = box.n;
  const int m = n + 1;
  std::vector<double> f(static_cast<std::size_t>(m) * m * m);
  auto vertex = [&](int i, int j, int k) {
    return std::vector<double>{box.lo + i * box.step, box.lo + j * box.step, box.lo + k * box.step};
  };
  auto flat = [&](int i, int j, int k) { return (static_cast<std::size_t>(i) * m + j) * m + k; };
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      for (int k = 0; k < m; ++k) f[flat(i, j, k)] = base_symbol(spec, vertex(i, j, k)) - level;
    }
  }
  // six tetrahedra sharing the cube diagonal 0 -> 7, vertices coded by bits (x, y, z)
  static const std::array<std::array<int, 4>, 6> tets = {{{0, 1, 3, 7}, {0, 1, 5, 7}, {0, 2, 3, 7},
                                                          {0, 2, 6, 7}, {0, 4, 5, 7}, {0, 4, 6, 7}}};
  auto tri = [&](const std::vector<double>& a, const std::vector<double>& b, const std::vector<double>& c) {
    std::array<double, 3> u{}, v{};
    for (int q = 0; q < 3; ++q) {
      u[q] = b[q] - a[q];
      v[q] = c[q] - a[q];
    }
    const double cx = u[1] * v[2] - u[2] * v[1];
    const double cy = u[2] * v[0] - u[0] * v[2];
    const double cz = u[0] * v[1] - u[1] * v[0];
    const double area = 0.5 * std::sqrt(cx * cx + cy * cy + cz * cz);
    if (area == 0.0) return;
    std::vector<double> centre(3);
    for (int q = 0; q < 3; ++q) centre[q] = (a[q] + b[q] + c[q]) / 3.0;
    add_node(mesh, proj, std::move(centre), area, level);
  };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        std::array<double, 8> cv{};
        bool any_pos = false, any_neg = false;
        for (int code = 0; code < 8; ++code) {
          cv[code] = f[flat(i + (code & 1), j + ((code >> 1) & 1), k + ((code >> 2) & 1))];
          (cv[code] > 0.0 ? any_pos : any_neg) = true;
        }
        if (!any_pos || !any_neg) continue;
        auto corner = [&](int code) { return vertex(i + (code & 1), j + ((code >> 1) & 1), k + ((code >> 2) & 1)); };
        auto root = [&](int a, int b) { return edge_root(spec, level, corner(a), corner(b), cv[a], cv[b]); };
        for (const auto& t : tets) {
          std::vector<int> p, q;
          for (int code : t) (cv[code] > 0.0 ? p : q).push_back(code);
          if (p.empty() || q.empty()) continue;
          if (p.size() == 1 || q.size() == 1) {
            const auto& lone = p.size() == 1 ? p : q;
            const auto& rest = p.size() == 1 ? q : p;
            tri(root(lone[0], rest[0]), root(lone[0], rest[1]), root(lone[0], rest[2]));
          } else {
            const auto a = root(p[0], q[0]);
            const auto b = root(p[0], q[1]);
            const auto c = root(p[1], q[1]);
            const auto d = root(p[1], q[0]);
            tri(a, b, c);
            tri(a, c, d);
          }
        }
      }
    }
  }
}

double min_extent(const SurfaceMesh& mesh) {
  const int d = mesh.points.dim();
  double best = std::numeric_limits<double>::infinity();
  for (int j = 0; j < d; ++j) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t i = 0; i < mesh.points.size(); ++i) {
      lo = std::min(lo, mesh.points[i][j]);
      hi = std::max(hi, mesh.points[i][j]);
    }
    best = std::min(best, hi - lo);
  }
  return best;
}

}  // namespace

SurfaceMesh extract_level_set(const SymbolSpec& spec, double t, const LevelSetOptions& options) {
  if (spec.dimension != 2 && spec.dimension != 3) throw std::invalid_argument("surface: only d = 2, 3");
  const auto levels = sheet_levels(spec, t, options.critical_guard);
  const Box box = domain_box(spec, levels, options.resolution);
  const Projector proj{spec, options.newton_tolerance};
  SurfaceMesh mesh;
  mesh.points = PointCloud(spec.dimension);
  mesh.t = t;
  mesh.resolution = options.resolution;
  mesh.cell_size = box.step;
  mesh.descriptor = "level_set(" + to_string(spec.kind) + ",t=" + std::to_string(t) +
                    ",resolution=" + std::to_string(options.resolution) + ")";
  for (double c : levels) {
    if (spec.dimension == 2) {
      march_squares(spec, c, box, proj, mesh);
    } else {
      march_tetrahedra(spec, c, box, proj, mesh);
    }
  }
  if (mesh.points.empty()) throw std::runtime_error("surface: no level-set points found at this resolution");
  return mesh;
}

double surface_measure_total(const SurfaceMesh& mesh) {
  double s = 0.0;
  for (double w : mesh.weights) s += w;
  return s;
}

std::complex<double> surface_ft(const SurfaceMesh& mesh, std::span<const double> x) {
  PointCloud xs(mesh.points.dim());
  xs.push_back(x);
  return serial::surface_ft(mesh.points, mesh.weights, xs)[0];
}

std::vector<std::complex<double>> surface_ft(const SurfaceMesh& mesh, const PointCloud& xs) {
  return parallel::surface_ft(mesh.points, mesh.weights, xs);
}

double nyquist_radius(const SurfaceMesh& mesh) {
  const std::size_t n = mesh.points.size();
  const int d = mesh.points.dim();
  if (n < 2) throw std::invalid_argument("surface: need at least two mesh points");
  const double cell = mesh.cell_size > 0.0 ? mesh.cell_size : 1e-3;
  auto key_of = [&](const std::array<std::int64_t, 3>& c) {
    return ((c[0] + (1 << 20)) << 42) ^ ((c[1] + (1 << 20)) << 21) ^ (c[2] + (1 << 20));
  };
  auto cell_of = [&](std::span<const double> p) {
    std::array<std::int64_t, 3> c{0, 0, 0};
    for (int j = 0; j < d; ++j) c[j] = static_cast<std::int64_t>(std::floor(p[j] / cell));
    return c;
  };
  std::unordered_map<std::int64_t, std::vector<std::size_t>> buckets;
  for (std::size_t i = 0; i < n; ++i) buckets[key_of(cell_of(mesh.points[i]))].push_back(i);

  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto p = mesh.points[i];
    const auto c = cell_of(p);
    double best = std::numeric_limits<double>::infinity();
    for (int ring = 1; ring <= 64 && !std::isfinite(best); ring *= 2) {
      const int rz = d == 3 ? ring : 0;
      for (int a = -ring; a <= ring; ++a) {
        for (int b = -ring; b <= ring; ++b) {
          for (int e = -rz; e <= rz; ++e) {
            auto it = buckets.find(key_of({c[0] + a, c[1] + b, c[2] + e}));
            if (it == buckets.end()) continue;
            for (std::size_t k : it->second) {
              if (k == i) continue;
              double r2 = 0.0;
              for (int j = 0; j < d; ++j) {
                const double dx = mesh.points[k][j] - p[j];
                r2 += dx * dx;
              }
              if (r2 > 0.0) best = std::min(best, r2);
            }
          }
        }
      }
      // a neighbour found in the ring is the nearest only within ring * cell
      if (std::isfinite(best) && std::sqrt(best) > ring * cell) best = std::numeric_limits<double>::infinity();
    }
    if (!std::isfinite(best)) throw std::runtime_error("surface: isolated mesh point");
    total += std::sqrt(best);
  }
  return 1.0 / (8.0 * (total / static_cast<double>(n)));
}

PointCloud default_directions(int d) {
  PointCloud dirs(d);
  if (d == 2) {
    for (int k = 0; k < 16; ++k) {
      const double a = kPi * k / 16.0;
      dirs.push_back(std::vector<double>{std::cos(a), std::sin(a)});
    }
  } else if (d == 3) {
    for (int a = -1; a <= 1; ++a) {
      for (int b = -1; b <= 1; ++b) {
        for (int c = -1; c <= 1; ++c) {
          if (a == 0 && b == 0 && c == 0) continue;
          const double r = std::sqrt(static_cast<double>(a * a + b * b + c * c));
          dirs.push_back(std::vector<double>{a / r, b / r, c / r});
        }
      }
    }
  } else {
    throw std::invalid_argument("surface: directions only for d = 2, 3");
  }
  return dirs;
}

DecayFit decay_rate(const SurfaceMesh& mesh, const PointCloud& directions, const std::vector<double>& radii,
                    int samples_per_shell) {
  if (radii.size() < 4) throw std::invalid_argument("decay: need at least four radii");
  if (!std::is_sorted(radii.begin(), radii.end()) || !(radii.front() > 0.0)) {
    throw std::invalid_argument("decay: radii must be positive and increasing");
  }
  if (directions.dim() != mesh.points.dim() || directions.empty()) {
    throw std::invalid_argument("decay: direction dimension mismatch");
  }
  if (samples_per_shell < 2) throw std::invalid_argument("decay: need at least two samples per shell");
  DecayFit fit;
  fit.nyquist = nyquist_radius(mesh);
  if (radii.back() > fit.nyquist * (1.0 + 1e-12)) throw std::invalid_argument("decay: radii exceed the Nyquist guard");
  const double period = 1.0 / min_extent(mesh);
  const int d = mesh.points.dim();

  const std::size_t shells = radii.size() - 1;
  std::vector<double> lo(shells), hi(shells);
  PointCloud xs(d);
  for (std::size_t s = 0; s < shells; ++s) {
    lo[s] = radii[s];
    hi[s] = std::min(std::max(radii[s + 1], radii[s] + period), fit.nyquist);
    for (std::size_t q = 0; q < directions.size(); ++q) {
      for (int k = 0; k < samples_per_shell; ++k) {
        const double r = lo[s] + (hi[s] - lo[s]) * k / (samples_per_shell - 1);
        std::vector<double> x(static_cast<std::size_t>(d));
        for (int j = 0; j < d; ++j) x[j] = r * directions[q][j];
        xs.push_back(x);
      }
    }
  }
  const auto ft = surface_ft(mesh, xs);
  const std::size_t per_shell = directions.size() * static_cast<std::size_t>(samples_per_shell);
  std::vector<double> lx, ly;
  for (std::size_t s = 0; s < shells; ++s) {
    double env = 0.0;
    for (std::size_t k = 0; k < per_shell; ++k) env = std::max(env, std::abs(ft[s * per_shell + k]));
    const double centre = std::sqrt(lo[s] * hi[s]);
    fit.radii.push_back(centre);
    fit.envelope.push_back(env);
    if (env > 0.0) {
      lx.push_back(std::log(centre));
      ly.push_back(std::log(env));
    }
  }
  if (lx.size() < 3) throw std::runtime_error("decay: too few nonzero envelope samples");
  const auto line = fit_line(lx, ly);
  fit.r_hat = -line.slope;
  fit.residual = line.rms_residual;
  return fit;
}

std::vector<double> default_decay_radii(const SurfaceMesh& mesh, double r_min, int count) {
  const double nyq = nyquist_radius(mesh);
  if (!(nyq > 2.0 * r_min)) throw std::invalid_argument("decay: mesh too coarse for the requested radius band");
  return geometric_grid(r_min, nyq, count);
}

Eigen::MatrixXcd vs_operator(const SurfaceMesh& mesh, const PotentialField& v, const TorusGrid& grid) {
  if (v.values.size() != grid.size()) throw std::invalid_argument("vs: potential size mismatch");
  if (grid.dim() != mesh.points.dim()) throw std::invalid_argument("vs: dimension mismatch");
  PotentialSamples samples;
  samples.positions = PointCloud(grid.dim());
  const double vol = grid.cell_volume();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (v.values[i] == 0.0) continue;
    if (!std::isfinite(v.values[i])) throw std::invalid_argument("vs: potential must be real and finite");
    std::vector<double> x;
    for (int n : grid.multi_index(i)) x.push_back(grid.coordinate(n));
    samples.positions.push_back(x);
    samples.values.push_back(v.values[i] * vol);
  }
  return parallel::vs_matrix(mesh.points, mesh.weights, samples);
}

std::vector<double> vs_eigenvalues(const Eigen::MatrixXcd& b) {
  const Eigen::VectorXd w = linalg::herm_eigenvalues(b);
  std::vector<double> out(w.data(), w.data() + w.size());
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

}  // namespace degenspec
