#include "degenspec/app.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <iomanip>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

#include "degenspec/io.hpp"
#include "degenspec/kernels.hpp"
#include "degenspec/numerics.hpp"
#include "degenspec/schatten.hpp"
#include "degenspec/spectra.hpp"
#include "degenspec/surface.hpp"

namespace degenspec::app {

namespace fs = std::filesystem;

namespace {

class Reader {
 public:
  Reader(const json& j, std::string where) : obj_(j), where_(std::move(where)) {
    if (!obj_.is_object()) throw ConfigError(where_ + ": expected an object");
  }

  bool has(const std::string& key) const { return obj_.contains(key); }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return obj_.at(key);
  }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    return required_number(key);
  }

  double required_number(const std::string& key) {
    if (!has(key)) throw ConfigError(where_ + ": missing '" + key + "'");
    const auto& v = raw(key);
    if (!v.is_number()) throw ConfigError(where_ + "." + key + ": expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(where_ + "." + key + ": must be finite");
    return x;
  }

  long long integer(const std::string& key, long long fallback) {
    if (!has(key)) return fallback;
    const auto& v = raw(key);
    if (!v.is_number_integer()) throw ConfigError(where_ + "." + key + ": expected an integer");
    return v.get<long long>();
  }

  std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) {
    if (!has(key)) return fallback;
    const auto& v = raw(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
      throw ConfigError(where_ + "." + key + ": expected a nonnegative integer");
    }
    return v.get<std::uint64_t>();
  }

  std::string string(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const auto& v = raw(key);
    if (!v.is_string()) throw ConfigError(where_ + "." + key + ": expected a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(const std::string& key) {
    const auto& v = raw(key);
    if (!v.is_array() || v.empty()) throw ConfigError(where_ + "." + key + ": expected a nonempty array of numbers");
    std::vector<double> out;
    for (const auto& x : v) {
      if (!x.is_number()) throw ConfigError(where_ + "." + key + ": expected numbers");
      out.push_back(x.get<double>());
      if (!std::isfinite(out.back())) throw ConfigError(where_ + "." + key + ": values must be finite");
    }
    return out;
  }

  void finish() const {
    for (const auto& [k, v] : obj_.items()) {
      (void)v;
      if (!seen_.count(k)) throw ConfigError(where_ + ": unknown key '" + k + "'");
    }
  }

  const std::string& where() const { return where_; }

 private:
  const json& obj_;
  std::string where_;
  std::set<std::string> seen_;
};

void check(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

bool is_continuum_tag(TheoremTag t) {
  switch (t) {
    case TheoremTag::T3_1_1:
    case TheoremTag::T3_1_2:
    case TheoremTag::T3_1_3:
    case TheoremTag::T3_2_1:
    case TheoremTag::T3_2_2:
    case TheoremTag::T3_3:
    case TheoremTag::T3_4:
      return true;
    default:
      return false;
  }
}

bool is_schatten_tag(TheoremTag t) {
  return t == TheoremTag::T3_1_1 || t == TheoremTag::T3_1_2 || t == TheoremTag::T3_1_3 ||
         t == TheoremTag::T4_1_1 || t == TheoremTag::T4_1_2;
}

std::string tag_file_stem(TheoremTag t) {
  std::string s = to_string(t);
  std::string out;
  for (char c : s) {
    if (c == '.' || c == '(') {
      out += '_';
    } else if (c != ')') {
      out += c;
    }
  }
  return out;
}

SymbolSpec parse_symbol(Reader& r, double& epsilon) {
  SymbolSpec s;
  try {
    s.kind = symbol_kind_from_string(r.string("kind", ""));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("symbol.kind: ") + e.what());
  }
  const auto d = r.integer("d", -1);
  check(d >= 1 && d <= 3, "symbol.d: must be 1, 2 or 3");
  s.dimension = static_cast<int>(d);
  const double s_exp = r.number("s", 1.0);
  check(s_exp >= 1.0, "symbol.s: must be >= 1");
  s.power_inv_s = 1.0 / s_exp;
  if (s.kind == SymbolKind::LatticeBCS) {
    s.mu = r.required_number("mu");
    const auto base = r.string("base", "Standard");
    check(base == "Standard" || base == "MV", "symbol.base: must be Standard or MV");
    s.base = base == "MV" ? LatticeBase::MV : LatticeBase::Standard;
  } else {
    check(!r.has("mu"), "symbol.mu: only LatticeBCS takes a Fermi level");
    check(!r.has("base"), "symbol.base: only LatticeBCS takes a base");
  }
  epsilon = r.number("epsilon", 1e-2);
  check(epsilon >= 0.0, "symbol.epsilon: must be >= 0");
  r.finish();
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("symbol: ") + e.what());
  }
  return s;
}

GridConfig parse_grid(Reader& r, int symbol_d) {
  GridConfig g;
  g.d = static_cast<int>(r.integer("d", symbol_d));
  check(g.d == symbol_d, "grid.d: must match symbol.d");
  const auto L = r.integer("L", -1);
  check(L >= 1 && (L == 1 || L % 2 == 0), "grid.L: must be 1 or a positive even integer");
  g.L = static_cast<int>(L);
  g.h = r.number("h", 1.0);
  check(g.h > 0.0 && g.h <= 1.0, "grid.h: must lie in (0, 1]");
  r.finish();
  return g;
}

PotentialConfig parse_potential(Reader& r) {
  PotentialConfig p;
  p.generator = r.string("generator", "");
  const std::string& gname = p.generator;
  if (gname == "zero") {
  } else if (gname == "gaussian") {
    p.amplitude = r.required_number("amplitude");
    p.width = r.required_number("width");
    check(p.width > 0.0, "potential.width: must be positive");
  } else if (gname == "bump" || gname == "plateau") {
    p.amplitude = r.required_number("amplitude");
    p.radius = r.required_number("radius");
    check(p.radius >= 0.0, "potential.radius: must be >= 0");
  } else if (gname == "delta") {
    p.g = r.required_number("g");
  } else if (gname == "random") {
    p.amplitude = r.required_number("amplitude");
    p.radius = r.required_number("radius");
    p.seed = r.unsigned_integer("seed", 0);
    check(p.radius >= 0.0, "potential.radius: must be >= 0");
  } else if (gname == "csv") {
    p.path = r.string("path", "");
    check(!p.path.empty(), "potential.path: required for the csv generator");
  } else {
    throw ConfigError("potential.generator: unknown generator '" + gname + "'");
  }
  r.finish();
  return p;
}

std::vector<FamilySpec> parse_families(Reader& task) {
  const double amplitude = task.number("family_amplitude", 1.0);
  const std::uint64_t seed = task.unsigned_integer("family_seed", 0);
  if (!task.has("families")) return default_stress_families(amplitude, seed);
  const auto& f = task.raw("families");
  if (f.is_string()) {
    const auto name = f.get<std::string>();
    if (name == "default") return default_stress_families(amplitude, seed);
    if (name == "extended") return extended_stress_families(amplitude, seed);
    throw ConfigError("task.families: expected 'default', 'extended' or a list");
  }
  check(f.is_array() && !f.empty(), "task.families: expected 'default', 'extended' or a nonempty list");
  std::vector<FamilySpec> out;
  for (std::size_t i = 0; i < f.size(); ++i) {
    Reader r(f[i], "task.families[" + std::to_string(i) + "]");
    FamilySpec s;
    s.kind = r.string("kind", "");
    check(s.kind == "gaussian" || s.kind == "bump" || s.kind == "plateau" || s.kind == "delta" ||
              s.kind == "random" || s.kind == "zero",
          r.where() + ".kind: unknown family");
    s.amplitude = r.number("amplitude", amplitude);
    s.size = r.number("size", 2.0);
    s.seed = r.unsigned_integer("seed", seed);
    r.finish();
    out.push_back(s);
  }
  return out;
}

void parse_task(RunConfig& cfg, Reader& task) {
  const auto& c = cfg.command;
  if (c == "spectrum") {
    cfg.spectrum.dense_cap = static_cast<std::size_t>(task.integer("dense_cap", 8192));
  } else if (c == "bs") {
    check(task.has("e"), "task.e: required e-grid for bs");
    cfg.bs.e = task.numbers("e");
    for (double e : cfg.bs.e) check(e > 0.0, "task.e: values must be positive");
    cfg.bs.dense_cap = static_cast<std::size_t>(task.integer("dense_cap", 8192));
  } else if (c == "surface") {
    check(task.has("t"), "task.t: required level list for surface");
    cfg.surface.t = task.numbers("t");
    cfg.surface.resolution = static_cast<int>(task.integer("resolution", 512));
    cfg.surface.critical_guard = task.number("critical_guard", 0.05);
    cfg.surface.r_min = task.number("r_min", 4.0);
    cfg.surface.radii_count = static_cast<int>(task.integer("radii_count", 12));
    cfg.surface.samples_per_shell = static_cast<int>(task.integer("samples_per_shell", 32));
    check(cfg.surface.resolution >= 4 && cfg.surface.resolution <= 8192, "task.resolution: must lie in [4, 8192]");
    check(cfg.surface.critical_guard >= 1e-6, "task.critical_guard: must be >= 1e-6");
    check(cfg.surface.r_min > 0.0, "task.r_min: must be positive");
    check(cfg.surface.radii_count >= 4, "task.radii_count: must be >= 4");
    check(cfg.surface.samples_per_shell >= 2, "task.samples_per_shell: must be >= 2");
  } else if (c == "weak-coupling") {
    if (task.has("lambdas")) {
      check(!task.has("lambda_min") && !task.has("lambda_max") && !task.has("lambda_count"),
            "task: give either lambdas or lambda_min/lambda_max/lambda_count");
      cfg.weak_coupling.lambdas = task.numbers("lambdas");
    } else {
      const double lo = task.required_number("lambda_min");
      const double hi = task.required_number("lambda_max");
      const auto n = task.integer("lambda_count", 8);
      check(lo > 0.0 && hi > lo && n >= 2, "task: need 0 < lambda_min < lambda_max and lambda_count >= 2");
      cfg.weak_coupling.lambdas = geometric_grid(lo, hi, static_cast<int>(n));
    }
    for (double l : cfg.weak_coupling.lambdas) check(l > 0.0, "task.lambdas: values must be positive");
    if (task.has("tracked")) {
      cfg.weak_coupling.tracked.clear();
      for (double j : task.numbers("tracked")) {
        check(j >= 1.0 && j == std::floor(j), "task.tracked: 1-based integer indices");
        cfg.weak_coupling.tracked.push_back(static_cast<int>(j));
      }
    }
    cfg.weak_coupling.resolution = static_cast<int>(task.integer("resolution", 512));
    cfg.weak_coupling.resolution_factor = task.number("resolution_factor", 10.0);
    check(cfg.weak_coupling.resolution >= 4, "task.resolution: must be >= 4");
  } else if (c == "bounds") {
    check(task.has("tags"), "task.tags: required list of theorem tags");
    const auto& tags = task.raw("tags");
    check(tags.is_array() && !tags.empty(), "task.tags: expected a nonempty list");
    for (const auto& t : tags) {
      check(t.is_string(), "task.tags: expected strings");
      try {
        cfg.bounds.tags.push_back(theorem_tag_from_string(t.get<std::string>()));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("task.tags: ") + e.what());
      }
    }
    auto& p = cfg.bounds.params;
    p.d = cfg.symbol.dimension;
    p.epsilon = cfg.epsilon;
    p.q = task.number("q", 1.0);
    p.r = task.number("r", 0.0);
    p.delta = task.number("delta", 0.0);
    p.gamma = task.number("gamma", 1.0);
    p.e = task.number("e", 1.0);
    p.p = task.number("p", 2.0);
    double default_m = 2.0;
    if (p.r > 0.0) {
      try {
        default_m = sigma_exponent_general(ExponentTable{p.d, p.r, p.epsilon}, p.q);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("task: ") + e.what());
      }
    }
    p.m = task.number("m", default_m);
    const bool continuum = !is_lattice(cfg.symbol.kind);
    double default_s = 1.0 / cfg.symbol.power_inv_s;
    if (continuum && cfg.symbol.kind == SymbolKind::ContinuumBCS) default_s = growth_exponent(cfg.symbol);
    p.s = task.number("s", default_s);
    if (task.has("kappas")) cfg.bounds.kappas = task.numbers("kappas");
    for (double k : cfg.bounds.kappas) check(k > 0.0, "task.kappas: values must be positive");
    cfg.bounds.factor = task.number("factor", 10.0);
    check(cfg.bounds.factor >= 1.0, "task.factor: must be >= 1");
    cfg.bounds.families = parse_families(task);
    if (task.has("e_grid")) {
      cfg.bounds.e_grid = task.numbers("e_grid");
      for (double e : cfg.bounds.e_grid) check(e > 0.0, "task.e_grid: values must be positive");
    }
    task.finish();
    for (auto t : cfg.bounds.tags) {
      check(is_continuum_tag(t) == continuum,
            "task.tags: " + to_string(t) + (continuum ? " is a lattice theorem" : " is a continuum theorem"));
      if (t == TheoremTag::T3_4) {
        check(cfg.symbol.kind == SymbolKind::ContinuumBCSPower, "task.tags: T3.4 needs ContinuumBCSPower");
      }
      if (t == TheoremTag::T4_5) {
        check(cfg.symbol.kind == SymbolKind::LatticeBCS && cfg.symbol.power_inv_s < 1.0,
              "task.tags: T4.5 needs LatticeBCS with s > 1");
      }
      try {
        check_hypotheses(t, p);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("task: ") + e.what());
      }
    }
  }
  task.finish();
}

json families_json(const std::vector<FamilySpec>& fams) {
  json a = json::array();
  for (const auto& f : fams) {
    json j;
    j["kind"] = f.kind;
    j["amplitude"] = f.amplitude;
    j["size"] = f.size;
    j["seed"] = f.seed;
    a.push_back(j);
  }
  return a;
}

std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

void check_aliasing(const RunConfig& cfg, const PotentialField& v, const TorusGrid& grid) {
  if (is_lattice(cfg.symbol.kind)) return;
  const auto a = aliasing_check(cfg.symbol, v, grid);
  if (!a.ok) {
    throw ConfigError("grid: continuum cutoff symbol " + io::format_double(a.cutoff_symbol) +
                      " is below 100 x max|V| = " + io::format_double(100.0 * a.max_potential) + "; decrease h");
  }
}

struct Writer {
  fs::path dir;
  std::string hash;
  std::vector<std::string> files;
  bool write_json = true;
  bool write_csv = true;

  void json_file(const std::string& name, json body) {
    if (!write_json) return;
    json j;
    j["config_hash"] = hash;
    for (auto& [k, v] : body.items()) j[k] = v;
    io::write_text_file((dir / name).string(), io::dump(j));
    files.push_back(name);
  }

  void csv_file(const std::string& name, const std::string& body) {
    if (!write_csv) return;
    io::write_text_file((dir / name).string(), "# config_hash=" + hash + "\n" + body);
    files.push_back(name);
  }
};

void cmd_spectrum(const RunConfig& cfg, Writer& w) {
  const auto grid = make_grid(cfg);
  const auto v = make_potential(cfg, grid);
  check_aliasing(cfg, v, grid);
  const auto res = negative_eigenvalues(cfg.symbol, v, grid, cfg.spectrum.dense_cap);
  json body;
  body["command"] = "spectrum";
  body["grid_size"] = grid.size();
  body["spectrum"] = io::to_json(res);
  w.json_file("spectrum.json", body);
  w.csv_file("eigenvalues.csv", io::eigenvalues_csv(res));
}

void cmd_bs(const RunConfig& cfg, Writer& w) {
  const auto grid = make_grid(cfg);
  const auto v = make_potential(cfg, grid);
  check_aliasing(cfg, v, grid);
  check(v.nonnegative(), "potential: the Birman-Schwinger check needs V >= 0");
  json rows = json::array();
  std::size_t indeterminate = 0, agree = 0;
  for (double e : cfg.bs.e) {
    const auto c = verify_bs_principle(cfg.symbol, v, grid, e, cfg.bs.dense_cap);
    json row;
    row["e"] = e;
    const json cj = io::to_json(c);
    for (auto& [k, val] : cj.items()) row[k] = val;
    rows.push_back(row);
    if (c.indeterminate) {
      ++indeterminate;
    } else if (c.agree) {
      ++agree;
    }
  }
  json body;
  body["command"] = "bs";
  body["potential"] = v.descriptor;
  body["seed"] = v.seed;
  body["rows"] = rows;
  body["determinate"] = cfg.bs.e.size() - indeterminate;
  body["agree"] = agree;
  body["all_agree"] = agree + indeterminate == cfg.bs.e.size();
  w.json_file("bs_check.json", body);
}

void cmd_surface(const RunConfig& cfg, Writer& w) {
  const int d = cfg.symbol.dimension;
  std::vector<std::string> header{"t"};
  for (int j = 0; j < d; ++j) header.push_back("xi" + std::to_string(j + 1));
  header.push_back("weight");
  header.push_back("level");
  io::CsvWriter csv(header);
  json levels = json::array();
  const auto dirs = default_directions(d);
  for (double t : cfg.surface.t) {
    LevelSetOptions opt;
    opt.resolution = cfg.surface.resolution;
    opt.critical_guard = cfg.surface.critical_guard;
    const auto mesh = extract_level_set(cfg.symbol, t, opt);
    for (std::size_t i = 0; i < mesh.points.size(); ++i) {
      std::vector<std::string> row{io::format_double(t)};
      for (int j = 0; j < d; ++j) row.push_back(io::format_double(mesh.points[i][j]));
      row.push_back(io::format_double(mesh.weights[i]));
      row.push_back(io::format_double(mesh.levels[i]));
      csv.row(row);
    }
    json lj;
    lj["t"] = t;
    lj["points"] = mesh.points.size();
    lj["total_measure"] = surface_measure_total(mesh);
    const auto radii = default_decay_radii(mesh, cfg.surface.r_min, cfg.surface.radii_count);
    lj["decay"] = io::to_json(decay_rate(mesh, dirs, radii, cfg.surface.samples_per_shell));
    levels.push_back(lj);
  }
  w.csv_file("mesh.csv", csv.str());
  json body;
  body["command"] = "surface";
  body["levels"] = levels;
  w.json_file("decay.json", body);
}

void cmd_weak_coupling(const RunConfig& cfg, Writer& w) {
  check(is_bcs(cfg.symbol.kind), "symbol: weak coupling needs a BCS kind");
  check(cfg.symbol.dimension == 2 || cfg.symbol.dimension == 3, "symbol: weak coupling needs d = 2 or 3");
  const auto grid = make_grid(cfg);
  const auto v = make_potential(cfg, grid);
  check_aliasing(cfg, v, grid);
  LevelSetOptions opt;
  opt.resolution = cfg.weak_coupling.resolution;
  const auto mesh = extract_level_set(cfg.symbol, 0.0, opt);
  const auto fit = weak_coupling_sweep(cfg.symbol, v, grid, mesh, cfg.weak_coupling.lambdas,
                                       cfg.weak_coupling.tracked, cfg.weak_coupling.resolution_factor);
  json body;
  body["command"] = "weak-coupling";
  body["potential"] = v.descriptor;
  body["surface_measure"] = surface_measure_total(mesh);
  body["mesh_points"] = mesh.points.size();
  body["fit"] = io::to_json(fit);
  w.json_file("weak_coupling.json", body);
}

void cmd_bounds(const RunConfig& cfg, Writer& w) {
  const auto grid = make_grid(cfg);
  const double kmax = *std::max_element(cfg.bounds.kappas.begin(), cfg.bounds.kappas.end());
  for (const auto& f : cfg.bounds.families) check_aliasing(cfg, make_family_potential(grid, f).scaled(kmax), grid);
  std::vector<BoundReport> reports;
  for (auto tag : cfg.bounds.tags) {
    auto rep = run_bound_family(tag, cfg.symbol, grid, cfg.bounds.families, cfg.bounds.params, cfg.bounds.kappas,
                                cfg.bounds.factor);
    json extra;
    if (is_schatten_tag(tag) && !cfg.bounds.e_grid.empty()) {
      const auto v = make_family_potential(grid, cfg.bounds.families.front());
      const auto sweep = schatten_e_sweep(cfg.symbol, v, grid, cfg.bounds.params.m, cfg.bounds.e_grid);
      rep.slope = sweep.slope;
      extra = io::to_json(sweep);
    }
    json body;
    body["command"] = "bounds";
    body["report"] = io::to_json(rep);
    if (!extra.is_null()) body["e_sweep"] = extra;
    w.json_file("report_" + tag_file_stem(tag) + ".json", body);
    reports.push_back(std::move(rep));
  }
  w.csv_file("summary.csv", io::summary_csv(reports));
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"spectrum", "bs", "surface", "weak-coupling", "bounds"};
  return names;
}

RunConfig parse_config(const json& doc, const std::string& command, const std::optional<std::uint64_t>& seed) {
  const auto& names = subcommands();
  check(std::find(names.begin(), names.end(), command) != names.end(), "unknown subcommand '" + command + "'");
  Reader root(doc, "config");
  RunConfig cfg;
  cfg.command = command;
  check(root.has("symbol"), "config: missing 'symbol' block");
  {
    Reader r(root.raw("symbol"), "symbol");
    cfg.symbol = parse_symbol(r, cfg.epsilon);
  }
  const bool needs_grid = command != "surface";
  if (root.has("grid")) {
    check(needs_grid, "grid: not used by surface");
    Reader r(root.raw("grid"), "grid");
    cfg.grid = parse_grid(r, cfg.symbol.dimension);
    if (is_lattice(cfg.symbol.kind)) check(cfg.grid->h == 1.0, "grid.h: lattice symbols need h = 1");
  } else {
    check(!needs_grid, "config: missing 'grid' block");
  }
  const bool needs_potential = command == "spectrum" || command == "bs" || command == "weak-coupling";
  if (root.has("potential")) {
    check(needs_potential, "potential: not used by " + command);
    Reader r(root.raw("potential"), "potential");
    cfg.potential = parse_potential(r);
    if (seed) cfg.potential->seed = *seed;
  } else {
    check(!needs_potential, "config: missing 'potential' block");
  }
  {
    json empty = json::object();
    Reader r(root.has("task") ? root.raw("task") : empty, "task");
    parse_task(cfg, r);
    if (seed && command == "bounds") {
      for (auto& f : cfg.bounds.families) {
        if (f.kind == "random") f.seed = *seed;
      }
    }
  }
  if (root.has("output")) {
    Reader r(root.raw("output"), "output");
    cfg.out_dir = r.string("dir", cfg.out_dir);
    if (r.has("formats")) {
      const auto& f = r.raw("formats");
      check(f.is_array() && !f.empty(), "output.formats: expected a nonempty list");
      cfg.formats.clear();
      for (const auto& x : f) {
        check(x.is_string() && (x == "json" || x == "csv"), "output.formats: entries must be json or csv");
        cfg.formats.push_back(x.get<std::string>());
      }
    }
    r.finish();
  }
  root.finish();
  return cfg;
}

json resolved_config(const RunConfig& cfg) {
  json j;
  j["command"] = cfg.command;
  json s;
  s["kind"] = to_string(cfg.symbol.kind);
  s["d"] = cfg.symbol.dimension;
  if (cfg.symbol.kind == SymbolKind::LatticeBCS) {
    s["mu"] = cfg.symbol.mu;
    s["base"] = cfg.symbol.base == LatticeBase::MV ? "MV" : "Standard";
  }
  s["s"] = 1.0 / cfg.symbol.power_inv_s;
  s["epsilon"] = cfg.epsilon;
  j["symbol"] = s;
  if (cfg.grid) j["grid"] = {{"d", cfg.grid->d}, {"L", cfg.grid->L}, {"h", cfg.grid->h}};
  if (cfg.potential) {
    const auto& p = *cfg.potential;
    json pj;
    pj["generator"] = p.generator;
    if (p.generator == "gaussian") {
      pj["amplitude"] = p.amplitude;
      pj["width"] = p.width;
    } else if (p.generator == "bump" || p.generator == "plateau") {
      pj["amplitude"] = p.amplitude;
      pj["radius"] = p.radius;
    } else if (p.generator == "delta") {
      pj["g"] = p.g;
    } else if (p.generator == "random") {
      pj["amplitude"] = p.amplitude;
      pj["radius"] = p.radius;
      pj["seed"] = p.seed;
    } else if (p.generator == "csv") {
      pj["path"] = p.path;
    }
    j["potential"] = pj;
  }
  json t;
  if (cfg.command == "spectrum") {
    t["dense_cap"] = cfg.spectrum.dense_cap;
  } else if (cfg.command == "bs") {
    t["e"] = cfg.bs.e;
    t["dense_cap"] = cfg.bs.dense_cap;
  } else if (cfg.command == "surface") {
    t["t"] = cfg.surface.t;
    t["resolution"] = cfg.surface.resolution;
    t["critical_guard"] = cfg.surface.critical_guard;
    t["r_min"] = cfg.surface.r_min;
    t["radii_count"] = cfg.surface.radii_count;
    t["samples_per_shell"] = cfg.surface.samples_per_shell;
  } else if (cfg.command == "weak-coupling") {
    t["lambdas"] = cfg.weak_coupling.lambdas;
    t["tracked"] = cfg.weak_coupling.tracked;
    t["resolution"] = cfg.weak_coupling.resolution;
    t["resolution_factor"] = cfg.weak_coupling.resolution_factor;
  } else if (cfg.command == "bounds") {
    json tags = json::array();
    for (auto tag : cfg.bounds.tags) tags.push_back(to_string(tag));
    t["tags"] = tags;
    const auto& p = cfg.bounds.params;
    t["m"] = p.m;
    t["q"] = p.q;
    t["r"] = p.r;
    t["delta"] = p.delta;
    t["gamma"] = p.gamma;
    t["e"] = p.e;
    t["p"] = p.p;
    t["s"] = p.s;
    t["kappas"] = cfg.bounds.kappas;
    t["factor"] = cfg.bounds.factor;
    t["families"] = families_json(cfg.bounds.families);
    if (!cfg.bounds.e_grid.empty()) t["e_grid"] = cfg.bounds.e_grid;
  }
  j["task"] = t;
  j["output"] = {{"formats", cfg.formats}};
  return j;
}

std::string config_hash(const RunConfig& cfg) { return io::hash_hex(io::fnv1a64(resolved_config(cfg).dump())); }

TorusGrid make_grid(const RunConfig& cfg) {
  if (!cfg.grid) throw ConfigError("config: missing 'grid' block");
  return TorusGrid(cfg.grid->d, cfg.grid->L, cfg.grid->h);
}

PotentialField make_potential(const RunConfig& cfg, const TorusGrid& grid) {
  if (!cfg.potential) throw ConfigError("config: missing 'potential' block");
  const auto& p = *cfg.potential;
  if (p.generator == "zero") return zero_potential(grid);
  if (p.generator == "gaussian") return gaussian_potential(grid, p.amplitude, p.width);
  if (p.generator == "bump") return bump_potential(grid, p.amplitude, p.radius);
  if (p.generator == "plateau") return plateau_potential(grid, p.amplitude, p.radius);
  if (p.generator == "delta") return delta_potential(grid, p.g);
  if (p.generator == "random") return random_potential(grid, p.amplitude, p.radius, p.seed);
  if (p.generator == "csv") return load_potential_csv(grid, p.path);
  throw ConfigError("potential.generator: unknown generator '" + p.generator + "'");
}

int run_cli(const CliOptions& options, std::ostream& out, std::ostream& err) {
  std::string out_dir = options.out_dir.value_or("");
  auto report_error = [&](const char* kind, const std::string& message, int code) {
    json e;
    e["error"] = {{"kind", kind}, {"message", message}, {"command", options.command}};
    err << e.dump() << "\n";
    if (!out_dir.empty()) {
      try {
        fs::create_directories(out_dir);
        io::write_text_file((fs::path(out_dir) / "error.json").string(), io::dump(e));
      } catch (...) {
      }
    }
    return code;
  };
  try {
    if (options.workers) {
      check(*options.workers >= 1, "--workers: must be >= 1");
      set_worker_count(*options.workers);
    } else if (const char* env = std::getenv("DEGENSPEC_WORKERS")) {
      char* end = nullptr;
      const long n = std::strtol(env, &end, 10);
      check(end && *end == '\0' && n >= 1, "DEGENSPEC_WORKERS: must be a positive integer");
      set_worker_count(static_cast<int>(n));
    }
    json doc;
    try {
      doc = json::parse(io::read_text_file(options.config_path));
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    } catch (const std::runtime_error& e) {
      throw ConfigError(e.what());
    }
    RunConfig cfg = parse_config(doc, options.command, options.seed);
    if (options.out_dir) cfg.out_dir = *options.out_dir;
    out_dir = cfg.out_dir;
    fs::create_directories(cfg.out_dir);

    Writer w{cfg.out_dir, config_hash(cfg), {}};
    w.write_json = std::find(cfg.formats.begin(), cfg.formats.end(), "json") != cfg.formats.end();
    w.write_csv = std::find(cfg.formats.begin(), cfg.formats.end(), "csv") != cfg.formats.end();
    io::write_text_file((w.dir / "config.resolved.json").string(), io::dump(resolved_config(cfg)));
    if (cfg.command == "spectrum") {
      cmd_spectrum(cfg, w);
    } else if (cfg.command == "bs") {
      cmd_bs(cfg, w);
    } else if (cfg.command == "surface") {
      cmd_surface(cfg, w);
    } else if (cfg.command == "weak-coupling") {
      cmd_weak_coupling(cfg, w);
    } else {
      cmd_bounds(cfg, w);
    }
    json manifest;
    manifest["command"] = cfg.command;
    manifest["config_hash"] = w.hash;
    manifest["timestamp"] = iso_timestamp();
    manifest["workers"] = worker_count();
    manifest["files"] = w.files;
    io::write_text_file((w.dir / "manifest.json").string(), io::dump(manifest));
    out << io::dump({{"status", "ok"}, {"command", cfg.command}, {"config_hash", w.hash}, {"out", cfg.out_dir}});
    return 0;
  } catch (const ConfigError& e) {
    return report_error("config", e.what(), 2);
  } catch (const std::exception& e) {
    return report_error("runtime", e.what(), 3);
  }
}

}  // namespace degenspec::app
