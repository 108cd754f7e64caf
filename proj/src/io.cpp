#include "degenspec/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <locale>
#include <sstream>
#include <stdexcept>

namespace degenspec::io {

namespace {

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json number_array(const std::vector<double>& xs) {
  json a = json::array();
  for (double x : xs) a.push_back(number_or_null(x));
  return a;
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(17) << x;
  return os.str();
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("io: cannot write '" + path + "'");
  out << content;
  if (!out) throw std::runtime_error("io: write failed for '" + path + "'");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("io: cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) { row(header); }

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) throw std::invalid_argument("io: csv row has the wrong number of cells");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) buf_ += ',';
    const bool quote = cells[i].find_first_of(",\"\n") != std::string::npos;
    if (quote) {
      buf_ += '"';
      for (char c : cells[i]) {
        if (c == '"') buf_ += '"';
        buf_ += c;
      }
      buf_ += '"';
    } else {
      buf_ += cells[i];
    }
  }
  buf_ += '\n';
}

std::string CsvWriter::str() const { return buf_; }

json to_json(const SpectrumResult& r) {
  json j;
  j["grid"] = r.grid_descriptor;
  j["symbol"] = r.symbol_descriptor;
  j["potential"] = r.potential_descriptor;
  j["seed"] = r.seed;
  j["count"] = r.e.size();
  j["e"] = number_array(r.e);
  j["h_eigenvalues"] = json::array();
  for (double e : r.e) j["h_eigenvalues"].push_back(-e);
  j["residuals"] = number_array(r.residuals);
  return j;
}

json to_json(const SingularSpectrum& s) {
  json j;
  j["source"] = s.source;
  j["svals"] = number_array(s.svals);
  return j;
}

json to_json(const BsCheck& c) {
  json j;
  j["N_e"] = c.n_e;
  j["n_1"] = c.n_one;
  j["agree"] = c.agree;
  j["indeterminate"] = c.indeterminate;
  j["margin_e"] = number_or_null(c.margin_e);
  j["margin_one"] = number_or_null(c.margin_one);
  return j;
}

json to_json(const DecayFit& f) {
  json j;
  j["r_hat"] = number_or_null(f.r_hat);
  j["residual"] = number_or_null(f.residual);
  j["nyquist_radius"] = number_or_null(f.nyquist);
  j["radii"] = number_array(f.radii);
  j["envelope"] = number_array(f.envelope);
  return j;
}

json to_json(const WeakCouplingFit& f) {
  json j;
  j["tracked"] = f.tracked;
  j["resolution"] = number_or_null(f.resolution);
  j["e_floor"] = f.e_floor;
  j["resolution_factor"] = f.resolution_factor;
  j["precondition_ok"] = f.precondition_ok;
  j["conclusive"] = f.conclusive;
  j["a_fit"] = number_array(f.a_fit);
  j["a_surface"] = number_array(f.a_surface);
  j["mismatch"] = number_array(f.mismatch);
  j["window_max_lambda"] = number_array(f.window_max_lambda);
  j["fitted_points"] = f.fitted_points;
  j["points"] = json::array();
  for (const auto& p : f.points) {
    json pj;
    pj["lambda"] = p.lambda;
    pj["e"] = number_array(p.e);
    pj["used"] = p.used;
    j["points"].push_back(pj);
  }
  return j;
}

json to_json(const BoundReport& r) {
  json j;
  j["theorem"] = to_string(r.tag);
  j["c_hat"] = number_or_null(r.c_hat);
  j["median_ratio"] = number_or_null(r.median_ratio);
  j["max_over_median"] = number_or_null(r.max_over_median);
  j["positive_instances"] = r.positive_instances;
  j["factor"] = r.factor;
  j["pass"] = r.pass;
  j["slope"] = r.slope ? number_or_null(*r.slope) : json(nullptr);
  j["records"] = json::array();
  for (const auto& rec : r.records) {
    json rj;
    rj["instance"] = rec.instance;
    rj["family"] = rec.family;
    rj["kappa"] = rec.kappa;
    rj["lhs"] = number_or_null(rec.lhs);
    rj["rhs"] = number_or_null(rec.rhs);
    rj["ratio"] = number_or_null(rec.ratio);
    j["records"].push_back(rj);
  }
  return j;
}

json to_json(const ClrStudy& s) {
  json j;
  j["kappas"] = number_array(s.kappas);
  j["n0"] = s.n0;
  j["norm_pow"] = number_array(s.norm_pow);
  j["growth_exponent"] = number_or_null(s.growth_exponent);
  j["kappa_exponent"] = number_or_null(s.kappa_exponent);
  j["growth_conclusive"] = s.growth_conclusive;
  j["alphas"] = number_array(s.alphas);
  j["sublevel_measure"] = number_array(s.sublevel_measure);
  j["halving_ratios"] = number_array(s.halving_ratios);
  return j;
}

json to_json(const SchattenSweep& s) {
  json j;
  j["e"] = number_array(s.e);
  j["norm_pow"] = number_array(s.norm_pow);
  j["slope"] = number_or_null(s.slope);
  j["residual"] = number_or_null(s.residual);
  j["fitted"] = s.fitted;
  return j;
}

std::string eigenvalues_csv(const SpectrumResult& r) {
  CsvWriter w({"j", "e", "eigenvalue", "residual"});
  for (std::size_t i = 0; i < r.e.size(); ++i) {
    w.row({std::to_string(i + 1), format_double(r.e[i]), format_double(-r.e[i]), format_double(r.residuals[i])});
  }
  return w.str();
}

std::string mesh_csv(const SurfaceMesh& mesh) {
  std::vector<std::string> header;
  const int d = mesh.points.dim();
  for (int j = 0; j < d; ++j) header.push_back("xi" + std::to_string(j + 1));
  header.push_back("weight");
  header.push_back("level");
  CsvWriter w(header);
  for (std::size_t i = 0; i < mesh.points.size(); ++i) {
    std::vector<std::string> row;
    for (int j = 0; j < d; ++j) row.push_back(format_double(mesh.points[i][j]));
    row.push_back(format_double(mesh.weights[i]));
    row.push_back(format_double(mesh.levels[i]));
    w.row(row);
  }
  return w.str();
}

std::string summary_csv(const std::vector<BoundReport>& reports) {
  CsvWriter w({"theorem", "instance", "lhs", "rhs", "ratio", "slope", "pass"});
  for (const auto& r : reports) {
    const std::string slope = r.slope ? format_double(*r.slope) : "";
    for (const auto& rec : r.records) {
      w.row({to_string(r.tag), rec.instance, format_double(rec.lhs), format_double(rec.rhs), format_double(rec.ratio),
             slope, r.pass ? "true" : "false"});
    }
  }
  return w.str();
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace degenspec::io
