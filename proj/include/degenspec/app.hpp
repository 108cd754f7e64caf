#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "degenspec/bounds.hpp"
#include "degenspec/symbols.hpp"
#include "degenspec/torus.hpp"

namespace degenspec::app {

using json = nlohmann::ordered_json;

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct GridConfig {
  int d = 2;
  int L = 16;
  double h = 1.0;
};

struct PotentialConfig {
  std::string generator = "zero";
  double amplitude = 1.0;
  double width = 2.0;
  double radius = 2.0;
  double g = 1.0;
  std::uint64_t seed = 0;
  std::string path;
};

struct SpectrumTask {
  std::size_t dense_cap = 8192;
};

struct BsTask {
  std::vector<double> e;
  std::size_t dense_cap = 8192;
};

struct SurfaceTask {
  std::vector<double> t;
  int resolution = 512;
  double critical_guard = 0.05;
  double r_min = 4.0;
  int radii_count = 12;
  int samples_per_shell = 32;
};

struct WeakCouplingTask {
  std::vector<double> lambdas;
  std::vector<int> tracked{1};
  int resolution = 512;
  double resolution_factor = 10.0;
};

struct BoundsTask {
  std::vector<TheoremTag> tags;
  BoundParams params;
  std::vector<double> kappas{0.5, 1.0, 2.0};
  double factor = 10.0;
  std::vector<FamilySpec> families;
  std::vector<double> e_grid;  // optional sweep for the Schatten-norm tags
};

struct RunConfig {
  std::string command;
  SymbolSpec symbol;
  double epsilon = 1e-2;
  std::optional<GridConfig> grid;
  std::optional<PotentialConfig> potential;
  SpectrumTask spectrum;
  BsTask bs;
  SurfaceTask surface;
  WeakCouplingTask weak_coupling;
  BoundsTask bounds;
  std::string out_dir = "out";
  std::vector<std::string> formats{"json", "csv"};
};

struct CliOptions {
  std::string command;
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<int> workers;
  std::optional<std::uint64_t> seed;
};

const std::vector<std::string>& subcommands();

/// Validates a config document for one subcommand; unknown keys are errors.
RunConfig parse_config(const json& doc, const std::string& command, const std::optional<std::uint64_t>& seed = {});
/// The fully resolved config, with every default filled in.
json resolved_config(const RunConfig& cfg);
std::string config_hash(const RunConfig& cfg);

TorusGrid make_grid(const RunConfig& cfg);
PotentialField make_potential(const RunConfig& cfg, const TorusGrid& grid);

/// Runs one subcommand and writes its outputs; returns the process exit code.
/// Errors are reported as a JSON object on `err`.
int run_cli(const CliOptions& options, std::ostream& out, std::ostream& err);

}  // namespace degenspec::app
