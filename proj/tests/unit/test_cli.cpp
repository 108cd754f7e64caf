#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "degenspec/app.hpp"
#include "degenspec/io.hpp"

using namespace degenspec;
using namespace degenspec::app;
namespace fs = std::filesystem;

namespace {

json base_spectrum() {
  return json::parse(R"({"symbol": {"kind": "LatticeBCS", "d": 2, "mu": 0.5},
                         "grid": {"L": 8},
                         "potential": {"generator": "random", "amplitude": 1.0, "radius": 2.0, "seed": 3}})");
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("degenspec_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run(const json& cfg, const std::string& command, const fs::path& dir, std::string* err_out = nullptr,
        std::optional<std::uint64_t> seed = {}) {
  const auto path = dir / "config.json";
  io::write_text_file(path.string(), cfg.dump());
  CliOptions o;
  o.command = command;
  o.config_path = path.string();
  o.out_dir = (dir / "out").string();
  o.seed = seed;
  std::ostringstream out, err;
  const int code = run_cli(o, out, err);
  if (err_out) *err_out = err.str();
  return code;
}

std::string read(const fs::path& p) { return io::read_text_file(p.string()); }

}  // namespace

TEST_CASE("config validation rejects unknown keys everywhere") {
  CHECK_NOTHROW(parse_config(base_spectrum(), "spectrum"));
  for (const char* block : {"", "symbol", "grid", "potential", "task"}) {
    auto doc = base_spectrum();
    if (std::string(block).empty()) {
      doc["colour"] = 1;
    } else {
      doc[block]["colour"] = 1;
    }
    CHECK_THROWS_AS(parse_config(doc, "spectrum"), ConfigError);
  }
  auto doc = base_spectrum();
  doc["potential"]["width"] = 2.0;  // not a key of the random generator
  CHECK_THROWS_AS(parse_config(doc, "spectrum"), ConfigError);

  const auto bounds = json::parse(R"({"symbol": {"kind": "LatticeBCS", "d": 2, "mu": 0.5}, "grid": {"L": 8},
                                      "task": {"tags": ["T4.3"], "params": {"r": 0.5}}})");
  try {
    parse_config(bounds, "bounds");
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("params") != std::string::npos);
  }
}

TEST_CASE("config validation of values and blocks") {
  auto doc = base_spectrum();
  doc["grid"]["d"] = 3;
  CHECK_THROWS_AS(parse_config(doc, "spectrum"), ConfigError);
  doc = base_spectrum();
  doc["grid"]["h"] = 0.5;
  CHECK_THROWS_AS(parse_config(doc, "spectrum"), ConfigError);
  doc = base_spectrum();
  doc["grid"]["L"] = 7;
  CHECK_THROWS_AS(parse_config(doc, "spectrum"), ConfigError);
  doc = base_spectrum();
  doc["symbol"]["mu"] = 0.0;
  CHECK_THROWS_AS(parse_config(doc, "spectrum"), ConfigError);
  doc = base_spectrum();
  doc.erase("potential");
  CHECK_THROWS_AS(parse_config(doc, "spectrum"), ConfigError);
  CHECK_THROWS_AS(parse_config(base_spectrum(), "surface"), ConfigError);
  CHECK_THROWS_AS(parse_config(base_spectrum(), "bs"), ConfigError);
  CHECK_THROWS_AS(parse_config(base_spectrum(), "nonsense"), ConfigError);
  doc = base_spectrum();
  doc["task"] = {{"e", {0.1, -1.0}}};
  CHECK_THROWS_AS(parse_config(doc, "bs"), ConfigError);
  auto bounds = json::parse(R"({"symbol": {"kind": "LatticeBCS", "d": 2, "mu": 0.5}, "grid": {"L": 8},
                                "task": {"tags": ["T4.3"], "q": 1.5, "r": 0.5, "gamma": 2.0}})");
  CHECK_THROWS_AS(parse_config(bounds, "bounds"), ConfigError);
  bounds["task"]["gamma"] = 3.5;
  const auto cfg = parse_config(bounds, "bounds");
  CHECK(cfg.bounds.params.m == doctest::Approx(3.0));
  bounds["task"]["tags"] = {"T3.2(1)"};
  CHECK_THROWS_AS(parse_config(bounds, "bounds"), ConfigError);
}

TEST_CASE("seed override and config hash") {
  const auto a = parse_config(base_spectrum(), "spectrum");
  const auto b = parse_config(base_spectrum(), "spectrum", 99);
  CHECK(b.potential->seed == 99);
  CHECK(config_hash(a) != config_hash(b));
  CHECK(config_hash(a) == config_hash(parse_config(base_spectrum(), "spectrum")));
  const auto r = resolved_config(a);
  CHECK(r["task"]["dense_cap"] == 8192);
  CHECK(r["grid"]["h"] == 1.0);
}

TEST_CASE("spectrum command outputs") {
  SUBCASE("no potential gives an empty table") {
    auto doc = base_spectrum();
    doc["potential"] = {{"generator", "zero"}};
    const auto dir = scratch("zero");
    REQUIRE(run(doc, "spectrum", dir) == 0);
    const auto csv = read(dir / "out" / "eigenvalues.csv");
    const auto hash = config_hash(parse_config(doc, "spectrum"));
    CHECK(csv == "# config_hash=" + hash + "\nj,e,eigenvalue,residual\n");
    CHECK(json::parse(read(dir / "out" / "spectrum.json"))["config_hash"] == hash);
    CHECK(fs::exists(dir / "out" / "config.resolved.json"));
    CHECK(fs::exists(dir / "out" / "manifest.json"));
  }
  SUBCASE("single site") {
    auto doc = json::parse(R"({"symbol": {"kind": "LatticeStandard", "d": 2}, "grid": {"L": 1},
                               "potential": {"generator": "delta", "g": 3}})");
    const auto dir = scratch("single");
    REQUIRE(run(doc, "spectrum", dir) == 0);
    const auto csv = read(dir / "out" / "eigenvalues.csv");
    CHECK(csv.find("\n1,2,-2,") != std::string::npos);
  }
}

TEST_CASE("errors are reported as JSON with distinct exit codes") {
  auto doc = base_spectrum();
  doc["symbol"]["colour"] = "red";
  const auto dir = scratch("errors");
  std::string err;
  CHECK(run(doc, "spectrum", dir, &err) == 2);
  auto e = json::parse(err);
  CHECK(e["error"]["kind"] == "config");
  CHECK(e["error"]["message"].get<std::string>().find("colour") != std::string::npos);
  CHECK(fs::exists(dir / "out" / "error.json"));

  doc = base_spectrum();
  doc["potential"] = {{"generator", "gaussian"}, {"amplitude", -1.0}, {"width", 2.0}};
  doc["task"] = {{"e", {0.1}}};
  CHECK(run(doc, "bs", dir, &err) == 2);

  doc = base_spectrum();
  doc["potential"] = {{"generator", "csv"}, {"path", "/nonexistent/potential.csv"}};
  CHECK(run(doc, "spectrum", dir, &err) == 3);
  CHECK(json::parse(err)["error"]["kind"] == "runtime");

  CliOptions o;
  o.command = "spectrum";
  o.config_path = (dir / "missing.json").string();
  std::ostringstream out, errs;
  CHECK(run_cli(o, out, errs) == 2);
}

TEST_CASE("the command-line binary is deterministic across reruns and worker counts") {
  const auto dir = scratch("binary");
  io::write_text_file((dir / "c.json").string(), base_spectrum().dump());
  const std::string exe = DEGENSPEC_CLI;
  const auto cmd = [&](const std::string& out, const std::string& extra) {
    return exe + " spectrum --config " + (dir / "c.json").string() + " --out " + (dir / out).string() + " " + extra +
           " > /dev/null 2>&1";
  };
  REQUIRE(std::system(cmd("a", "").c_str()) == 0);
  REQUIRE(std::system(cmd("b", "--workers 2").c_str()) == 0);
  REQUIRE(std::system(cmd("c", "--seed 5").c_str()) == 0);
  for (const char* f : {"eigenvalues.csv", "spectrum.json", "config.resolved.json"}) {
    CHECK(read(dir / "a" / f) == read(dir / "b" / f));
    CHECK(read(dir / "a" / f) != read(dir / "c" / f));
  }
  CHECK(json::parse(read(dir / "b" / "manifest.json"))["workers"] == 2);
  CHECK(std::system((exe + " spectrum > /dev/null 2>&1").c_str()) != 0);
}
