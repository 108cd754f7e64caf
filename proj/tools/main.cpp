#include <iostream>

#include <CLI11.hpp>

#include "degenspec/app.hpp"
#include "degenspec/linalg.hpp"

int main(int argc, char** argv) {
  degenspec::linalg::ensure_safe_blas_kernel(argv);
  CLI::App cli{"degenspec: spectra of Schroedinger operators with degenerate kinetic energy"};
  cli.require_subcommand(1);

  degenspec::app::CliOptions options;
  int workers = 0;
  std::uint64_t seed = 0;
  std::string out_dir;

  for (const auto& name : degenspec::app::subcommands()) {
    auto* sub = cli.add_subcommand(name);
    sub->add_option("--config", options.config_path, "JSON config file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--workers", workers, "worker threads (falls back to DEGENSPEC_WORKERS)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "override the potential seed");
    sub->callback([&options, name] { options.command = name; });
  }

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return cli.exit(e) == 0 ? 0 : 2;
  }

  for (auto* sub : cli.get_subcommands()) {
    if (sub->count("--out")) options.out_dir = out_dir;
    if (sub->count("--workers")) options.workers = workers;
    if (sub->count("--seed")) options.seed = seed;
  }
  const int code = degenspec::app::run_cli(options, std::cout, std::cerr);
  std::cout << std::flush;
  return code;
}
