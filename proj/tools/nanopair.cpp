// Sweep runner: rates, sweep (CSV), report (extrema as key=value).
#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "nanopair/scan/sweep.hpp"

namespace {

using namespace nanopair;

template <typename Fn>
void with_output(const std::string& path, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write " + path);
  fn(out);
  if (!out) throw InvalidArgument("error writing " + path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coupled emitter pair near a nanosphere: rates and steady-state sweeps"};
  app.require_subcommand(1);

  std::string config;
  std::string out;
  int threads = 0;

  auto* rates = app.add_subcommand("rates", "Print coupling rates (gamma0 units) as config keys");
  auto* sweep = app.add_subcommand("sweep", "Run a sweep and write the CSV grid");
  auto* report = app.add_subcommand("report", "Run a sweep and print its extrema");
  for (auto* sub : {rates, sweep, report}) {
    sub->add_option("--config", config, "Key = value configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out, "Output file (default stdout)");
  }
  for (auto* sub : {sweep, report})
    sub->add_option("--threads", threads, "Worker threads (output is identical for any value)")
        ->check(CLI::NonNegativeNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    const scan::SweepConfig cfg = scan::load_config(config);
    if (rates->parsed()) {
      const auto a = scan::assemble_rates(cfg);
      with_output(out, [&](std::ostream& os) { scan::write_rates(a, os); });
    } else if (sweep->parsed()) {
      const auto grid = scan::run_sweep(cfg, threads);
      with_output(out, [&](std::ostream& os) { scan::emit_csv(grid, os); });
    } else {
      const auto grid = scan::run_sweep(cfg, threads);
      with_output(out, [&](std::ostream& os) { scan::write_report(scan::report_extrema(grid), os); });
    }
  } catch (const nanopair::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
