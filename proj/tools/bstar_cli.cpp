// Command-line front end: one subcommand per pipeline stage plus `pipeline`
// for the full run. Flags override values read from --config.
#include <iostream>
#include <optional>
#include <set>
#include <string>

#include <CLI11.hpp>

#include "bstar/config.hpp"
#include "bstar/errors.hpp"
#include "bstar/pipeline.hpp"

namespace {

struct Overrides {
  std::string config_path;
  std::vector<std::string> stages;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> grid_n;
  std::optional<double> grid_rmax;
};

void add_flags(CLI::App* app, Overrides& o, bool allow_stage) {
  app->add_option("--config", o.config_path, "configuration file (dotted key = value)");
  if (allow_stage)
    app->add_option("--stage", o.stages, "restrict to these stages: solve, verify, linearize, extend, report");
  app->add_option("--out", o.out, "output directory");
  app->add_option("--seed", o.seed, "random seed");
  app->add_option("--grid-n", o.grid_n, "number of radial nodes");
  app->add_option("--grid-rmax", o.grid_rmax, "radial box size");
}

int run(const Overrides& o, std::set<bstar::Stage> stages) {
  bstar::RunConfig cfg;
  try {
    if (!o.config_path.empty()) cfg = bstar::parse_config(o.config_path);
    if (o.out) cfg.output.directory = *o.out;
    if (o.seed) cfg.solver.seed = *o.seed;
    if (o.grid_n) cfg.grid.n = *o.grid_n;
    if (o.grid_rmax) cfg.grid.r_max = *o.grid_rmax;
    bstar::validate(cfg);
  } catch (const bstar::Error& e) {
    std::cerr << bstar::error_name(e.code()) << ": " << e.what() << "\n";
    return e.code() == bstar::ErrorCode::IoError ? bstar::kExitIo : bstar::kExitConfig;
  }
  if (!o.stages.empty()) {
    stages.clear();
    for (const auto& name : o.stages) {
      const auto s = bstar::parse_stage(name);
      if (!s) {
        std::cerr << "unknown stage '" << name << "'\n";
        return bstar::kExitUsage;
      }
      stages.insert(*s);
    }
  }
  try {
    const bstar::PipelineResult r = bstar::run_pipeline(cfg, stages, std::cerr);
    for (const auto& [s, ok] : r.passed) std::cout << bstar::stage_name(s) << ": " << (ok ? "PASS" : "FAIL") << "\n";
    std::cout << "artifacts: " << cfg.output.directory << " (" << r.files.size() << " files)\n";
    return r.exit_code;
  } catch (const bstar::Error& e) {
    std::cerr << bstar::error_name(e.code()) << ": " << e.what() << "\n";
    return e.code() == bstar::ErrorCode::IoError ? bstar::kExitIo : bstar::kExitConfig;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ground state, nondegeneracy and extension diagnostics for the boson star equation"};
  app.require_subcommand(1);
  Overrides o;
  std::set<bstar::Stage> selected;
  for (bstar::Stage s : bstar::all_stages()) {
    auto* sub = app.add_subcommand(std::string(bstar::stage_name(s)), "run the " + std::string(bstar::stage_name(s)) + " stage");
    add_flags(sub, o, false);
    sub->callback([&selected, s] { selected = {s}; });
  }
  auto* all = app.add_subcommand("pipeline", "run every stage (or those named by --stage)");
  add_flags(all, o, true);
  all->callback([&selected] { selected = {bstar::all_stages().begin(), bstar::all_stages().end()}; });
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : bstar::kExitUsage;
  }
  return run(o, selected);
}
