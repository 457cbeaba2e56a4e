#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "bstar/config.hpp"
#include "bstar/ground_state.hpp"

namespace bstar {

enum class Stage { solve, verify, linearize, extend, report };

std::optional<Stage> parse_stage(std::string_view name);
std::string_view stage_name(Stage s);
const std::vector<Stage>& all_stages();

// Process exit codes. The first failing stage (in pipeline order) decides.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitConfig = 3,
  kExitSolve = 10,
  kExitVerify = 11,
  kExitLinearize = 12,
  kExitExtend = 13,
  kExitReport = 14,
  kExitIo = 15,
};

int stage_exit_code(Stage s);

struct PipelineResult {
  int exit_code = kExitOk;
  std::map<Stage, bool> passed;
  std::vector<std::string> files;  // written artifacts, relative to the output directory
};

// Runs the requested stages into cfg.output.directory. Upstream stages that a
// requested stage depends on are recomputed but write nothing. Artifacts are
// byte-identical across runs with the same configuration.
PipelineResult run_pipeline(const RunConfig& cfg, const std::set<Stage>& stages, std::ostream& log);

struct PlotSeries {
  std::string name;  // file stem under plotdata/
  std::string x_label, y_label;
  Eigen::VectorXd x, y;
};

// Two-column series for Q(r), log Q vs log r with its fitted line, Qhat(rho),
// log Qhat vs rho with its fitted line, V and Phi.
std::vector<PlotSeries> solution_plot_series(const GroundStateSolution& sol, const QualityReport& q);

// Writes every series as plotdata/<name>.csv under dir.
void emit_plot_data(const std::vector<PlotSeries>& series, const std::string& dir);

}  // namespace bstar
