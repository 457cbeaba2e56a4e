#pragma once

#include <cstdint>
#include <string>

namespace bstar {

// Run configuration. Text form: one `dotted.key = value` per line, '#' starts
// a comment. Absent keys take the defaults below; tgrid.m = 0 and
// tgrid.t_max = 0 mean "derive from the radial grid" (n/2 and r_max/2).
struct RunConfig {
  struct Grid {
    std::size_t n = 2048;
    double r_max = 200.0;
  } grid;
  struct TGridCfg {
    std::size_t m = 0;
    double t_max = 0.0;
  } tgrid;
  struct Solver {
    std::string init = "gaussian";  // gaussian | exponential | ball
    double init_param = 1.0;
    double tol = 1e-10;
    int max_iter = 5000;
    double relaxation = 1.0;
    std::uint64_t seed = 0;
  } solver;
  struct Linearization {
    int l_max = 3;
    int k_eigs = 5;
  } linearization;
  struct Extension {
    int basis_size = 16;
  } extension;
  struct Output {
    std::string directory = "out";
    std::string formats = "csv,json";
  } output;

  std::size_t effective_m() const { return tgrid.m ? tgrid.m : grid.n / 2; }
  double effective_t_max() const { return tgrid.t_max > 0 ? tgrid.t_max : grid.r_max / 2; }
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config(const std::string& path);

// Throws ValidationError naming the first field outside its range.
void validate(const RunConfig& cfg);

// Canonical text: every key, sorted, full-precision values.
std::string serialize(const RunConfig& cfg);

// 64-bit FNV-1a of a text, as 16 hex digits.
std::string text_hash(const std::string& text);
// The canonical text without the output.* keys: everything that can change
// a computed number, and nothing that only says where results go.
std::string computation_text(const RunConfig& cfg);
// text_hash(computation_text(cfg)).
std::string config_hash(const RunConfig& cfg);

}  // namespace bstar
