#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bstar/grid.hpp"
#include "bstar/potentials.hpp"

namespace bstar {

enum class InitKind { gaussian, exponential, ball, custom };

struct InitSpec {
  InitKind kind = InitKind::gaussian;
  // Width for gaussian, rate for exponential, radius for ball.
  double param = 1.0;
  // Values on the solver grid, used when kind == custom.
  std::optional<Eigen::VectorXd> custom;
};

struct SolverConfig {
  InitSpec init;
  double tol = 1e-10;
  int max_iter = 5000;
  double relaxation = 1.0;
  std::size_t n = 2048;
  double r_max = 200.0;
  std::uint64_t seed = 0;
  // Relative amplitude of a seeded multiplicative perturbation of the initial
  // profile. Zero keeps the run independent of the seed.
  double perturbation = 0.0;
};

struct GroundStateSolution {
  RadialProfile Q;
  double eigenvalue;
  double mass;
  double residual;
  int iterations;
  PotentialPair potential;
  bool converged;
};

// ||sqrt(-Delta) u + lambda u - V_u u|| / ||u|| in the weighted L2 norm.
double residual(const RadialProfile& u, double lambda);

// Spectral renormalization:
//   u <- |gamma * (sqrt(-Delta) + 1)^{-1} [V_u u]|,
//   gamma = (<u, (sqrt(-Delta) + 1) u> / <u, V_u u>)^{3/2},
// relaxed by cfg.relaxation. The exponent follows from V_u u being cubic in
// u: at a fixed point gamma = 1 and u solves the equation with lambda = 1.
//
// Throws ZeroProfile for a zero initial profile and CollapsedToZero when an
// iterate loses its mass. Hitting max_iter is not an exception: the best
// iterate comes back with converged = false.
GroundStateSolution solve_ground_state(const SolverConfig& cfg);

Eigen::VectorXd initial_profile(const SolverConfig& cfg, const RadialGrid& grid);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double x_lo = 0.0;
  double x_hi = 0.0;
  int points = 0;
};
LinearFit least_squares_line(const std::vector<double>& x, const std::vector<double>& y);

struct QualityOptions {
  // Frequencies with Qhat below this fraction of max Qhat are treated as the
  // unresolved tail (truncation and rounding noise).
  double resolved_floor = 1e-8;
};

struct QualityReport {
  bool positive = false;
  double min_value = 0.0;
  bool strictly_decreasing = false;
  double max_forward_difference = 0.0;

  LinearFit decay;  // log Q against log r on [r_max/4, r_max/2]

  bool qhat_positive_all = false;
  bool qhat_nonincreasing_all = false;
  int resolved_count = 0;
  double resolved_rho = 0.0;
  bool qhat_positive_resolved = false;
  bool qhat_nonincreasing_resolved = false;
  std::optional<double> first_nonpositive_rho;

  LinearFit spectral_tail;  // log Qhat against rho over the middle of the resolved band
  double analyticity_radius = 0.0;

  // Overall verdict: pointwise properties on the grid, decay slope in
  // [-4.5, -3.5], Qhat positive and non-increasing on the resolved band, and
  // an exponential tail with R^2 >= 0.99.
  bool passed() const;
};

QualityReport verify_qualitative(const GroundStateSolution& sol, const QualityOptions& opts = {});
// The same checks on an arbitrary profile (used for negative controls).
QualityReport verify_profile(const RadialProfile& Q, const QualityOptions& opts = {});

struct CrossValidation {
  double max_distance = 0.0;
  std::vector<GroundStateSolution> solutions;
};

// Solves every config and returns the largest pairwise sup-norm distance,
// measured on the nodes of the first config's grid (other solutions are
// evaluated there through their sine interpolant).
CrossValidation cross_validate(const std::vector<SolverConfig>& cfgs);

// Sup-norm distance between two profiles on the nodes of a's grid.
double profile_distance(const RadialProfile& a, const RadialProfile& b);

// ||Q||_2^2, the critical mass. Throws NotConvergedInput for unconverged runs.
double mass_constant(const GroundStateSolution& sol);

}  // namespace bstar
