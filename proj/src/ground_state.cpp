#include "bstar/ground_state.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "bstar/transform.hpp"

namespace bstar {

double residual(const RadialProfile& u, double lambda) {
  const RadialGrid& g = *u.grid();
  const double norm = weighted_norm(g, u.values());
  if (norm == 0.0) throw Error(ErrorCode::ZeroProfile, "residual of the zero profile");
  const PotentialPair p = newton_potential(u);
  const Eigen::VectorXd R =
      apply_half_laplacian(g, u.values()) + lambda * u.values() - p.V.values().cwiseProduct(u.values());
  return weighted_norm(g, R) / norm;
}

Eigen::VectorXd initial_profile(const SolverConfig& cfg, const RadialGrid& g) {
  const Eigen::Index n = static_cast<Eigen::Index>(g.n());
  Eigen::VectorXd u(n);
  const double p = cfg.init.param;
  if (cfg.init.kind != InitKind::custom && !(p > 0.0))
    throw Error(ErrorCode::ValidationError, "init parameter must be positive");
  switch (cfg.init.kind) {
    case InitKind::gaussian:
      u = (-(g.r().array() / p).square()).exp();
      break;
    case InitKind::exponential:
      u = (-p * g.r().array()).exp();
      break;
    case InitKind::ball:
      u = (g.r().array() <= p).cast<double>();
      break;
    case InitKind::custom:
      if (!cfg.init.custom || cfg.init.custom->size() != n)
        throw Error(ErrorCode::ValidationError, "custom init must match the grid size");
      u = *cfg.init.custom;
      break;
  }
  if (cfg.perturbation != 0.0) {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> amp(-1.0, 1.0), centre(0.0, 5.0);
    Eigen::VectorXd bump = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < 3; ++i) {
      const double a = amp(rng), c = centre(rng);
      bump.array() += a * (-(g.r().array() - c).square()).exp();
    }
    u.array() *= 1.0 + cfg.perturbation * bump.array();
  }
  return u;
}

GroundStateSolution solve_ground_state(const SolverConfig& cfg) {
  if (!(cfg.tol > 0.0)) throw Error(ErrorCode::ValidationError, "tol must be positive");
  if (!(cfg.relaxation > 0.0 && cfg.relaxation <= 1.0))
    throw Error(ErrorCode::ValidationError, "relaxation must lie in (0, 1]");
  const GridPtr grid = make_grid(cfg.n, cfg.r_max);
  const RadialGrid& g = *grid;

  Eigen::VectorXd u = initial_profile(cfg, g).cwiseAbs();
  if (weighted_norm(g, u) == 0.0) throw Error(ErrorCode::ZeroProfile, "initial profile is identically zero");

  const Eigen::VectorXd resolvent = (g.rho().array() + 1.0).inverse();
  double best_res = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best = u;
  int iterations = 0;
  for (int it = 1; it <= cfg.max_iter; ++it) {
    iterations = it;
    const RadialProfile cur(grid, u);
    const PotentialPair p = newton_potential(cur);
    const Eigen::VectorXd Vu = p.V.values().cwiseProduct(u);
    const Eigen::VectorXd Lu = apply_half_laplacian(g, u) + u;
    const Eigen::VectorXd wu = g.w().cwiseProduct(u);
    const double num = wu.dot(Lu), den = wu.dot(Vu);
    if (!(den > 0.0)) throw Error(ErrorCode::CollapsedToZero, "nonpositive potential energy");
    const double gamma = std::pow(num / den, 1.5);
    Eigen::VectorXd next = (gamma * apply_multiplier(g, Vu, resolvent)).cwiseAbs();
    if (cfg.relaxation < 1.0) next = cfg.relaxation * next + (1.0 - cfg.relaxation) * u;
    u = std::move(next);
    const double m = g.w().dot(u.cwiseAbs2());
    if (!(m >= 1e-12)) throw Error(ErrorCode::CollapsedToZero, "iterate mass " + std::to_string(m));
    const double res = residual(RadialProfile(grid, u), 1.0);
    if (res < best_res) {
      best_res = res;
      best = u;
    }
    if (res <= cfg.tol) break;
  }

  RadialProfile Q(grid, best);
  PotentialPair pot = newton_potential(Q);
  const double m = mass(Q);
  return GroundStateSolution{std::move(Q), 1.0, m, best_res, iterations, std::move(pot), best_res <= cfg.tol};
}

LinearFit least_squares_line(const std::vector<double>& x, const std::vector<double>& y) {
  LinearFit f;
  const std::size_t m = x.size();
  f.points = static_cast<int>(m);
  if (m < 2) return f;
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / static_cast<double>(m), my = sy / static_cast<double>(m);
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r_squared = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  f.x_lo = *std::min_element(x.begin(), x.end());
  f.x_hi = *std::max_element(x.begin(), x.end());
  return f;
}

bool QualityReport::passed() const {
  return positive && strictly_decreasing && decay.slope >= -4.5 && decay.slope <= -3.5 && qhat_positive_resolved &&
         qhat_nonincreasing_resolved && spectral_tail.slope < 0.0 && spectral_tail.r_squared >= 0.99;
}

QualityReport verify_profile(const RadialProfile& Q, const QualityOptions& opts) {
  const RadialGrid& g = *Q.grid();
  const Eigen::VectorXd& q = Q.values();
  const Eigen::Index n = q.size();
  QualityReport rep;

  rep.min_value = q.minCoeff();
  rep.positive = rep.min_value > 0.0;
  rep.max_forward_difference = -std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j + 1 < n; ++j) rep.max_forward_difference = std::max(rep.max_forward_difference, q[j + 1] - q[j]);
  rep.strictly_decreasing = rep.max_forward_difference < 0.0;

  std::vector<double> lx, ly;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double r = g.r()[j];
    if (r >= g.r_max() / 4 && r <= g.r_max() / 2 && q[j] > 0) {
      lx.push_back(std::log(r));
      ly.push_back(std::log(q[j]));
    }
  }
  rep.decay = least_squares_line(lx, ly);

  const Eigen::VectorXd F = forward_transform(Q).values();
  const double fmax = F.cwiseAbs().maxCoeff();
  rep.qhat_positive_all = F.minCoeff() > 0.0;
  rep.qhat_nonincreasing_all = true;
  for (Eigen::Index k = 0; k + 1 < n; ++k)
    if (F[k + 1] > F[k]) rep.qhat_nonincreasing_all = false;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (F[k] <= 0.0) {
      rep.first_nonpositive_rho = g.rho()[k];
      break;
    }
  }
  Eigen::Index K = 0;
  while (K < n && F[K] >= opts.resolved_floor * fmax) ++K;
  rep.resolved_count = static_cast<int>(K);
  rep.resolved_rho = K > 0 ? g.rho()[K - 1] : 0.0;
  rep.qhat_positive_resolved = K > 0;
  rep.qhat_nonincreasing_resolved = K > 0;
  for (Eigen::Index k = 0; k < K; ++k) {
    if (F[k] <= 0.0) rep.qhat_positive_resolved = false;
    if (k + 1 < K && F[k + 1] > F[k]) rep.qhat_nonincreasing_resolved = false;
  }
  std::vector<double> sx, sy;
  for (Eigen::Index k = K / 4; k < (3 * K) / 4; ++k) {
    sx.push_back(g.rho()[k]);
    sy.push_back(std::log(F[k]));
  }
  rep.spectral_tail = least_squares_line(sx, sy);
  rep.analyticity_radius = rep.spectral_tail.slope < 0 ? -1.0 / rep.spectral_tail.slope : 0.0;
  return rep;
}

QualityReport verify_qualitative(const GroundStateSolution& sol, const QualityOptions& opts) {
  if (!sol.converged) throw Error(ErrorCode::NotConvergedInput, "verification needs a converged solution");
  return verify_profile(sol.Q, opts);
}

double profile_distance(const RadialProfile& a, const RadialProfile& b) {
  if (a.grid()->same_as(*b.grid())) return (a.values() - b.values()).cwiseAbs().maxCoeff();
  const Eigen::VectorXd bv = sine_interpolate(b, a.grid()->r());
  return (a.values() - bv).cwiseAbs().maxCoeff();
}

CrossValidation cross_validate(const std::vector<SolverConfig>& cfgs) {
  if (cfgs.size() < 2) throw Error(ErrorCode::ValidationError, "cross validation needs at least two configs");
  CrossValidation cv;
  for (const auto& c : cfgs) {
    cv.solutions.push_back(solve_ground_state(c));
    if (!cv.solutions.back().converged)
      throw Error(ErrorCode::NotConvergedInput, "cross validation run did not converge");
  }
  const RadialProfile& ref = cv.solutions.front().Q;
  // Bring every solution onto the reference nodes once, then compare pairwise.
  std::vector<Eigen::VectorXd> on_ref;
  for (const auto& s : cv.solutions)
    on_ref.push_back(s.Q.grid()->same_as(*ref.grid()) ? s.Q.values() : sine_interpolate(s.Q, ref.grid()->r()));
  for (std::size_t i = 0; i < on_ref.size(); ++i)
    for (std::size_t j = i + 1; j < on_ref.size(); ++j)
      cv.max_distance = std::max(cv.max_distance, (on_ref[i] - on_ref[j]).cwiseAbs().maxCoeff());
  return cv;
}

double mass_constant(const GroundStateSolution& sol) {
  if (!sol.converged) throw Error(ErrorCode::NotConvergedInput, "mass constant needs a converged solution");
  return mass(sol.Q);
}

}  // namespace bstar
