#include "bstar/potentials.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "bstar/multipole.hpp"
#include "bstar/transform.hpp"

namespace bstar {

PotentialPair newton_potential(const RadialProfile& u) {
  const RadialGrid& g = *u.grid();
  const double four_pi = 4.0 * std::numbers::pi;
  const Eigen::VectorXd density = u.values().array().square();
  Eigen::VectorXd V = four_pi * multipole_apply(0, g, density);

  const OriginJet f0 = origin_jet(g, density);
  const double h = g.h();
  const double trapezoid = h * g.r().dot(density);
  const double V0 = four_pi * (trapezoid + h * h / 12.0 * f0.value - h * h * h * h / 720.0 * 3.0 * f0.second_derivative);

  Eigen::VectorXd Phi = V0 - V.array();
  return PotentialPair{RadialProfile(u.grid(), std::move(V)), V0, RadialProfile(u.grid(), std::move(Phi))};
}

double potential_tail(const RadialProfile& u, double r) { return mass(u) / r; }

RadialProfile scale_profile(const RadialProfile& u, double mu) {
  const Eigen::VectorXd x = mu * u.grid()->r();
  Eigen::VectorXd v = sine_interpolate(u, x);
  v *= std::pow(mu, 1.5);
  return RadialProfile(u.grid(), std::move(v));
}

double rescale_factor(double V0, double lambda) {
  if (!(V0 > lambda))
    throw Error(ErrorCode::RescaleImpossible,
                "V(0)=" + std::to_string(V0) + " does not exceed lambda=" + std::to_string(lambda));
  return 1.0 / (V0 - lambda);
}

RescaledProfile canonical_rescale(const RadialProfile& u, double lambda) {
  const double mu = rescale_factor(newton_potential(u).V0, lambda);
  return RescaledProfile{scale_profile(u, mu), mu};
}

double estimate_eigenvalue(const RadialProfile& u) {
  const PotentialPair p = newton_potential(u);
  const RadialGrid& g = *u.grid();
  const Eigen::VectorXd& x = u.values();
  const Eigen::VectorXd wx = g.w().cwiseProduct(x);
  const double uu = wx.dot(x);
  if (uu == 0.0) throw Error(ErrorCode::ZeroProfile, "eigenvalue of the zero profile");
  const double uvu = wx.dot(p.V.values().cwiseProduct(x));
  const double uau = wx.dot(apply_half_laplacian(g, x));
  return (uvu - uau) / uu;
}

double rescale_defect(const RadialProfile& u) {
  return newton_potential(u).V0 - estimate_eigenvalue(u) - 1.0;
}

void require_rescaled(const RadialProfile& u, const char* what) {
  const double d = rescale_defect(u);
  if (!(std::abs(d) <= kRescaleTolerance))
    throw Error(ErrorCode::NotRescaled, std::string(what) + ": V(0) - lambda - 1 = " + std::to_string(d));
}

}  // namespace bstar
