#pragma once

#include "bstar/grid.hpp"

namespace bstar {

// V(r) = int |u(y)|^2 / max(r,|y|) dy (Newton's theorem for radial densities),
// V0 = V(0) = int |u(y)|^2/|y| dy, Phi = V0 - V.
struct PotentialPair {
  RadialProfile V;
  double V0;
  RadialProfile Phi;
};

// O(n) evaluation by the corrected multipole quadrature (l = 0). V0 uses the
// Euler-Maclaurin form of int_0^inf 4 pi s u^2 ds, with u(0) and u''(0) from a
// local even fit at the origin.
PotentialPair newton_potential(const RadialProfile& u);

// Far-field extension V(r) = mass/r for r beyond the grid.
double potential_tail(const RadialProfile& u, double r);

// u_mu(r) = mu^{3/2} u(mu r), resampled on the same grid through the
// band-limited sine interpolant.
RadialProfile scale_profile(const RadialProfile& u, double mu);

// mu = 1/(V0 - lambda). Along u_mu both V(0) and the eigenvalue scale by mu,
// so V_mu(0) - lambda_mu = mu (V0 - lambda), which equals 1 for this mu.
double rescale_factor(double V0, double lambda);

struct RescaledProfile {
  RadialProfile u;
  double mu;
};
// Throws RescaleImpossible when V0 <= lambda.
RescaledProfile canonical_rescale(const RadialProfile& u, double lambda);

// Rayleigh-quotient eigenvalue of u for sqrt(-Delta) u + lambda u = V_u u:
//   lambda = (<u, V u> - <u, sqrt(-Delta) u>) / <u, u>.
double estimate_eigenvalue(const RadialProfile& u);

// V0 - lambda_est - 1; zero for a canonically rescaled solution.
double rescale_defect(const RadialProfile& u);

inline constexpr double kRescaleTolerance = 1e-4;
// Throws NotRescaled when |rescale_defect(u)| > kRescaleTolerance.
void require_rescaled(const RadialProfile& u, const char* what);

}  // namespace bstar
