#pragma once

#include <span>

#include <Eigen/Dense>

#include "bstar/exec.hpp"
#include "bstar/grid.hpp"

namespace bstar {

// S(x)_k = sum_j x_j sin(pi (j+1)(k+1)/(n+1)), the unnormalized DST-I.
// S(S(x)) = (n+1)/2 * x.
Eigen::VectorXd dst1(const Eigen::VectorXd& x);
void dst1(std::span<const double> in, std::span<double> out);

// F(rho_k) = (4 pi h / rho_k) sum_j r_j f_j sin(rho_k r_j).
SpectralProfile forward_transform(const RadialProfile& f);
// f(r_j) = (drho / (2 pi^2 r_j)) sum_k rho_k F_k sin(rho_k r_j).
RadialProfile inverse_transform(const SpectralProfile& F);

// inverse(m(rho) * forward(f)) for a multiplier given at the dual nodes.
Eigen::VectorXd apply_multiplier(const RadialGrid& grid, const Eigen::VectorXd& f, const Eigen::VectorXd& m);

RadialProfile apply_half_laplacian(const RadialProfile& f);
Eigen::VectorXd apply_half_laplacian(const RadialGrid& grid, const Eigen::VectorXd& f);

// Sine-series coefficients c_k with r f(r) = sum_k c_k sin(rho_k r).
Eigen::VectorXd sine_coefficients(const RadialGrid& grid, const Eigen::VectorXd& f);

// f' from the sine series: (r f)' is a cosine series, and f' = ((r f)' - f)/r.
RadialProfile radial_derivative(const RadialProfile& f);

// Evaluates the band-limited interpolant of f at arbitrary radii. Points at or
// beyond r_max give 0; the point r = 0 gives the series limit sum c_k rho_k.
Eigen::VectorXd sine_interpolate(const RadialProfile& f, const Eigen::VectorXd& x, Exec exec = Exec::parallel);

// Value and second derivative at the origin from an even polynomial fit in r^2
// through the first four nodes. Local, so a kink far from the origin does not
// pollute it.
struct OriginJet {
  double value;
  double second_derivative;
};
OriginJet origin_jet(const RadialGrid& grid, const Eigen::VectorXd& f);

}  // namespace bstar
