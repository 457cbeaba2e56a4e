#pragma once

#include <Eigen/Dense>

#include "bstar/exec.hpp"
#include "bstar/grid.hpp"

namespace bstar {

enum class OperatorKind { sqrt_laplacian, L_plus };

// Dense radial matrix of an operator restricted to the spherical-harmonic
// sector l. Symmetric with respect to the grid weights.
struct SectorOperator {
  int ell = 0;
  OperatorKind kind = OperatorKind::sqrt_laplacian;
  GridPtr grid;
  Eigen::MatrixXd matrix;

  Eigen::VectorXd apply(const Eigen::VectorXd& f) const { return matrix * f; }
};

inline constexpr double kSymmetryTolerance = 1e-8;

// sqrt(-Delta) in sector l.
//
//  l = 0: the sine-transform multiplier written out as a matrix.
//  l = 1: spherical Bessel quadrature on rho_k = k pi/r_max, k = 1..n+1, with
//         the Nyquist node at half weight. Dropping that node leaves a
//         spurious near-null vector.
//  l >= 2: the square root of A_b^2 + (l(l+1) - b(b+1))/r^2 with b = l mod 2.
//         A plain Bessel quadrature at these orders has spurious modes
//         concentrated at the origin; the square-root form inherits the clean
//         spectrum of the base sector of the same parity.
//
// Throws ValidationError when l > ell_max and QuadratureUnstable when the
// assembled matrix misses the weighted-symmetry tolerance.
SectorOperator sector_operator_matrix(int ell, const GridPtr& grid, int ell_max = 3, Exec exec = Exec::parallel);

// Dense matrix of the sine-transform multiplier m(rho_k).
Eigen::MatrixXd multiplier_matrix(const RadialGrid& grid, const Eigen::VectorXd& m, Exec exec = Exec::parallel);

// Bessel-quadrature matrix for l = 1 (exposed for tests and the benchmark).
Eigen::MatrixXd bessel_sector_matrix(int ell, const RadialGrid& grid, Exec exec = Exec::parallel);

// Spherical Bessel j_1 with a series branch near 0.
double spherical_j1(double x);

}  // namespace bstar
