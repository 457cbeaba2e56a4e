#pragma once

#include <Eigen/Dense>

#include "bstar/exec.hpp"
#include "bstar/grid.hpp"

namespace bstar {

// Quadrature for the multipole integral
//
//   I_l[G](r) = int_0^inf K_l(r,s) s^2 G(s) ds,   K_l(r,s) = min(r,s)^l / max(r,s)^(l+1).
//
// The kernel has a derivative jump on the diagonal, so the plain trapezoid sum
// is only second order. The rule adds the Euler-Maclaurin jump terms through
// h^4: a diagonal part and a part proportional to (r^2 G')' taken by a
// symmetric three-point difference. At the origin, l = 0 uses zero flux and
// l >= 1 a zero ghost value, matching the parity of r^l.
//
// The dense matrix C satisfies C = S diag(r^2) with S symmetric, so
// diag(w) C is symmetric, which is what the exchange term of the linearized
// operator needs.
Eigen::MatrixXd multipole_matrix(int ell, const RadialGrid& grid, Exec exec = Exec::parallel);

// The same rule applied in O(n) with prefix and suffix sums.
Eigen::VectorXd multipole_apply(int ell, const RadialGrid& grid, const Eigen::VectorXd& G);

}  // namespace bstar
