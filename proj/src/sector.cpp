#include "bstar/sector.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "bstar/linalg.hpp"
#include "bstar/transform.hpp"

namespace bstar {

double spherical_j1(double x) {
  const double ax = std::abs(x);
  if (ax < 0.5) {
    const double x2 = x * x;
    return x * (1.0 / 3.0 -
                x2 * (1.0 / 30.0 -
                      x2 * (1.0 / 840.0 -
                            x2 * (1.0 / 45360.0 - x2 * (1.0 / 3991680.0 - x2 * (1.0 / 518918400.0 - x2 / 93405312000.0))))));
  }
  return std::sin(x) / (x * x) - std::cos(x) / x;
}

Eigen::MatrixXd multiplier_matrix(const RadialGrid& grid, const Eigen::VectorXd& m, Exec exec) {
  const Eigen::Index n = static_cast<Eigen::Index>(grid.n());
  Eigen::MatrixXd A(n, n);
  auto column = [&](Eigen::Index c) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e[c] = 1.0;
    A.col(c) = apply_multiplier(grid, e, m);
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (Eigen::Index c = 0; c < n; ++c) column(c);
  } else {
    for (Eigen::Index c = 0; c < n; ++c) column(c);
  }
  return A;
}

Eigen::MatrixXd bessel_sector_matrix(int ell, const RadialGrid& grid, Exec exec) {
  const Eigen::Index n = static_cast<Eigen::Index>(grid.n());
  const Eigen::Index K = n + 1;
  const double drho = grid.drho();
  Eigen::MatrixXd J(n, K);
  Eigen::VectorXd D(K);
  for (Eigen::Index k = 0; k < K; ++k) {
    const double rho = drho * static_cast<double>(k + 1);
    D[k] = (2.0 / std::numbers::pi) * drho * rho * rho * rho;
  }
  D[K - 1] *= 0.5;
  auto fill = [&](Eigen::Index j) {
    const double r = grid.r()[j];
    for (Eigen::Index k = 0; k < K; ++k) {
      const double x = r * drho * static_cast<double>(k + 1);
      J(j, k) = ell == 1 ? spherical_j1(x) : std::sph_bessel(static_cast<unsigned>(ell), x);
    }
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (Eigen::Index j = 0; j < n; ++j) fill(j);
  } else {
    for (Eigen::Index j = 0; j < n; ++j) fill(j);
  }
  const Eigen::VectorXd col_w = grid.h() * grid.r().array().square();
  Eigen::MatrixXd A = (J * D.asDiagonal()) * J.transpose();
  return A * col_w.asDiagonal();
}

SectorOperator sector_operator_matrix(int ell, const GridPtr& grid, int ell_max, Exec exec) {
  if (ell < 0 || ell > ell_max)
    throw Error(ErrorCode::ValidationError, "sector l=" + std::to_string(ell) + " outside 0.." + std::to_string(ell_max));
  const RadialGrid& g = *grid;
  SectorOperator op{ell, OperatorKind::sqrt_laplacian, grid, {}};
  if (ell == 0) {
    op.matrix = multiplier_matrix(g, g.rho(), exec);
  } else if (ell == 1) {
    op.matrix = bessel_sector_matrix(1, g, exec);
  } else {
    const int b = ell % 2;
    Eigen::MatrixXd M;
    if (b == 0) {
      M = multiplier_matrix(g, g.rho().array().square(), exec);
    } else {
      const Eigen::MatrixXd A1 = bessel_sector_matrix(1, g, exec);
      M = A1 * A1;
    }
    const double shift = static_cast<double>(ell * (ell + 1) - b * (b + 1));
    M.diagonal().array() += shift / g.r().array().square();
    op.matrix = weighted_matrix_function(M, g.w(), [](double x) { return std::sqrt(std::max(x, 0.0)); });
  }
  const double defect = weighted_symmetry_defect(op.matrix, g.w());
  if (defect > kSymmetryTolerance)
    throw Error(ErrorCode::QuadratureUnstable,
                "sector l=" + std::to_string(ell) + " weighted symmetry defect " + std::to_string(defect));
  return op;
}

}  // namespace bstar
