#include "bstar/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace bstar {

RadialGrid::RadialGrid(std::size_t n, double r_max) : n_(n), r_max_(r_max) {
  if (n == 0) throw Error(ErrorCode::InvalidProfile, "grid needs n >= 1");
  if (!(r_max > 0.0) || !std::isfinite(r_max)) throw Error(ErrorCode::InvalidProfile, "grid needs r_max > 0");
  h_ = r_max / static_cast<double>(n + 1);
  drho_ = std::numbers::pi / r_max;
  r_.resize(n);
  w_.resize(n);
  rho_.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double idx = static_cast<double>(j + 1);
    r_[j] = idx * h_;
    w_[j] = 4.0 * std::numbers::pi * r_[j] * r_[j] * h_;
    rho_[j] = idx * drho_;
  }
}

GridPtr make_grid(std::size_t n, double r_max) { return std::make_shared<const RadialGrid>(n, r_max); }

void require_same_grid(const RadialGrid& a, const RadialGrid& b) {
  if (!a.same_as(b))
    throw Error(ErrorCode::GridMismatch, "grids (n=" + std::to_string(a.n()) + ", r_max=" + std::to_string(a.r_max()) +
                                             ") and (n=" + std::to_string(b.n()) +
                                             ", r_max=" + std::to_string(b.r_max()) + ") differ");
}

double inner_product(const RadialProfile& f, const RadialProfile& g) {
  require_same_grid(*f.grid(), *g.grid());
  return (f.grid()->w().array() * f.values().array() * g.values().array()).sum();
}

double mass(const RadialProfile& f) { return inner_product(f, f); }

double weighted_norm(const RadialGrid& grid, const Eigen::VectorXd& v) {
  return std::sqrt((grid.w().array() * v.array().square()).sum());
}

}  // namespace bstar
