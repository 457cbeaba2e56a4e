#pragma once

#include <cstddef>
#include <memory>

#include <Eigen/Dense>

#include "bstar/errors.hpp"

namespace bstar {

// Uniform radial grid r_j = j*h, j = 1..n, h = r_max/(n+1). Functions are taken
// to vanish at r_max, and r*f vanishes at the origin, which is exactly the
// boundary behaviour of a sine series in r*f.
class RadialGrid {
 public:
  RadialGrid(std::size_t n, double r_max);

  std::size_t n() const { return n_; }
  double r_max() const { return r_max_; }
  double h() const { return h_; }
  // Spacing of the dual frequency grid rho_k = k*pi/r_max.
  double drho() const { return drho_; }

  const Eigen::VectorXd& r() const { return r_; }
  // w_j = 4*pi*r_j^2*h, the trapezoid rule for int f 4 pi r^2 dr.
  const Eigen::VectorXd& w() const { return w_; }
  const Eigen::VectorXd& rho() const { return rho_; }

  bool same_as(const RadialGrid& other) const {
    return n_ == other.n_ && r_max_ == other.r_max_;
  }

 private:
  std::size_t n_;
  double r_max_;
  double h_;
  double drho_;
  Eigen::VectorXd r_, w_, rho_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

GridPtr make_grid(std::size_t n, double r_max);

// Shared implementation of the two sampled-function types. Values are checked
// once at construction; afterwards the object is immutable.
template <class Tag>
class GridFunction {
 public:
  GridFunction(GridPtr grid, Eigen::VectorXd values) : grid_(std::move(grid)), values_(std::move(values)) {
    if (!grid_) throw Error(ErrorCode::InvalidProfile, "null grid");
    if (static_cast<std::size_t>(values_.size()) != grid_->n())
      throw Error(ErrorCode::InvalidProfile, "length " + std::to_string(values_.size()) +
                                                 " does not match grid size " + std::to_string(grid_->n()));
    if (!values_.allFinite()) throw Error(ErrorCode::InvalidProfile, "non-finite entry");
  }

  const GridPtr& grid() const { return grid_; }
  const Eigen::VectorXd& values() const { return values_; }
  double operator[](std::size_t j) const { return values_[static_cast<Eigen::Index>(j)]; }
  std::size_t size() const { return grid_->n(); }

 private:
  GridPtr grid_;
  Eigen::VectorXd values_;
};

struct RadialTag {};
struct SpectralTag {};
using RadialProfile = GridFunction<RadialTag>;
using SpectralProfile = GridFunction<SpectralTag>;

void require_same_grid(const RadialGrid& a, const RadialGrid& b);

// Samples f(r_j) into a profile.
template <class F>
RadialProfile sample(const GridPtr& grid, F&& f) {
  Eigen::VectorXd v(grid->n());
  for (Eigen::Index j = 0; j < v.size(); ++j) v[j] = f(grid->r()[j]);
  return RadialProfile(grid, std::move(v));
}

// Weighted inner product sum_j w_j f_j g_j, the discrete int f g dx over R^3.
double inner_product(const RadialProfile& f, const RadialProfile& g);
double mass(const RadialProfile& f);
// sqrt(mass(f)) without constructing a profile.
double weighted_norm(const RadialGrid& grid, const Eigen::VectorXd& v);

}  // namespace bstar
