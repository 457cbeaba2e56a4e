#include "bstar/transform.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <vector>

namespace bstar {
namespace {

// FFTW planning is not thread-safe, executing a finished plan on fresh arrays
// is. Plans are created once per (kind, size) under a lock and kept for the
// life of the process.
class PlanCache {
 public:
  fftw_plan get(fftw_r2r_kind kind, int n) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto key = std::make_pair(static_cast<int>(kind), n);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    std::vector<double> a(static_cast<std::size_t>(n)), b(static_cast<std::size_t>(n));
    fftw_plan p = fftw_plan_r2r_1d(n, a.data(), b.data(), kind, FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, p);
    return p;
  }
  ~PlanCache() {
    for (auto& [key, p] : plans_) fftw_destroy_plan(p);
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<int, int>, fftw_plan> plans_;
};

PlanCache& plans() {
  static PlanCache cache;
  return cache;
}

void run_r2r(fftw_r2r_kind kind, std::span<const double> in, std::span<double> out) {
  const int n = static_cast<int>(in.size());
  fftw_plan p = plans().get(kind, n);
  // FFTW's new-array interface takes a non-const input; out-of-place r2r plans
  // do not write to it.
  fftw_execute_r2r(p, const_cast<double*>(in.data()), out.data());
}

}  // namespace

void dst1(std::span<const double> in, std::span<double> out) {
  run_r2r(FFTW_RODFT00, in, out);
  for (double& v : out) v *= 0.5;
}

Eigen::VectorXd dst1(const Eigen::VectorXd& x) {
  Eigen::VectorXd y(x.size());
  dst1(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())),
       std::span<double>(y.data(), static_cast<std::size_t>(y.size())));
  return y;
}

SpectralProfile forward_transform(const RadialProfile& f) {
  const RadialGrid& g = *f.grid();
  Eigen::VectorXd rf = g.r().cwiseProduct(f.values());
  Eigen::VectorXd F = dst1(rf);
  F.array() *= 4.0 * std::numbers::pi * g.h() / g.rho().array();
  return SpectralProfile(f.grid(), std::move(F));
}

RadialProfile inverse_transform(const SpectralProfile& F) {
  const RadialGrid& g = *F.grid();
  Eigen::VectorXd rF = g.rho().cwiseProduct(F.values());
  Eigen::VectorXd f = dst1(rF);
  f.array() *= g.drho() / (2.0 * std::numbers::pi * std::numbers::pi) / g.r().array();
  return RadialProfile(F.grid(), std::move(f));
}

Eigen::VectorXd sine_coefficients(const RadialGrid& grid, const Eigen::VectorXd& f) {
  Eigen::VectorXd c = dst1(Eigen::VectorXd(grid.r().cwiseProduct(f)));
  c *= 2.0 / static_cast<double>(grid.n() + 1);
  return c;
}

Eigen::VectorXd apply_multiplier(const RadialGrid& grid, const Eigen::VectorXd& f, const Eigen::VectorXd& m) {
  // forward then inverse collapse to one normalization constant 2/(n+1).
  Eigen::VectorXd c = sine_coefficients(grid, f);
  c.array() *= m.array();
  Eigen::VectorXd out = dst1(c);
  out.array() /= grid.r().array();
  return out;
}

Eigen::VectorXd apply_half_laplacian(const RadialGrid& grid, const Eigen::VectorXd& f) {
  return apply_multiplier(grid, f, grid.rho());
}

RadialProfile apply_half_laplacian(const RadialProfile& f) {
  return RadialProfile(f.grid(), apply_half_laplacian(*f.grid(), f.values()));
}

RadialProfile radial_derivative(const RadialProfile& f) {
  const RadialGrid& g = *f.grid();
  const std::size_t n = g.n();
  Eigen::VectorXd c = sine_coefficients(g, f.values());
  std::vector<double> x(n + 2, 0.0), y(n + 2);
  for (std::size_t k = 0; k < n; ++k) x[k + 1] = c[static_cast<Eigen::Index>(k)] * g.rho()[static_cast<Eigen::Index>(k)];
  run_r2r(FFTW_REDFT00, x, y);
  Eigen::VectorXd d(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    d[jj] = (0.5 * y[j + 1] - f.values()[jj]) / g.r()[jj];
  }
  return RadialProfile(f.grid(), std::move(d));
}

namespace {

double sine_series_at(const Eigen::VectorXd& c, double theta) {
  // Clenshaw recurrence for sum_{k>=1} c_k sin(k theta).
  const double two_cos = 2.0 * std::cos(theta);
  double b1 = 0.0, b2 = 0.0;
  for (Eigen::Index k = c.size() - 1; k >= 0; --k) {
    const double b0 = c[k] + two_cos * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return b1 * std::sin(theta);
}

}  // namespace

Eigen::VectorXd sine_interpolate(const RadialProfile& f, const Eigen::VectorXd& x, Exec exec) {
  const RadialGrid& g = *f.grid();
  const Eigen::VectorXd c = sine_coefficients(g, f.values());
  const double origin = c.dot(g.rho());
  const Eigen::Index m = x.size();
  Eigen::VectorXd out(m);
  auto eval = [&](Eigen::Index i) {
    const double xi = x[i];
    if (xi <= 0.0) {
      out[i] = origin;
    } else if (xi >= g.r_max()) {
      out[i] = 0.0;
    } else {
      out[i] = sine_series_at(c, g.drho() * xi) / xi;
    }
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < m; ++i) eval(i);
  } else {
    for (Eigen::Index i = 0; i < m; ++i) eval(i);
  }
  return out;
}

OriginJet origin_jet(const RadialGrid& grid, const Eigen::VectorXd& f) {
  const Eigen::Index p = std::min<Eigen::Index>(4, f.size());
  Eigen::MatrixXd A(p, p);
  Eigen::VectorXd b(p);
  for (Eigen::Index i = 0; i < p; ++i) {
    const double s = grid.r()[i] * grid.r()[i];
    double pw = 1.0;
    for (Eigen::Index k = 0; k < p; ++k) {
      A(i, k) = pw;
      pw *= s;
    }
    b[i] = f[i];
  }
  Eigen::VectorXd coef = A.fullPivLu().solve(b);
  return OriginJet{coef[0], p > 1 ? 2.0 * coef[1] : 0.0};
}

}  // namespace bstar
