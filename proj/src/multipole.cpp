#include "bstar/multipole.hpp"

#include <cmath>

namespace bstar {
namespace {

struct Corrections {
  Eigen::VectorXd diag;   // multiplies G_j
  Eigen::VectorXd lower;  // T(j, j-1)
  Eigen::VectorXd mid;    // T(j, j)
  Eigen::VectorXd upper;  // T(j, j+1)
  double t_coef;          // (h^4/720) * 3 (2l+1), applied as t_coef/r_j^2 * (T G)_j
};

Corrections corrections(int ell, const RadialGrid& g) {
  const Eigen::Index n = static_cast<Eigen::Index>(g.n());
  const double h = g.h();
  const double c = 2.0 * ell + 1.0;
  const double ll = static_cast<double>(ell * (ell + 1));
  Corrections k{Eigen::VectorXd(n), Eigen::VectorXd(n), Eigen::VectorXd(n), Eigen::VectorXd(n),
                h * h * h * h / 720.0 * 3.0 * c};
  const double h2 = h * h;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double r = g.r()[j];
    const double r2 = r * r;
    k.diag[j] = -(h2 / 12.0) * c + (h2 * h2 / 720.0) * c * ll / r2;
    const double rp = (r + 0.5 * h) * (r + 0.5 * h) / h2;
    const double rm = (r - 0.5 * h) * (r - 0.5 * h) / h2;
    k.upper[j] = j + 1 < n ? rp : 0.0;
    k.lower[j] = j > 0 ? rm : 0.0;
    k.mid[j] = -rp - ((j > 0 || ell >= 1) ? rm : 0.0);
  }
  return k;
}

}  // namespace

Eigen::MatrixXd multipole_matrix(int ell, const RadialGrid& g, Exec exec) {
  const Eigen::Index n = static_cast<Eigen::Index>(g.n());
  const double h = g.h();
  const Corrections k = corrections(ell, g);
  Eigen::MatrixXd C(n, n);
  auto row = [&](Eigen::Index j) {
    const double r = g.r()[j];
    for (Eigen::Index m = 0; m < n; ++m) {
      const double s = g.r()[m];
      const double lo = std::min(r, s), hi = std::max(r, s);
      C(j, m) = h * std::pow(lo / hi, ell) / hi * s * s;
    }
    const double tr = k.t_coef / (r * r);
    C(j, j) += k.diag[j] + tr * k.mid[j];
    if (j > 0) C(j, j - 1) += tr * k.lower[j];
    if (j + 1 < n) C(j, j + 1) += tr * k.upper[j];
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (Eigen::Index j = 0; j < n; ++j) row(j);
  } else {
    for (Eigen::Index j = 0; j < n; ++j) row(j);
  }
  return C;
}

Eigen::VectorXd multipole_apply(int ell, const RadialGrid& g, const Eigen::VectorXd& G) {
  const Eigen::Index n = static_cast<Eigen::Index>(g.n());
  const double h = g.h();
  const Corrections k = corrections(ell, g);
  const Eigen::VectorXd& r = g.r();
  // inner_j = sum_{m<=j} r_m^(l+2) G_m, outer_j = sum_{m>j} r_m^(1-l) G_m.
  Eigen::VectorXd inner(n), outer(n);
  double acc = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    acc += std::pow(r[j], ell + 2) * G[j];
    inner[j] = acc;
  }
  acc = 0.0;
  for (Eigen::Index j = n - 1; j >= 0; --j) {
    outer[j] = acc;
    acc += std::pow(r[j], 1 - ell) * G[j];
  }
  Eigen::VectorXd out(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double base = h * (inner[j] / std::pow(r[j], ell + 1) + std::pow(r[j], ell) * outer[j]);
    double tg = k.mid[j] * G[j];
    if (j > 0) tg += k.lower[j] * G[j - 1];
    if (j + 1 < n) tg += k.upper[j] * G[j + 1];
    out[j] = base + k.diag[j] * G[j] + k.t_coef / (r[j] * r[j]) * tg;
  }
  return out;
}

}  // namespace bstar
