#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bstar/exec.hpp"
#include "bstar/grid.hpp"

namespace bstar {

// Uniform grid t_k = k*tau, k = 0..m-1, tau = t_max/(m-1).
class TGrid {
 public:
  TGrid(std::size_t m, double t_max);
  std::size_t m() const { return m_; }
  double t_max() const { return t_max_; }
  double tau() const { return tau_; }
  double t(std::size_t k) const { return tau_ * static_cast<double>(k); }
  // Trapezoid weight of node k.
  double weight(std::size_t k) const { return (k == 0 || k + 1 == m_) ? 0.5 * tau_ : tau_; }
  bool same_as(const TGrid& o) const { return m_ == o.m_ && t_max_ == o.t_max_; }

 private:
  std::size_t m_;
  double t_max_;
  double tau_;
};

// Axisymmetric field psi(r_j, t_k) on the truncated halfspace; column k is the
// slice at t_k and column 0 is the boundary trace.
struct HalfspaceField {
  GridPtr rgrid;
  TGrid tgrid;
  Eigen::MatrixXd values;

  HalfspaceField(GridPtr g, TGrid t, Eigen::MatrixXd v);
  RadialProfile trace() const;
};

// U(., t_k) = inverse(exp(-t_k rho) forward(u)); column 0 is u itself.
HalfspaceField poisson_extend(const RadialProfile& u, const TGrid& tgrid, Exec exec = Exec::parallel);

// One slice of the extension at an arbitrary t.
Eigen::VectorXd extension_slice(const RadialProfile& u, double t);

// -dU/dt at t = 0 from the spectral representation.
RadialProfile extension_normal_derivative(const RadialProfile& u);

// max over interior nodes of |(1/r)(r psi)_rr + psi_tt| by centred differences.
double harmonicity_defect(const HalfspaceField& psi);

struct FormReport {
  double value = 0.0;
  double dirichlet_part = 0.0;
  double boundary_part = 0.0;
};

struct FormOptions {
  // Refuse to evaluate unless u passes the V(0) - lambda = 1 check.
  bool require_rescaled = true;
  Exec exec = Exec::parallel;
};

// A_u[psi] = int int |grad psi|^2 dx dt + int (Phi_u - 1) psi(x,0)^2 dx.
//
// Staggered differences: the r-derivative lives at r_{j+1/2} with weight
// 4 pi r_{j+1/2}^2 h (psi = 0 at r_max) and trapezoid weights in t; the
// t-derivative lives at t_{k+1/2} with weight w_j tau. This is the
// symmetric discretization of the Dirichlet integral, second order in h and
// tau. value is formed as dirichlet_part + boundary_part.
FormReport quadratic_form(const RadialProfile& u, const HalfspaceField& psi, const FormOptions& opts = {});

// A_u[U] for the extension of u itself, streamed slice by slice without
// storing the field.
FormReport extension_form(const RadialProfile& u, const TGrid& tgrid, const FormOptions& opts = {});

struct BasisOptions {
  int size = 16;
  bool include_extension = true;
  // Only fields that vanish for t <= 1 (and for t >= 2): pure Dirichlet energy.
  bool zero_trace_only = false;
  std::uint64_t seed = 0;
};

struct MinimizeResult {
  double min_quotient = 0.0;
  // H^1 correlation of the minimizer with U (the extension of u).
  double correlation_with_extension = 0.0;
  // ||U||_{H^1}^2 of the extension of u.
  double extension_h1_norm2 = 0.0;
  std::vector<double> quotients;  // all generalized eigenvalues, ascending
  HalfspaceField minimizer;
};

// Minimizes A_u[psi] / ||psi||_{H^1}^2 over the span of a seeded basis: the
// extension U, bumps in (r, t), and smooth random fields. Gram matrices are
// accumulated one t-slice at a time.
MinimizeResult form_minimize(const RadialProfile& u, const TGrid& tgrid, const BasisOptions& basis,
                             const FormOptions& opts = {});

struct Crossing {
  double R = 0.0;
  bool u_above_inside = false;  // u > v on (0, R)
};

// Smallest radius where u - v changes sign. The sign change is bracketed on
// the nodes and the root refined on a six-point Lagrange interpolant of
// u - v. Throws Coincide when ||u - v||_inf <= 1e-9 ||u||_inf and NoCrossing
// when u - v keeps one sign.
Crossing first_crossing(const RadialProfile& u, const RadialProfile& v);

enum class ContradictionStatus { coincide, evaluated };

struct ContradictionReport {
  ContradictionStatus status = ContradictionStatus::coincide;
  Crossing crossing;
  double a_u_w = 0.0;
  double a_v_w = 0.0;
  double value = 0.0;  // a_u_w + a_v_w, from the volume quadrature
  // -2 sum_{r_j < R} f_j W(r_j, 0) w_j with f = (Phi_u - Phi_v)(u + v)/2.
  double boundary_value = 0.0;
  // 2 sum_j W(r_j, 0) (res_u - res_v)_j w_j, res = sqrt(-Delta)u + (Phi_u - 1)u.
  // Zero for exact solutions.
  double residual_term = 0.0;
  // Boundary form of the identity valid for arbitrary u, v:
  //   A_u[W] + A_v[W] = -2 int f W + 2 int W (res_u - res_v).
  double boundary_value_general = 0.0;
  double agreement = 0.0;        // |value - boundary_value_general| / max(|value|, |boundary_value_general|)
  double exact_form_agreement = 0.0;  // same with boundary_value
  std::size_t omega_nodes = 0;
  double trace_outside_ball = 0.0;  // sum_{r_j >= R} |W(r_j,0)| w_j
  bool near_solutions = false;
  bool alarm = false;  // near solutions and value < 0
  std::string message;
};

struct ContradictionOptions {
  bool require_rescaled = true;
  // Inputs whose equation residual is below this count as near-solutions.
  double solution_residual = 1e-6;
  Exec exec = Exec::parallel;
};

// Builds W = (U - V) 1_Omega, Omega the flood-fill component of {U > V}
// meeting {r < R, t = 0} (roles swapped when v > u inside R), and evaluates
// both sides of the boundary identity.
ContradictionReport contradiction_functional(const RadialProfile& u, const RadialProfile& v, const TGrid& tgrid,
                                             const ContradictionOptions& opts = {});

}  // namespace bstar
