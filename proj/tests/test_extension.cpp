#include <doctest.h>

#include <map>

#include "bstar/extension.hpp"
#include "bstar/ground_state.hpp"
#include "bstar/potentials.hpp"
#include "bstar/transform.hpp"
#include "test_support.hpp"

using namespace bstar;

namespace {

const RadialProfile& Q(std::size_t n) {
  static std::map<std::size_t, RadialProfile> cache;
  auto it = cache.find(n);
  if (it == cache.end()) {
    SolverConfig c;
    c.n = n;
    it = cache.emplace(n, solve_ground_state(c).Q).first;
  }
  return it->second;
}

const RadialProfile& rescaled(std::size_t n) {
  static std::map<std::size_t, RadialProfile> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, canonical_rescale(Q(n), 1.0).u).first;
  return it->second;
}

TGrid default_tgrid(std::size_t n) { return TGrid(n / 2, 100.0); }

// Smooth field supported in 1 <= t <= 2 and r < 6: sin^2 window in t times a
// shell in r.
HalfspaceField interior_bump(const GridPtr& g, const TGrid& tg) {
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(g->n()), static_cast<Eigen::Index>(tg.m()));
  for (std::size_t k = 0; k < tg.m(); ++k) {
    const double t = tg.t(k);
    if (t <= 1.0 || t >= 2.0) continue;
    const double wt = std::pow(std::sin(oracle::pi * (t - 1.0)), 2);
    for (Eigen::Index j = 0; j < v.rows(); ++j) v(j, static_cast<Eigen::Index>(k)) = wt * std::exp(-std::pow(g->r()[j] - 2.0, 2));
  }
  return HalfspaceField(g, tg, v);
}

}  // namespace

TEST_CASE("Poisson semigroup on the Poisson kernel") {
  const auto g = make_grid(2048, 200.0);
  const auto P1 = sample(g, [](double r) { return oracle::poisson_kernel(1.0, r); });
  const TGrid tg(11, 2.0);
  const HalfspaceField U = poisson_extend(P1, tg);
  CHECK(U.values.col(0) == P1.values());
  CHECK(U.trace().values() == P1.values());
  double err = 0.0;
  for (std::size_t k = 0; k < tg.m(); ++k) {
    const Eigen::VectorXd exact = sample(g, [&](double r) { return oracle::poisson_kernel(1.0 + tg.t(k), r); }).values();
    err = std::max(err, (U.values.col(static_cast<Eigen::Index>(k)) - exact).cwiseAbs().maxCoeff());
  }
  MESSAGE("max deviation from P_{1+t}: " << err);
  CHECK(err <= 1e-6);
  CHECK((poisson_extend(P1, tg, Exec::serial).values - U.values).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("semigroup composes additively and the generator is sqrt(-Delta)") {
  const auto g = make_grid(1024, 60.0);
  const auto u = sample(g, [](double r) { return std::exp(-r * r / 2.0); });
  const RadialProfile half(g, extension_slice(u, 0.7));
  const Eigen::VectorXd twice = extension_slice(half, 0.5);
  CHECK((twice - extension_slice(u, 1.2)).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK(oracle::rel_max(extension_normal_derivative(u).values(), apply_half_laplacian(u).values()) <= 1e-8);
}

TEST_CASE("discrete harmonicity defect shrinks under refinement") {
  double prev = 1e300;
  for (std::size_t n : {256u, 512u, 1024u}) {
    const auto g = make_grid(n, 40.0);
    const auto u = sample(g, [](double r) { return oracle::poisson_kernel(1.0, r); });
    const double d = harmonicity_defect(poisson_extend(u, TGrid(n / 2, 20.0)));
    MESSAGE("n=" << n << " harmonicity defect " << d);
    CHECK(d < prev);
    prev = d;
  }
}

TEST_CASE("zero-trace field: pure Dirichlet energy") {
  const RadialProfile& u = rescaled(1024);
  const TGrid tg = default_tgrid(1024);
  const FormReport f = quadratic_form(u, interior_bump(u.grid(), tg));
  CHECK(f.boundary_part == 0.0);
  CHECK(f.value == f.dirichlet_part);
  CHECK(f.value > 0.0);
}

TEST_CASE("A_u[U] vanishes under refinement") {
  const FormReport c = extension_form(rescaled(1024), default_tgrid(1024));
  const FormReport f = extension_form(rescaled(2048), default_tgrid(2048));
  MESSAGE("A_u[U]: n=1024 " << c.value << ", n=2048 " << f.value);
  CHECK(std::abs(c.value) / std::abs(f.value) >= 2.0);
  CHECK(f.value == f.dirichlet_part + f.boundary_part);
  // The streamed evaluation equals the stored-field one.
  const HalfspaceField U = poisson_extend(rescaled(1024), default_tgrid(1024));
  const FormReport stored = quadratic_form(rescaled(1024), U);
  CHECK(std::abs(stored.value - c.value) <= 1e-12 * std::abs(stored.dirichlet_part));
  FormOptions serial;
  serial.exec = Exec::serial;
  CHECK(std::abs(quadratic_form(rescaled(1024), U, serial).value - stored.value) <= 1e-12 * std::abs(stored.dirichlet_part));
}

TEST_CASE("perturbing U by an interior bump raises the form") {
  const RadialProfile& u = rescaled(1024);
  const TGrid tg = default_tgrid(1024);
  const HalfspaceField U = poisson_extend(u, tg);
  const HalfspaceField bump = interior_bump(u.grid(), tg);
  const HalfspaceField psi(u.grid(), tg, U.values + 0.1 * bump.values);
  CHECK(quadratic_form(u, psi).value > 0.0);
}

TEST_CASE("form guards") {
  const RadialProfile& u = rescaled(512);
  const RadialProfile doubled(u.grid(), 2.0 * u.values());
  try {
    form_minimize(doubled, default_tgrid(512), BasisOptions{});
    FAIL("expected NotRescaled");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotRescaled);
  }
  const HalfspaceField other = poisson_extend(rescaled(1024), default_tgrid(1024));
  try {
    quadratic_form(u, other);
    FAIL("expected GridMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::GridMismatch);
  }
}

TEST_CASE("form minimization over a seeded basis") {
  const RadialProfile& u = rescaled(2048);
  const TGrid tg = default_tgrid(2048);
  const MinimizeResult r = form_minimize(u, tg, BasisOptions{});
  const double eps = std::abs(extension_form(u, tg).value) / r.extension_h1_norm2;
  MESSAGE("min quotient " << r.min_quotient << ", eps " << eps << ", correlation " << r.correlation_with_extension);
  CHECK(r.min_quotient >= -eps);
  CHECK(r.min_quotient <= eps);
  CHECK(r.correlation_with_extension >= 0.999);
  CHECK(std::is_sorted(r.quotients.begin(), r.quotients.end()));

  BasisOptions zero;
  zero.include_extension = false;
  zero.zero_trace_only = true;
  const MinimizeResult z = form_minimize(u, tg, zero);
  CHECK(z.min_quotient > 0.0);
}

TEST_CASE("form minimization: serial and parallel agree, seeds reproduce") {
  const RadialProfile& u = rescaled(1024);
  const TGrid tg = default_tgrid(1024);
  FormOptions serial;
  serial.exec = Exec::serial;
  const MinimizeResult a = form_minimize(u, tg, BasisOptions{});
  const MinimizeResult b = form_minimize(u, tg, BasisOptions{}, serial);
  const MinimizeResult c = form_minimize(u, tg, BasisOptions{});
  CHECK(std::abs(a.min_quotient - b.min_quotient) <= 1e-10 * std::abs(a.quotients.back()));
  CHECK(a.min_quotient == c.min_quotient);
}

TEST_CASE("first crossing") {
  const auto g = make_grid(2048, 60.0);
  const auto u = sample(g, [](double r) { return 2.0 * std::exp(-r); });
  const auto v = sample(g, [](double r) { return std::exp(-r / 2.0); });
  const Crossing c = first_crossing(u, v);
  CHECK(std::abs(c.R - 2.0 * std::log(2.0)) <= 1e-6);
  CHECK(c.u_above_inside);
  auto code_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::IoError;
  };
  CHECK(code_of([&] { first_crossing(u, u); }) == ErrorCode::Coincide);
  CHECK(code_of([&] { first_crossing(RadialProfile(g, 2.0 * v.values()), v); }) == ErrorCode::NoCrossing);
}

TEST_CASE("contradiction functional: synthetic pair") {
  ContradictionOptions o;
  o.require_rescaled = false;
  auto run = [&](std::size_t n) {
    const auto g = make_grid(n, 40.0);
    const auto u = sample(g, [](double r) { return 2.0 * std::exp(-r); });
    const auto v = sample(g, [](double r) { return std::exp(-r / 2.0); });
    return contradiction_functional(u, v, TGrid(n / 2, 20.0), o);
  };
  // W has a kink across the boundary of Omega, so the volume quadrature
  // converges at first order; 1e-3 is reached from n = 4096 (tau = h).
  const ContradictionReport coarse = run(2048);
  const ContradictionReport rep = run(4096);
  MESSAGE("value " << rep.value << ", general boundary form " << rep.boundary_value_general << ", f-only form "
                   << rep.boundary_value << ", residual term " << rep.residual_term);
  REQUIRE(rep.status == ContradictionStatus::evaluated);
  CHECK(std::abs(rep.crossing.R - 2.0 * std::log(2.0)) <= 1e-6);
  CHECK(rep.agreement <= 1e-3);
  CHECK(rep.agreement < coarse.agreement);
  CHECK(rep.boundary_value_general == doctest::Approx(rep.boundary_value + rep.residual_term));
  CHECK(rep.value == rep.a_u_w + rep.a_v_w);
  CHECK_FALSE(rep.near_solutions);
  CHECK_FALSE(rep.alarm);
  CHECK(rep.omega_nodes > 0);

  const auto g = make_grid(512, 40.0);
  const auto u = sample(g, [](double r) { return 2.0 * std::exp(-r); });
  const auto v = sample(g, [](double r) { return std::exp(-r / 2.0); });
  // Without opting out, non-rescaled inputs are refused.
  try {
    contradiction_functional(u, v, TGrid(256, 20.0));
    FAIL("expected NotRescaled");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotRescaled);
  }
}

TEST_CASE("contradiction functional: genuine solutions coincide") {
  SolverConfig a, b;
  a.n = b.n = 2048;
  b.init.kind = InitKind::exponential;
  b.init.param = 0.5;
  const RadialProfile qa = canonical_rescale(solve_ground_state(a).Q, 1.0).u;
  const RadialProfile qb = canonical_rescale(solve_ground_state(b).Q, 1.0).u;
  CHECK(contradiction_functional(qa, qb, default_tgrid(2048)).status == ContradictionStatus::coincide);
}

TEST_CASE("contradiction functional: ground state against a perturbed profile") {
  const RadialProfile& u = rescaled(1024);
  const GridPtr& g = u.grid();
  const Eigen::ArrayXd r2 = g->r().array().square();
  const RadialProfile v(g, u.values().cwiseProduct((1.0 + 0.2 * (1.0 - r2 / 4.0) * (-r2 / 4.0).exp()).matrix()));
  ContradictionOptions o;
  o.require_rescaled = false;
  const ContradictionReport rep = contradiction_functional(u, v, default_tgrid(1024), o);
  REQUIRE(rep.status == ContradictionStatus::evaluated);
  CHECK(std::abs(rep.crossing.R - 2.0) <= 1e-4);
  CHECK_FALSE(rep.crossing.u_above_inside);
  CHECK(std::isfinite(rep.value));
  CHECK_FALSE(rep.near_solutions);
  CHECK_FALSE(rep.alarm);
}
