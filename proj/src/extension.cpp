#include "bstar/extension.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <random>

#include <omp.h>

#include "bstar/ground_state.hpp"
#include "bstar/potentials.hpp"
#include "bstar/transform.hpp"

namespace bstar {

TGrid::TGrid(std::size_t m, double t_max) : m_(m), t_max_(t_max) {
  if (m < 2) throw Error(ErrorCode::ValidationError, "t-grid needs m >= 2");
  if (!(t_max > 0.0)) throw Error(ErrorCode::ValidationError, "t-grid needs t_max > 0");
  tau_ = t_max / static_cast<double>(m - 1);
}

HalfspaceField::HalfspaceField(GridPtr g, TGrid t, Eigen::MatrixXd v)
    : rgrid(std::move(g)), tgrid(t), values(std::move(v)) {
  if (static_cast<std::size_t>(values.rows()) != rgrid->n() || static_cast<std::size_t>(values.cols()) != tgrid.m())
    throw Error(ErrorCode::InvalidProfile, "field shape does not match its grids");
  if (!values.allFinite()) throw Error(ErrorCode::InvalidProfile, "non-finite field entry");
}

RadialProfile HalfspaceField::trace() const { return RadialProfile(rgrid, values.col(0)); }

namespace {

// Slices of the extension from precomputed sine coefficients of r*u.
struct ExtensionSlicer {
  const RadialGrid& g;
  Eigen::VectorXd coef;

  ExtensionSlicer(const RadialProfile& u) : g(*u.grid()), coef(sine_coefficients(*u.grid(), u.values())) {}

  void slice(double t, Eigen::Ref<Eigen::VectorXd> out) const {
    Eigen::VectorXd c = coef.array() * (-t * g.rho().array()).exp();
    out = dst1(c).cwiseQuotient(g.r());
  }
};

Eigen::VectorXd radial_face_weights(const RadialGrid& g) {
  // 4 pi r_{j+1/2}^2 / h: the weight of ((psi_{j+1} - psi_j)/h)^2 * 4 pi r^2 h.
  Eigen::VectorXd rw(g.n());
  for (Eigen::Index j = 0; j < rw.size(); ++j) {
    const double rf = g.r()[j] + 0.5 * g.h();
    rw[j] = 4.0 * std::numbers::pi * rf * rf / g.h();
  }
  return rw;
}

double radial_energy(const Eigen::VectorXd& rw, const Eigen::Ref<const Eigen::VectorXd>& s) {
  const Eigen::Index n = s.size();
  double acc = 0.0;
  for (Eigen::Index j = 0; j + 1 < n; ++j) {
    const double d = s[j + 1] - s[j];
    acc += rw[j] * d * d;
  }
  acc += rw[n - 1] * s[n - 1] * s[n - 1];
  return acc;
}

double t_energy(const Eigen::VectorXd& w, double tau, const Eigen::Ref<const Eigen::VectorXd>& a,
                const Eigen::Ref<const Eigen::VectorXd>& b) {
  return (w.array() * (b - a).array().square()).sum() / tau;
}

// Dirichlet energy of a field given slice by slice. `slice(k, out)` fills the
// slice at t_k. The parallel variant splits k into contiguous blocks, each
// block regenerating the slice just before it.
template <class SliceFn>
double stream_dirichlet(const RadialGrid& g, const TGrid& tg, SliceFn&& slice, Exec exec) {
  const Eigen::VectorXd rw = radial_face_weights(g);
  const Eigen::Index n = static_cast<Eigen::Index>(g.n());
  const long m = static_cast<long>(tg.m());
  auto block = [&](long k0, long k1) {
    Eigen::VectorXd prev(n), cur(n);
    double acc = 0.0;
    if (k0 > 0) slice(k0 - 1, prev);
    for (long k = k0; k < k1; ++k) {
      slice(k, cur);
      acc += tg.weight(static_cast<std::size_t>(k)) * radial_energy(rw, cur);
      if (k > 0) acc += t_energy(g.w(), tg.tau(), prev, cur);
      std::swap(prev, cur);
    }
    return acc;
  };
  if (exec == Exec::serial) return block(0, m);
  const int nt = omp_get_max_threads();
  std::vector<double> parts(static_cast<std::size_t>(nt), 0.0);
#pragma omp parallel num_threads(nt)
  {
    const int id = omp_get_thread_num();
    const int cnt = omp_get_num_threads();
    const long k0 = m * id / cnt, k1 = m * (id + 1) / cnt;
    parts[static_cast<std::size_t>(id)] = block(k0, k1);
  }
  double total = 0.0;
  for (double p : parts) total += p;
  return total;
}

double boundary_energy(const RadialProfile& u, const Eigen::Ref<const Eigen::VectorXd>& trace) {
  const PotentialPair p = newton_potential(u);
  const RadialGrid& g = *u.grid();
  return (g.w().array() * (p.Phi.values().array() - 1.0) * trace.array().square()).sum();
}

}  // namespace

HalfspaceField poisson_extend(const RadialProfile& u, const TGrid& tgrid, Exec exec) {
  const ExtensionSlicer s(u);
  const Eigen::Index n = static_cast<Eigen::Index>(u.size());
  const long m = static_cast<long>(tgrid.m());
  Eigen::MatrixXd U(n, m);
  U.col(0) = u.values();
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (long k = 1; k < m; ++k) s.slice(tgrid.t(static_cast<std::size_t>(k)), U.col(k));
  } else {
    for (long k = 1; k < m; ++k) s.slice(tgrid.t(static_cast<std::size_t>(k)), U.col(k));
  }
  return HalfspaceField(u.grid(), tgrid, std::move(U));
}

Eigen::VectorXd extension_slice(const RadialProfile& u, double t) {
  const ExtensionSlicer s(u);
  Eigen::VectorXd out(u.size());
  s.slice(t, out);
  return out;
}

RadialProfile extension_normal_derivative(const RadialProfile& u) {
  const RadialGrid& g = *u.grid();
  const ExtensionSlicer s(u);
  Eigen::VectorXd c = s.coef.cwiseProduct(g.rho());
  return RadialProfile(u.grid(), dst1(c).cwiseQuotient(g.r()));
}

double harmonicity_defect(const HalfspaceField& psi) {
  const RadialGrid& g = *psi.rgrid;
  const Eigen::Index n = psi.values.rows(), m = psi.values.cols();
  const double h2 = g.h() * g.h(), tau2 = psi.tgrid.tau() * psi.tgrid.tau();
  double worst = 0.0;
  for (Eigen::Index k = 1; k + 1 < m; ++k) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double r = g.r()[j];
      const double up = j + 1 < n ? g.r()[j + 1] * psi.values(j + 1, k) : 0.0;
      const double dn = j > 0 ? g.r()[j - 1] * psi.values(j - 1, k) : 0.0;
      const double lap_r = (up - 2.0 * r * psi.values(j, k) + dn) / (h2 * r);
      const double lap_t = (psi.values(j, k + 1) - 2.0 * psi.values(j, k) + psi.values(j, k - 1)) / tau2;
      worst = std::max(worst, std::abs(lap_r + lap_t));
    }
  }
  return worst;
}

FormReport quadratic_form(const RadialProfile& u, const HalfspaceField& psi, const FormOptions& opts) {
  require_same_grid(*u.grid(), *psi.rgrid);
  if (opts.require_rescaled) require_rescaled(u, "quadratic_form");
  FormReport rep;
  rep.dirichlet_part = stream_dirichlet(
      *psi.rgrid, psi.tgrid, [&](long k, Eigen::Ref<Eigen::VectorXd> out) { out = psi.values.col(k); }, opts.exec);
  rep.boundary_part = boundary_energy(u, psi.values.col(0));
  rep.value = rep.dirichlet_part + rep.boundary_part;
  return rep;
}

FormReport extension_form(const RadialProfile& u, const TGrid& tgrid, const FormOptions& opts) {
  if (opts.require_rescaled) require_rescaled(u, "extension_form");
  const ExtensionSlicer s(u);
  FormReport rep;
  rep.dirichlet_part = stream_dirichlet(
      *u.grid(), tgrid,
      [&](long k, Eigen::Ref<Eigen::VectorXd> out) {
        if (k == 0)
          out = u.values();
        else
          s.slice(tgrid.t(static_cast<std::size_t>(k)), out);
      },
      opts.exec);
  rep.boundary_part = boundary_energy(u, u.values());
  rep.value = rep.dirichlet_part + rep.boundary_part;
  return rep;
}

namespace {

using SliceGen = std::function<void(double, Eigen::Ref<Eigen::VectorXd>)>;

// Even extension of a Gaussian shell, smooth at the origin as a function on R^3.
Eigen::VectorXd shell(const RadialGrid& g, double a, double s) {
  return ((-(g.r().array() - a).square() / (s * s)).exp() + (-(g.r().array() + a).square() / (s * s)).exp()).matrix();
}

double window_1_2(double t) {
  if (t <= 1.0 || t >= 2.0) return 0.0;
  const double sn = std::sin(std::numbers::pi * (t - 1.0));
  return sn * sn;
}

std::vector<SliceGen> build_basis(const RadialProfile& u, const BasisOptions& opt) {
  const RadialGrid& g = *u.grid();
  std::vector<SliceGen> basis;
  if (opt.include_extension) {
    auto slicer = std::make_shared<ExtensionSlicer>(u);
    auto trace = std::make_shared<Eigen::VectorXd>(u.values());
    basis.emplace_back([slicer, trace](double t, Eigen::Ref<Eigen::VectorXd> out) {
      if (t == 0.0)
        out = *trace;
      else
        slicer->slice(t, out);
    });
  }
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> centre(0.0, 8.0), width(0.5, 3.0), decay(0.5, 5.0), amp(-1.0, 1.0);
  const bool zero_trace = opt.zero_trace_only;
  int idx = 0;
  while (static_cast<int>(basis.size()) < opt.size) {
    if (idx % 2 == 0) {
      // Coordinate bump: one shell in r times one profile in t.
      auto g_r = std::make_shared<Eigen::VectorXd>(shell(g, centre(rng), width(rng)));
      const double lt = decay(rng);
      basis.emplace_back([g_r, lt, zero_trace](double t, Eigen::Ref<Eigen::VectorXd> out) {
        out = *g_r * (zero_trace ? window_1_2(t) : std::exp(-t / lt));
      });
    } else {
      // Smooth random field: four shells, each with its own t-profile.
      struct Term {
        Eigen::VectorXd g;
        double a, lt, tilt;
      };
      auto terms = std::make_shared<std::vector<Term>>();
      for (int p = 0; p < 4; ++p) {
        const double c = centre(rng), s = width(rng);
        const double a = amp(rng), lt = decay(rng), tilt = amp(rng);
        terms->push_back(Term{shell(g, c, s), a, lt, tilt});
      }
      basis.emplace_back([terms, zero_trace](double t, Eigen::Ref<Eigen::VectorXd> out) {
        out.setZero();
        for (const Term& q : *terms) {
          const double tp = zero_trace ? window_1_2(t) * (1.0 + 0.5 * q.tilt * (t - 1.5)) : std::exp(-t / q.lt) * (1.0 + q.tilt * t);
          out += q.a * tp * q.g;
        }
      });
    }
    ++idx;
  }
  return basis;
}

}  // namespace

MinimizeResult form_minimize(const RadialProfile& u, const TGrid& tgrid, const BasisOptions& basis_opts,
                             const FormOptions& opts) {
  if (opts.require_rescaled) require_rescaled(u, "form_minimize");
  if (basis_opts.size < 1) throw Error(ErrorCode::ValidationError, "basis_size must be at least 1");
  const RadialGrid& g = *u.grid();
  std::vector<SliceGen> fields = build_basis(u, basis_opts);
  const int b = static_cast<int>(fields.size());
  // The extension itself is carried as a probe column so the correlation is
  // available even when it is not part of the basis.
  const bool probe_extra = !basis_opts.include_extension;
  if (probe_extra) {
    auto slicer = std::make_shared<ExtensionSlicer>(u);
    auto trace = std::make_shared<Eigen::VectorXd>(u.values());
    fields.emplace_back([slicer, trace](double t, Eigen::Ref<Eigen::VectorXd> out) {
      if (t == 0.0)
        out = *trace;
      else
        slicer->slice(t, out);
    });
  }
  const int probe = probe_extra ? b : 0;
  const int B = static_cast<int>(fields.size());
  const Eigen::Index n = static_cast<Eigen::Index>(g.n());
  const long m = static_cast<long>(tgrid.m());
  const Eigen::VectorXd rw = radial_face_weights(g);
  const PotentialPair pot = newton_potential(u);
  const Eigen::VectorXd bw = g.w().array() * (pot.Phi.values().array() - 1.0);

  auto fill = [&](long k, Eigen::MatrixXd& S) {
    const double t = tgrid.t(static_cast<std::size_t>(k));
    for (int i = 0; i < B; ++i) fields[static_cast<std::size_t>(i)](t, S.col(i));
  };
  auto radial_diff = [&](const Eigen::MatrixXd& S) {
    Eigen::MatrixXd D(n, B);
    D.topRows(n - 1) = S.bottomRows(n - 1) - S.topRows(n - 1);
    D.row(n - 1) = -S.row(n - 1);
    return D;
  };

  // Dirichlet Gram (shared by both forms) and the L2 Gram, accumulated over
  // contiguous blocks of t-slices.
  auto block = [&](long k0, long k1, Eigen::MatrixXd& Gd, Eigen::MatrixXd& Gm) {
    Eigen::MatrixXd prev(n, B), cur(n, B);
    if (k0 > 0) fill(k0 - 1, prev);
    for (long k = k0; k < k1; ++k) {
      fill(k, cur);
      const double wk = tgrid.weight(static_cast<std::size_t>(k));
      const Eigen::MatrixXd D = radial_diff(cur);
      Gd.noalias() += wk * D.transpose() * rw.asDiagonal() * D;
      Gm.noalias() += wk * cur.transpose() * g.w().asDiagonal() * cur;
      if (k > 0) {
        const Eigen::MatrixXd Dt = cur - prev;
        Gd.noalias() += (1.0 / tgrid.tau()) * Dt.transpose() * g.w().asDiagonal() * Dt;
      }
      std::swap(prev, cur);
    }
  };
  Eigen::MatrixXd Gd = Eigen::MatrixXd::Zero(B, B), Gm = Eigen::MatrixXd::Zero(B, B);
  if (opts.exec == Exec::serial) {
    block(0, m, Gd, Gm);
  } else {
    const int nt = omp_get_max_threads();
    std::vector<Eigen::MatrixXd> pd(static_cast<std::size_t>(nt), Eigen::MatrixXd::Zero(B, B)), pm = pd;
#pragma omp parallel num_threads(nt)
    {
      const int id = omp_get_thread_num(), cnt = omp_get_num_threads();
      block(m * id / cnt, m * (id + 1) / cnt, pd[static_cast<std::size_t>(id)], pm[static_cast<std::size_t>(id)]);
    }
    for (int i = 0; i < nt; ++i) {
      Gd += pd[static_cast<std::size_t>(i)];
      Gm += pm[static_cast<std::size_t>(i)];
    }
  }
  Eigen::MatrixXd S0(n, B);
  fill(0, S0);
  const Eigen::MatrixXd Gb = S0.transpose() * bw.asDiagonal() * S0;

  const Eigen::MatrixXd A = (Gd + Gb).topLeftCorner(b, b);
  const Eigen::MatrixXd N = (Gd + Gm).topLeftCorner(b, b);
  // Reduce to an orthonormal (in H^1) basis, dropping numerically dependent
  // directions, then solve the standard symmetric problem.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> en(0.5 * (N + N.transpose()));
  const double smax = en.eigenvalues().maxCoeff();
  std::vector<int> keep;
  for (int i = 0; i < b; ++i)
    if (en.eigenvalues()[i] > 1e-12 * smax) keep.push_back(i);
  Eigen::MatrixXd T(b, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c)
    T.col(static_cast<Eigen::Index>(c)) = en.eigenvectors().col(keep[c]) / std::sqrt(en.eigenvalues()[keep[c]]);
  const Eigen::MatrixXd At = T.transpose() * A * T;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ea(0.5 * (At + At.transpose()));
  const Eigen::VectorXd coeff = T * ea.eigenvectors().col(0);

  MinimizeResult res{ea.eigenvalues()[0], 0.0, 0.0, {}, HalfspaceField(u.grid(), tgrid, Eigen::MatrixXd::Zero(n, m))};
  for (Eigen::Index i = 0; i < ea.eigenvalues().size(); ++i) res.quotients.push_back(ea.eigenvalues()[i]);
  const Eigen::MatrixXd H = Gd + Gm;
  const double cross = coeff.dot(H.block(0, probe, b, 1).col(0));
  res.extension_h1_norm2 = H(probe, probe);
  res.correlation_with_extension = std::abs(cross) / std::sqrt(coeff.dot(N * coeff) * H(probe, probe));

  Eigen::MatrixXd& out = res.minimizer.values;
  auto materialize = [&](long k) {
    Eigen::MatrixXd S(n, B);
    fill(k, S);
    out.col(k) = S.leftCols(b) * coeff;
  };
  if (opts.exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (long k = 0; k < m; ++k) materialize(k);
  } else {
    for (long k = 0; k < m; ++k) materialize(k);
  }
  return res;
}

Crossing first_crossing(const RadialProfile& u, const RadialProfile& v) {
  require_same_grid(*u.grid(), *v.grid());
  const RadialGrid& g = *u.grid();
  const Eigen::VectorXd d = u.values() - v.values();
  if (d.cwiseAbs().maxCoeff() <= 1e-9 * u.values().cwiseAbs().maxCoeff())
    throw Error(ErrorCode::Coincide, "profiles agree to 1e-9 relative");
  const Eigen::Index n = d.size();
  Eigen::Index first = 0;
  while (first < n && d[first] == 0.0) ++first;
  const double s0 = d[first] > 0 ? 1.0 : -1.0;
  Eigen::Index j = first + 1;
  while (j < n && s0 * d[j] > 0.0) ++j;
  if (j >= n) throw Error(ErrorCode::NoCrossing, "u - v keeps one sign on the grid");
  Crossing c;
  c.u_above_inside = s0 > 0;
  if (d[j] == 0.0) {
    c.R = g.r()[j];
    return c;
  }
  // Six nodes around the bracket [j-1, j], shifted inward at the ends.
  Eigen::Index lo = std::clamp<Eigen::Index>(j - 3, 0, std::max<Eigen::Index>(0, n - 6));
  const Eigen::Index hi = std::min<Eigen::Index>(n, lo + 6);
  auto interp = [&](double x) {
    double acc = 0.0;
    for (Eigen::Index a = lo; a < hi; ++a) {
      double l = 1.0;
      for (Eigen::Index bb = lo; bb < hi; ++bb)
        if (bb != a) l *= (x - g.r()[bb]) / (g.r()[a] - g.r()[bb]);
      acc += l * d[a];
    }
    return acc;
  };
  double a = g.r()[j - 1], b = g.r()[j];
  double fa = d[j - 1];
  for (int it = 0; it < 200 && b - a > 1e-15 * b; ++it) {
    const double mid = 0.5 * (a + b);
    const double fm = interp(mid);
    if (fm == 0.0) {
      a = b = mid;
      break;
    }
    if ((fm > 0) == (fa > 0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  c.R = 0.5 * (a + b);
  return c;
}

namespace {

Eigen::VectorXd equation_residual(const RadialProfile& u, const PotentialPair& p) {
  return apply_half_laplacian(*u.grid(), u.values()) + (p.Phi.values().array() - 1.0).matrix().cwiseProduct(u.values());
}

}  // namespace

ContradictionReport contradiction_functional(const RadialProfile& u, const RadialProfile& v, const TGrid& tgrid,
                                             const ContradictionOptions& opts) {
  require_same_grid(*u.grid(), *v.grid());
  if (opts.require_rescaled) {
    require_rescaled(u, "contradiction_functional(u)");
    require_rescaled(v, "contradiction_functional(v)");
  }
  ContradictionReport rep;
  try {
    rep.crossing = first_crossing(u, v);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::Coincide) throw;
    rep.status = ContradictionStatus::coincide;
    rep.message = "Coincide";
    return rep;
  }
  rep.status = ContradictionStatus::evaluated;
  const bool swapped = !rep.crossing.u_above_inside;
  const RadialProfile& a = swapped ? v : u;
  const RadialProfile& b = swapped ? u : v;
  const RadialGrid& g = *u.grid();
  const double R = rep.crossing.R;

  const HalfspaceField Ua = poisson_extend(a, tgrid, opts.exec);
  const HalfspaceField Ub = poisson_extend(b, tgrid, opts.exec);
  const Eigen::MatrixXd D = Ua.values - Ub.values;
  const Eigen::Index n = D.rows(), m = D.cols();

  // Flood fill of {D > 0} from the boundary ball {r < R, t = 0}.
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> in(n, m);
  in.setConstant(false);
  std::deque<std::pair<Eigen::Index, Eigen::Index>> queue;
  for (Eigen::Index j = 0; j < n && g.r()[j] < R; ++j) {
    if (D(j, 0) > 0.0) {
      in(j, 0) = true;
      queue.emplace_back(j, 0);
    }
  }
  while (!queue.empty()) {
    const auto [j, k] = queue.front();
    queue.pop_front();
    const std::pair<Eigen::Index, Eigen::Index> nb[4] = {{j - 1, k}, {j + 1, k}, {j, k - 1}, {j, k + 1}};
    for (const auto& [jj, kk] : nb) {
      if (jj < 0 || jj >= n || kk < 0 || kk >= m || in(jj, kk) || !(D(jj, kk) > 0.0)) continue;
      in(jj, kk) = true;
      queue.emplace_back(jj, kk);
    }
  }
  Eigen::MatrixXd Wv = Eigen::MatrixXd::Zero(n, m);
  for (Eigen::Index k = 0; k < m; ++k)
    for (Eigen::Index j = 0; j < n; ++j)
      if (in(j, k)) {
        Wv(j, k) = D(j, k);
        ++rep.omega_nodes;
      }
  const HalfspaceField W(u.grid(), tgrid, std::move(Wv));
  const Eigen::VectorXd w0 = W.values.col(0);

  FormOptions fo;
  fo.require_rescaled = false;
  fo.exec = opts.exec;
  const double Aa = quadratic_form(a, W, fo).value;
  const double Ab = quadratic_form(b, W, fo).value;
  rep.a_u_w = swapped ? Ab : Aa;
  rep.a_v_w = swapped ? Aa : Ab;
  rep.value = Aa + Ab;

  const PotentialPair pa = newton_potential(a), pb = newton_potential(b);
  const Eigen::VectorXd f =
      0.5 * (pa.Phi.values() - pb.Phi.values()).cwiseProduct(a.values() + b.values());
  const Eigen::VectorXd ra = equation_residual(a, pa), rb = equation_residual(b, pb);
  double inside = 0.0, all = 0.0, resid = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double term = f[j] * w0[j] * g.w()[j];
    all += term;
    if (g.r()[j] < R)
      inside += term;
    else
      rep.trace_outside_ball += std::abs(w0[j]) * g.w()[j];
    resid += w0[j] * (ra[j] - rb[j]) * g.w()[j];
  }
  rep.boundary_value = -2.0 * inside;
  rep.residual_term = 2.0 * resid;
  rep.boundary_value_general = -2.0 * all + rep.residual_term;
  auto rel = [](double x, double y) {
    const double s = std::max(std::abs(x), std::abs(y));
    return s > 0 ? std::abs(x - y) / s : 0.0;
  };
  rep.agreement = rel(rep.value, rep.boundary_value_general);
  rep.exact_form_agreement = rel(rep.value, rep.boundary_value);

  rep.near_solutions = residual(a, estimate_eigenvalue(a)) <= opts.solution_residual &&
                       residual(b, estimate_eigenvalue(b)) <= opts.solution_residual;
  rep.alarm = rep.near_solutions && rep.value < 0.0;
  rep.message = rep.alarm ? "CONSISTENCY-ALARM" : "evaluated";
  return rep;
}

}  // namespace bstar
