#include "bstar/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>

#include <json.hpp>

#include "bstar/extension.hpp"
#include "bstar/linearization.hpp"
#include "bstar/profile_io.hpp"
#include "bstar/transform.hpp"

namespace bstar {

using nlohmann::json;
namespace fs = std::filesystem;

std::optional<Stage> parse_stage(std::string_view name) {
  for (Stage s : all_stages())
    if (stage_name(s) == name) return s;
  return std::nullopt;
}

std::string_view stage_name(Stage s) {
  switch (s) {
    case Stage::solve: return "solve";
    case Stage::verify: return "verify";
    case Stage::linearize: return "linearize";
    case Stage::extend: return "extend";
    case Stage::report: return "report";
  }
  return "?";
}

const std::vector<Stage>& all_stages() {
  static const std::vector<Stage> s = {Stage::solve, Stage::verify, Stage::linearize, Stage::extend, Stage::report};
  return s;
}

int stage_exit_code(Stage s) {
  switch (s) {
    case Stage::solve: return kExitSolve;
    case Stage::verify: return kExitVerify;
    case Stage::linearize: return kExitLinearize;
    case Stage::extend: return kExitExtend;
    case Stage::report: return kExitReport;
  }
  return kExitReport;
}

namespace {

json fit_json(const LinearFit& f) {
  return json{{"slope", f.slope}, {"intercept", f.intercept}, {"r_squared", f.r_squared},
              {"x_lo", f.x_lo},   {"x_hi", f.x_hi},           {"points", f.points}};
}

std::string grid_label(std::size_t n, double r_max) {
  return "n=" + std::to_string(n) + ",r_max=" + format_double(r_max);
}

std::string pair_label(std::size_t a, std::size_t b) { return "n=" + std::to_string(a) + "/" + std::to_string(b); }

// Everything the stages compute, filled on first use so that a single stage
// run only pays for its own dependencies.
class Context {
 public:
  Context(const RunConfig& cfg, std::ostream& log) : cfg_(cfg), log_(log) {}

  const RunConfig& cfg() const { return cfg_; }
  std::size_t n_fine() const { return cfg_.grid.n; }
  std::size_t n_coarse() const { return cfg_.grid.n / 2; }

  SolverConfig solver_config(std::size_t n, InitKind kind, double param) const {
    SolverConfig s;
    s.n = n;
    s.r_max = cfg_.grid.r_max;
    s.tol = cfg_.solver.tol;
    s.max_iter = cfg_.solver.max_iter;
    s.relaxation = cfg_.solver.relaxation;
    s.seed = cfg_.solver.seed;
    s.init.kind = kind;
    s.init.param = param;
    return s;
  }

  SolverConfig primary_config(std::size_t n) const {
    const std::string& init = cfg_.solver.init;
    const InitKind k = init == "exponential" ? InitKind::exponential : init == "ball" ? InitKind::ball : InitKind::gaussian;
    return solver_config(n, k, cfg_.solver.init_param);
  }

  const GroundStateSolution& fine() {
    if (!fine_) {
      log_ << "[solve] n=" << n_fine() << "\n";
      fine_.emplace(solve_ground_state(primary_config(n_fine())));
    }
    return *fine_;
  }
  const GroundStateSolution& coarse() {
    if (!coarse_) {
      log_ << "[solve] n=" << n_coarse() << " (refinement partner)\n";
      coarse_.emplace(solve_ground_state(primary_config(n_coarse())));
    }
    return *coarse_;
  }

  std::vector<SolverConfig> init_family(std::size_t n) const {
    return {solver_config(n, InitKind::gaussian, 1.0), solver_config(n, InitKind::gaussian, 3.0),
            solver_config(n, InitKind::exponential, 0.5), solver_config(n, InitKind::exponential, 2.0),
            solver_config(n, InitKind::ball, 1.0)};
  }

  const CrossValidation& cross(bool fine_grid) {
    auto& slot = fine_grid ? cross_fine_ : cross_coarse_;
    if (!slot) {
      log_ << "[verify] cross-validating 5 initializations at n=" << (fine_grid ? n_fine() : n_coarse()) << "\n";
      slot.emplace(cross_validate(init_family(fine_grid ? n_fine() : n_coarse())));
    }
    return *slot;
  }

  const NondegeneracyReport& nondeg() {
    if (!nondeg_) {
      NondegeneracyOptions o;
      o.ell_max = cfg_.linearization.l_max;
      o.k_eigs = cfg_.linearization.k_eigs;
      log_ << "[linearize] sectors 0.." << o.ell_max << " at n=" << n_coarse() << " and n=" << n_fine() << "\n";
      nondeg_.emplace(nondegeneracy_check(coarse().Q, fine().Q, o));
    }
    return *nondeg_;
  }

  TGrid tgrid(bool fine_grid) const {
    const std::size_t m = cfg_.effective_m();
    return TGrid(fine_grid ? m : std::max<std::size_t>(2, m / 2), cfg_.effective_t_max());
  }

  const RescaledProfile& rescaled(bool fine_grid) {
    auto& slot = fine_grid ? resc_fine_ : resc_coarse_;
    if (!slot) slot.emplace(canonical_rescale(fine_grid ? fine().Q : coarse().Q, 1.0));
    return *slot;
  }

 private:
  const RunConfig& cfg_;
  std::ostream& log_;
  std::optional<GroundStateSolution> fine_, coarse_;
  std::optional<CrossValidation> cross_fine_, cross_coarse_;
  std::optional<NondegeneracyReport> nondeg_;
  std::optional<RescaledProfile> resc_fine_, resc_coarse_;
};

struct Writer {
  fs::path dir;
  bool csv, json_out;
  std::vector<std::string>& files;

  void csv_file(const std::string& name, const std::vector<std::string>& header, const std::vector<Eigen::VectorXd>& cols) {
    if (!csv) return;
    write_csv((dir / name).string(), header, cols);
    files.push_back(name);
  }
  void json_file(const std::string& name, const json& j) {
    if (!json_out) return;
    write_text((dir / name).string(), j.dump(2) + "\n");
    files.push_back(name);
  }
};

struct StageOutcome {
  bool passed = false;
  json report;
  std::vector<double> quotients;
};

StageOutcome do_solve(Context& ctx, Writer* w) {
  const GroundStateSolution& s = ctx.fine();
  StageOutcome out;
  out.passed = s.converged;
  if (w) {
    const RunConfig& cfg = ctx.cfg();
    const RadialGrid& g = *s.Q.grid();
    if (w->csv) {
      ProfileRecord rec;
      rec.meta.n = g.n();
      rec.meta.r_max = g.r_max();
      rec.meta.eigenvalue = s.eigenvalue;
      rec.meta.mass = s.mass;
      rec.meta.residual = s.residual;
      rec.meta.config_hash = config_hash(cfg);
      rec.meta.config_text = computation_text(cfg);
      rec.r = g.r();
      rec.values = s.Q.values();
      save_profile(rec, (w->dir / "q_profile.csv").string());
      w->files.push_back("q_profile.csv");
      w->files.push_back("q_profile.json");
    }
    w->csv_file("q_fourier.csv", {"rho", "value"}, {g.rho(), forward_transform(s.Q).values()});
    w->csv_file("potentials.csv", {"r", "V", "Phi"}, {g.r(), s.potential.V.values(), s.potential.Phi.values()});
  }
  return out;
}

StageOutcome do_verify(Context& ctx) {
  const GroundStateSolution& f = ctx.fine();
  const GroundStateSolution& c = ctx.coarse();
  StageOutcome out;
  if (!f.converged || !c.converged) return out;
  const QualityReport q = verify_qualitative(f);
  const QualityReport qc = verify_qualitative(c);
  const CrossValidation& xf = ctx.cross(true);
  const CrossValidation& xc = ctx.cross(false);
  const double m_f = mass_constant(f), m_c = mass_constant(c);
  const double mass_rel = std::abs(m_f - m_c) / m_f;
  double scaling_dev = 0.0;
  json scaling;
  for (double mu : {0.5, 2.0}) {
    const double m = mass(scale_profile(f.Q, mu));
    scaling_dev = std::max(scaling_dev, std::abs(m - m_f) / m_f);
    scaling[format_double(mu)] = m;
  }
  const std::string pair = pair_label(ctx.n_coarse(), ctx.n_fine());
  const bool uniq_ok = xf.max_distance <= 1e-6;
  const bool mass_ok = mass_rel <= 1e-3 && scaling_dev <= 1e-8;
  out.passed = q.passed() && uniq_ok && mass_ok;

  json& r = out.report;
  r["grid"] = grid_label(ctx.n_fine(), ctx.cfg().grid.r_max);
  r["refinement_pair"] = pair;
  r["solver"] = {{"residual", f.residual}, {"iterations", f.iterations}, {"converged", f.converged}, {"eigenvalue", f.eigenvalue}};
  r["positivity"] = {{"passed", q.positive}, {"min_value", q.min_value}};
  r["strictly_decreasing"] = {{"passed", q.strictly_decreasing}, {"max_forward_difference", q.max_forward_difference}};
  r["decay"] = {{"fit", fit_json(q.decay)},
                {"slope_coarse", qc.decay.slope},
                {"grid_pair", pair},
                {"passed", q.decay.slope >= -4.5 && q.decay.slope <= -3.5}};
  r["fourier"] = {{"positive_all_nodes", q.qhat_positive_all},
                  {"nonincreasing_all_nodes", q.qhat_nonincreasing_all},
                  {"resolved_nodes", q.resolved_count},
                  {"resolved_rho", q.resolved_rho},
                  {"positive_resolved", q.qhat_positive_resolved},
                  {"nonincreasing_resolved", q.qhat_nonincreasing_resolved},
                  {"first_nonpositive_rho", q.first_nonpositive_rho ? json(*q.first_nonpositive_rho) : json(nullptr)}};
  r["spectral_tail"] = {{"fit", fit_json(q.spectral_tail)},
                        {"analyticity_radius", q.analyticity_radius},
                        {"proxy", "exponential decay of Qhat stands in for analyticity"},
                        {"slope_coarse", qc.spectral_tail.slope},
                        {"grid_pair", pair}};
  r["uniqueness"] = {{"inits", 5},
                     {"max_distance", xf.max_distance},
                     {"max_distance_coarse", xc.max_distance},
                     {"grid_pair", pair},
                     {"passed", uniq_ok}};
  r["mass_constant"] = {{"value", m_f},
                        {"coarse_value", m_c},
                        {"error_bar", std::abs(m_f - m_c)},
                        {"relative_difference", mass_rel},
                        {"grid_pair", pair},
                        {"scaled_masses", scaling},
                        {"scaling_deviation", scaling_dev},
                        {"passed", mass_ok}};
  r["passed"] = out.passed;
  return out;
}

StageOutcome do_linearize(Context& ctx, Writer* w) {
  StageOutcome out;
  const NondegeneracyReport& nd = ctx.nondeg();
  const GroundStateSolution& f = ctx.fine();
  // Scaling identity: L+ [(3/2)Q + r Q'] = -Q in sector 0.
  const SectorOperator L0 = assemble_L_plus(0, f.Q, ctx.cfg().linearization.l_max);
  const RadialGrid& g = *f.Q.grid();
  const Eigen::VectorXd dQ = radial_derivative(f.Q).values();
  const Eigen::VectorXd S = 1.5 * f.Q.values() + g.r().cwiseProduct(dQ);
  const double scaling = weighted_norm(g, L0.apply(S) + f.Q.values()) / weighted_norm(g, f.Q.values());
  out.passed = nd.passed && scaling <= 1e-4;

  auto findings = [](const GridFindings& gf) {
    json j{{"n", gf.n},
           {"operator_norm", gf.operator_norm},
           {"zero_tolerance", gf.zero_tolerance},
           {"translation_residual", gf.translation_residual},
           {"zero_mode", gf.zero_mode},
           {"zero_mode_overlap", gf.zero_mode_overlap},
           {"zero_mode_ok", gf.zero_mode_ok},
           {"gaps_ok", gf.gaps_ok}};
    for (const auto& [ell, s] : gf.spectra) {
      std::vector<double> ev(s.eigenvalues.data(), s.eigenvalues.data() + s.eigenvalues.size());
      j["sectors"][std::to_string(ell)] = {{"eigenvalues", ev}, {"zero_gap", s.zero_gap}};
    }
    return j;
  };
  json& r = out.report;
  r["coarse"] = findings(nd.coarse);
  if (nd.fine) r["fine"] = findings(*nd.fine);
  r["grid_pair"] = pair_label(ctx.n_coarse(), ctx.n_fine());
  r["stable_under_refinement"] = nd.stable;
  r["scaling_identity_residual"] = scaling;
  r["nondegenerate"] = nd.passed;
  r["passed"] = out.passed;
  if (w && nd.fine) {
    for (const auto& [ell, s] : nd.fine->spectra) {
      Eigen::VectorXd idx = Eigen::VectorXd::LinSpaced(s.eigenvalues.size(), 0, static_cast<double>(s.eigenvalues.size() - 1));
      w->csv_file("spectrum_l" + std::to_string(ell) + ".csv", {"index", "eigenvalue"}, {idx, s.eigenvalues});
    }
  }
  return out;
}

StageOutcome do_extend(Context& ctx) {
  StageOutcome out;
  const RescaledProfile& uf = ctx.rescaled(true);
  const RescaledProfile& uc = ctx.rescaled(false);
  const TGrid tf = ctx.tgrid(true), tc = ctx.tgrid(false);
  const FormReport Af = extension_form(uf.u, tf);
  const FormReport Ac = extension_form(uc.u, tc);
  const double ratio = std::abs(Ac.value) / std::max(std::abs(Af.value), 1e-300);

  BasisOptions bo;
  bo.size = ctx.cfg().extension.basis_size;
  bo.seed = ctx.cfg().solver.seed;
  const MinimizeResult mr = form_minimize(uf.u, tf, bo);
  BasisOptions zo = bo;
  zo.include_extension = false;
  zo.zero_trace_only = true;
  const MinimizeResult mz = form_minimize(uf.u, tf, zo);
  // Quotient-scale tolerance: the form defect of U relative to its H^1 size.
  const double eps_q = std::abs(Af.value) / mr.extension_h1_norm2;

  const double harm_f = harmonicity_defect(poisson_extend(uf.u, tf));
  const double harm_c = harmonicity_defect(poisson_extend(uc.u, tc));

  // Two genuine solutions from different initializations must coincide.
  const CrossValidation& xf = ctx.cross(true);
  const RadialProfile q1 = canonical_rescale(xf.solutions[0].Q, 1.0).u;
  const RadialProfile q2 = canonical_rescale(xf.solutions[2].Q, 1.0).u;
  const ContradictionReport genuine = contradiction_functional(q1, q2, tf);

  // Diagnostic: the rescaled ground state against a non-solution crossing it
  // at r = 2.
  const RadialGrid& g = *uf.u.grid();
  const Eigen::VectorXd bump =
      (1.0 + 0.2 * (1.0 - g.r().array().square() / 4.0) * (-g.r().array().square() / 4.0).exp()).matrix();
  const RadialProfile v(uf.u.grid(), uf.u.values().cwiseProduct(bump));
  ContradictionOptions co;
  co.require_rescaled = false;
  const ContradictionReport diag = contradiction_functional(uf.u, v, tf, co);

  const bool form_ok = ratio >= 2.0;
  const bool min_ok = mr.min_quotient >= -eps_q && mr.correlation_with_extension >= 0.999 && mz.min_quotient > 0.0;
  const bool coincide_ok = genuine.status == ContradictionStatus::coincide;
  out.passed = form_ok && min_ok && coincide_ok && !diag.alarm;

  json& r = out.report;
  const std::string pair = pair_label(ctx.n_coarse(), ctx.n_fine());
  r["rescale"] = {{"mu", uf.mu}, {"defect", rescale_defect(uf.u)}, {"mu_coarse", uc.mu}};
  r["tgrid"] = {{"m", tf.m()}, {"t_max", tf.t_max()}, {"tau", tf.tau()}, {"m_coarse", tc.m()}};
  r["form_of_extension"] = {{"value", Af.value},
                            {"dirichlet_part", Af.dirichlet_part},
                            {"boundary_part", Af.boundary_part},
                            {"value_coarse", Ac.value},
                            {"reduction_factor", ratio},
                            {"grid_pair", pair},
                            {"passed", form_ok}};
  r["form_minimize"] = {{"basis_size", bo.size},
                        {"min_quotient", mr.min_quotient},
                        {"epsilon", eps_q},
                        {"correlation_with_extension", mr.correlation_with_extension},
                        {"zero_trace_min_quotient", mz.min_quotient},
                        {"quotients", mr.quotients},
                        {"passed", min_ok}};
  r["harmonicity_defect"] = {{"fine", harm_f}, {"coarse", harm_c}, {"grid_pair", pair}};
  auto contra = [](const ContradictionReport& c) {
    json j{{"status", c.status == ContradictionStatus::coincide ? "Coincide" : "evaluated"}};
    if (c.status == ContradictionStatus::evaluated) {
      j.update({{"R", c.crossing.R},
                {"u_above_inside", c.crossing.u_above_inside},
                {"A_u_W", c.a_u_w},
                {"A_v_W", c.a_v_w},
                {"value", c.value},
                {"boundary_value", c.boundary_value},
                {"residual_term", c.residual_term},
                {"boundary_value_general", c.boundary_value_general},
                {"agreement", c.agreement},
                {"exact_solution_form_agreement", c.exact_form_agreement},
                {"omega_nodes", c.omega_nodes},
                {"omega_construction", "flood-fill component of {U > V} meeting {r < R, t = 0}"},
                {"trace_outside_ball", c.trace_outside_ball},
                {"near_solutions", c.near_solutions},
                {"alarm", c.alarm}});
    }
    return j;
  };
  r["contradiction_genuine_pair"] = contra(genuine);
  r["contradiction_diagnostic_pair"] = contra(diag);
  r["passed"] = out.passed;
  out.quotients = mr.quotients;
  return out;
}

}  // namespace

std::vector<PlotSeries> solution_plot_series(const GroundStateSolution& sol, const QualityReport& q) {
  const RadialGrid& g = *sol.Q.grid();
  std::vector<PlotSeries> s;
  s.push_back({"q_profile", "r", "Q", g.r(), sol.Q.values()});
  std::vector<double> lx, ly;
  for (Eigen::Index j = 0; j < g.r().size(); ++j)
    if (sol.Q[static_cast<std::size_t>(j)] > 0) {
      lx.push_back(std::log(g.r()[j]));
      ly.push_back(std::log(sol.Q[static_cast<std::size_t>(j)]));
    }
  s.push_back({"q_loglog", "log_r", "log_Q", Eigen::Map<Eigen::VectorXd>(lx.data(), static_cast<Eigen::Index>(lx.size())),
               Eigen::Map<Eigen::VectorXd>(ly.data(), static_cast<Eigen::Index>(ly.size()))});
  Eigen::Vector2d fx(q.decay.x_lo, q.decay.x_hi);
  s.push_back({"q_loglog_fit", "log_r", "log_Q", fx, (q.decay.slope * fx.array() + q.decay.intercept).matrix()});
  const Eigen::VectorXd F = forward_transform(sol.Q).values();
  s.push_back({"qhat", "rho", "Qhat", g.rho(), F});
  const Eigen::Index K = q.resolved_count;
  Eigen::VectorXd logF = F.head(K).array().log();
  s.push_back({"qhat_log", "rho", "log_Qhat", g.rho().head(K), logF});
  Eigen::Vector2d sx(q.spectral_tail.x_lo, q.spectral_tail.x_hi);
  s.push_back({"qhat_log_fit", "rho", "log_Qhat", sx, (q.spectral_tail.slope * sx.array() + q.spectral_tail.intercept).matrix()});
  s.push_back({"potential_V", "r", "V", g.r(), sol.potential.V.values()});
  s.push_back({"potential_Phi", "r", "Phi", g.r(), sol.potential.Phi.values()});
  return s;
}

void emit_plot_data(const std::vector<PlotSeries>& series, const std::string& dir) {
  const fs::path d = fs::path(dir) / "plotdata";
  std::error_code ec;
  fs::create_directories(d, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + d.string());
  for (const auto& s : series) write_csv((d / (s.name + ".csv")).string(), {s.x_label, s.y_label}, {s.x, s.y});
}

PipelineResult run_pipeline(const RunConfig& cfg, const std::set<Stage>& stages, std::ostream& log) {
  validate(cfg);
  PipelineResult res;
  const fs::path dir = cfg.output.directory;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    log << "cannot create output directory " << dir << ": " << ec.message() << "\n";
    res.exit_code = kExitIo;
    return res;
  }
  const bool want_csv = cfg.output.formats.find("csv") != std::string::npos;
  const bool want_json = cfg.output.formats.find("json") != std::string::npos;
  Writer writer{dir, want_csv, want_json, res.files};
  Context ctx(cfg, log);

  std::map<Stage, StageOutcome> outcomes;
  auto fail = [&](Stage s, const std::string& msg) {
    log << "[" << stage_name(s) << "] FAILED: " << msg << "\n";
    res.passed[s] = false;
    if (res.exit_code == kExitOk) res.exit_code = stage_exit_code(s);
  };
  const bool need_all = stages.count(Stage::report) > 0;
  for (Stage s : all_stages()) {
    const bool selected = stages.count(s) > 0;
    if (!selected && !(need_all && s != Stage::report)) continue;
    Writer* w = selected ? &writer : nullptr;
    try {
      StageOutcome o;
      switch (s) {
        case Stage::solve: o = do_solve(ctx, w); break;
        case Stage::verify:
          o = do_verify(ctx);
          if (w) w->json_file("quality_report.json", o.report);
          break;
        case Stage::linearize:
          o = do_linearize(ctx, w);
          if (w) w->json_file("nondegeneracy_report.json", o.report);
          break;
        case Stage::extend:
          o = do_extend(ctx);
          if (w) w->json_file("extension_report.json", o.report);
          break;
        case Stage::report: {
          const GroundStateSolution& f = ctx.fine();
          std::vector<PlotSeries> series = solution_plot_series(f, verify_qualitative(f));
          const NondegeneracyReport& nd = ctx.nondeg();
          if (nd.fine)
            for (const auto& [ell, sp] : nd.fine->spectra) {
              const Eigen::Index k = sp.eigenvalues.size();
              series.push_back({"eigen_ladder_l" + std::to_string(ell), "index", "eigenvalue",
                                Eigen::VectorXd::LinSpaced(k, 0, static_cast<double>(k - 1)), sp.eigenvalues});
            }
          const auto& qs = outcomes.at(Stage::extend).quotients;
          if (!qs.empty()) {
            // Histogram of the Rayleigh quotients on a log10 scale of |q|.
            const int bins = 20;
            std::vector<double> lq;
            for (double q : qs) lq.push_back(std::log10(std::max(std::abs(q), 1e-16)));
            const double lo = *std::min_element(lq.begin(), lq.end());
            const double hi = *std::max_element(lq.begin(), lq.end()) + 1e-12;
            Eigen::VectorXd centre(bins), count = Eigen::VectorXd::Zero(bins);
            for (int b = 0; b < bins; ++b) centre[b] = lo + (b + 0.5) * (hi - lo) / bins;
            for (double x : lq) count[std::min(bins - 1, static_cast<int>((x - lo) / (hi - lo) * bins))] += 1.0;
            series.push_back({"rayleigh_quotient_histogram", "log10_abs_quotient", "count", centre, count});
          }
          if (want_csv) {
            emit_plot_data(series, dir.string());
            for (const auto& p : series) res.files.push_back("plotdata/" + p.name + ".csv");
          }
          json summary;
          for (const auto& [st, oc] : outcomes) summary[std::string(stage_name(st))] = oc.passed;
          o.passed = std::all_of(outcomes.begin(), outcomes.end(), [](const auto& kv) { return kv.second.passed; });
          summary["all_passed"] = o.passed;
          summary["config_hash"] = config_hash(cfg);
          summary["tool_version"] = kToolVersion;
          writer.json_file("summary.json", summary);
          break;
        }
      }
      res.passed[s] = o.passed;
      if (!o.passed) fail(s, "checks did not pass");
      outcomes.emplace(s, std::move(o));
    } catch (const Error& e) {
      fail(s, e.what());
      outcomes.emplace(s, StageOutcome{});
      if (s == Stage::solve) break;
    }
  }
  std::sort(res.files.begin(), res.files.end());
  return res;
}

}  // namespace bstar
