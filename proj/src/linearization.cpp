#include "bstar/linearization.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "bstar/linalg.hpp"
#include "bstar/multipole.hpp"
#include "bstar/potentials.hpp"
#include "bstar/transform.hpp"

namespace bstar {
namespace {

double exchange_prefactor(int ell) { return -2.0 * 4.0 * std::numbers::pi / (2.0 * ell + 1.0); }

}  // namespace

Eigen::MatrixXd exchange_matrix(int ell, const RadialProfile& Q, Exec exec) {
  const Eigen::VectorXd& q = Q.values();
  Eigen::MatrixXd E = multipole_matrix(ell, *Q.grid(), exec);
  E = exchange_prefactor(ell) * q.asDiagonal() * E * q.asDiagonal();
  return E;
}

Eigen::VectorXd apply_exchange(int ell, const RadialProfile& Q, const Eigen::VectorXd& xi) {
  const Eigen::VectorXd& q = Q.values();
  return exchange_prefactor(ell) * q.cwiseProduct(multipole_apply(ell, *Q.grid(), q.cwiseProduct(xi)));
}

SectorOperator assemble_L_plus(int ell, const RadialProfile& Q, int ell_max, Exec exec) {
  SectorOperator op = sector_operator_matrix(ell, Q.grid(), ell_max, exec);
  op.kind = OperatorKind::L_plus;
  const PotentialPair p = newton_potential(Q);
  op.matrix += exchange_matrix(ell, Q, exec);
  op.matrix.diagonal().array() += 1.0 - p.V.values().array();
  const double defect = weighted_symmetry_defect(op.matrix, Q.grid()->w());
  if (defect > kSymmetryTolerance)
    throw Error(ErrorCode::QuadratureUnstable, "L+ sector " + std::to_string(ell) + " symmetry defect " +
                                                   std::to_string(defect));
  return op;
}

SpectrumReport spectrum(const SectorOperator& op, int k, const Eigen::VectorXd* reference) {
  const Eigen::VectorXd& w = op.grid->w();
  const int n = static_cast<int>(op.grid->n());
  if (k < 1 || k > n) throw Error(ErrorCode::ValidationError, "k must lie in 1..n");
  Eigen::MatrixXd B = weighted_similarity(op.matrix, w);
  B = 0.5 * (B + B.transpose()).eval();
  SymEig e = sym_eig_lowest(B, k);
  // If every computed eigenvalue is negative the smallest |lambda| may lie
  // further up; widen until the window crosses zero.
  int kk = k;
  while (e.values[kk - 1] < 0.0 && kk < n) {
    kk = std::min(n, 2 * kk);
    e = sym_eig_lowest(B, kk);
  }
  SpectrumReport rep;
  rep.ell = op.ell;
  rep.eigenvalues = e.values.head(k);
  const Eigen::VectorXd s = w.array().sqrt();
  rep.eigenvectors = s.cwiseInverse().asDiagonal() * e.vectors.leftCols(k);
  Eigen::Index imin = 0;
  rep.zero_gap = e.values.cwiseAbs().minCoeff(&imin);
  if (reference) {
    const Eigen::VectorXd v = s.cwiseInverse().asDiagonal() * e.vectors.col(imin);
    const double num = std::abs((w.array() * v.array() * reference->array()).sum());
    const double den = std::sqrt((w.array() * v.array().square()).sum() * (w.array() * reference->array().square()).sum());
    rep.zero_mode_overlap = den > 0 ? num / den : 0.0;
  }
  return rep;
}

double operator_scale(const SectorOperator& op) {
  const Eigen::VectorXd& w = op.grid->w();
  Eigen::MatrixXd B = weighted_similarity(op.matrix, w);
  B = 0.5 * (B + B.transpose()).eval();
  Eigen::VectorXd x = Eigen::VectorXd::Ones(B.rows()).normalized();
  double lambda = 0.0;
  for (int it = 0; it < 200; ++it) {
    Eigen::VectorXd y = B * x;
    const double nrm = y.norm();
    if (nrm == 0.0) return 0.0;
    const double next = std::abs(x.dot(y));
    x = y / nrm;
    if (it > 10 && std::abs(next - lambda) <= 1e-6 * next) return next;
    lambda = next;
  }
  return lambda;
}

GridFindings analyze_sectors(const RadialProfile& Q, const NondegeneracyOptions& opts) {
  if (opts.ell_max < 1)
    throw Error(ErrorCode::InsufficientSectors, "ℓ=1 sector required by nondegeneracy check");
  GridFindings f;
  f.n = Q.grid()->n();
  const Eigen::VectorXd dQ = radial_derivative(Q).values();
  const RadialGrid& g = *Q.grid();
  for (int ell = 0; ell <= opts.ell_max; ++ell) {
    const SectorOperator L = assemble_L_plus(ell, Q, opts.ell_max);
    if (ell == 1) {
      f.operator_norm = operator_scale(L);
      f.zero_tolerance = opts.zero_rel_tol * f.operator_norm;
      f.translation_residual = weighted_norm(g, L.apply(dQ)) / weighted_norm(g, dQ);
      f.spectra.emplace(ell, spectrum(L, opts.k_eigs, &dQ));
      f.zero_mode = f.spectra.at(ell).zero_gap;
      f.zero_mode_overlap = f.spectra.at(ell).zero_mode_overlap.value_or(0.0);
    } else {
      f.spectra.emplace(ell, spectrum(L, opts.k_eigs));
    }
  }
  f.zero_mode_ok = f.zero_mode <= f.zero_tolerance && f.zero_mode_overlap >= opts.overlap_min &&
                   f.translation_residual <= f.zero_tolerance;
  f.gaps_ok = true;
  for (const auto& [ell, s] : f.spectra)
    if (ell != 1 && !(s.zero_gap > opts.gap_factor * f.zero_tolerance)) f.gaps_ok = false;
  return f;
}

namespace {

std::string describe(const GridFindings& f) {
  std::ostringstream os;
  os << "n=" << f.n << " zero_mode=" << f.zero_mode << " tol=" << f.zero_tolerance << " overlap=" << f.zero_mode_overlap
     << " translation_residual=" << f.translation_residual;
  for (const auto& [ell, s] : f.spectra)
    if (ell != 1) os << " gap_l" << ell << "=" << s.zero_gap;
  return os.str();
}

}  // namespace

NondegeneracyReport nondegeneracy_check(const RadialProfile& Q, const NondegeneracyOptions& opts) {
  NondegeneracyReport rep;
  rep.coarse = analyze_sectors(Q, opts);
  rep.passed = rep.coarse.zero_mode_ok && rep.coarse.gaps_ok;
  rep.message = describe(rep.coarse);
  return rep;
}

NondegeneracyReport nondegeneracy_check(const RadialProfile& Q_coarse, const RadialProfile& Q_fine,
                                        const NondegeneracyOptions& opts) {
  NondegeneracyReport rep;
  rep.coarse = analyze_sectors(Q_coarse, opts);
  rep.fine = analyze_sectors(Q_fine, opts);
  const GridFindings& c = rep.coarse;
  const GridFindings& f = *rep.fine;
  rep.stable = f.translation_residual < c.translation_residual;
  for (const auto& [ell, sc] : c.spectra) {
    const SpectrumReport& sf = f.spectra.at(ell);
    const Eigen::Index m = std::min<Eigen::Index>(3, std::min(sc.eigenvalues.size(), sf.eigenvalues.size()));
    for (Eigen::Index i = 0; i < m; ++i)
      if (std::abs(sc.eigenvalues[i] - sf.eigenvalues[i]) > opts.stability_tol) rep.stable = false;
  }
  rep.passed = c.zero_mode_ok && c.gaps_ok && f.zero_mode_ok && f.gaps_ok && rep.stable;
  rep.message = describe(c) + " | " + describe(f) + (rep.stable ? " | stable" : " | unstable under refinement");
  return rep;
}

}  // namespace bstar
