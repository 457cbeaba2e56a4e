#pragma once

#include <map>
#include <optional>
#include <string>

#include "bstar/exec.hpp"
#include "bstar/grid.hpp"
#include "bstar/sector.hpp"

namespace bstar {

// Exchange part of L+ in sector l:
//   (E xi)(r) = -2 (4 pi/(2l+1)) Q(r) int K_l(r,s) Q(s) xi(s) s^2 ds.
Eigen::MatrixXd exchange_matrix(int ell, const RadialProfile& Q, Exec exec = Exec::parallel);
// The same operator applied in O(n).
Eigen::VectorXd apply_exchange(int ell, const RadialProfile& Q, const Eigen::VectorXd& xi);

// L+ = sqrt(-Delta)_l + 1 - V_Q - exchange, as a dense weighted-symmetric
// matrix. Throws QuadratureUnstable on a symmetry defect above 1e-8.
SectorOperator assemble_L_plus(int ell, const RadialProfile& Q, int ell_max = 3, Exec exec = Exec::parallel);

struct SpectrumReport {
  int ell = 0;
  Eigen::VectorXd eigenvalues;   // ascending
  Eigen::MatrixXd eigenvectors;  // columns, unit weighted norm
  double zero_gap = 0.0;         // min |lambda| over the whole spectrum
  std::optional<double> zero_mode_overlap;
};

// Lowest k eigenpairs. With `reference` given, zero_mode_overlap is
// |<v_0, ref>| / (|v_0| |ref|) for the eigenvector of smallest |lambda|.
SpectrumReport spectrum(const SectorOperator& op, int k, const Eigen::VectorXd* reference = nullptr);

// Largest |lambda| by power iteration on the symmetrized matrix.
double operator_scale(const SectorOperator& op);

struct NondegeneracyOptions {
  int ell_max = 3;
  int k_eigs = 5;
  // Relative zero tolerance: an eigenvalue counts as zero when
  // |lambda| <= zero_rel_tol * ||L+||.
  double zero_rel_tol = 1e-6;
  double overlap_min = 0.999;
  // Other sectors must keep |lambda| above gap_factor times the tolerance.
  double gap_factor = 10.0;
  // Lowest eigenvalues may move by this much under refinement.
  double stability_tol = 1e-3;
};

struct GridFindings {
  std::size_t n = 0;
  double operator_norm = 0.0;
  double zero_tolerance = 0.0;
  double translation_residual = 0.0;  // ||L+ Q'|| / ||Q'|| in sector 1
  double zero_mode = 0.0;             // smallest |lambda| in sector 1
  double zero_mode_overlap = 0.0;
  std::map<int, SpectrumReport> spectra;

  bool zero_mode_ok = false;
  bool gaps_ok = false;
};

struct NondegeneracyReport {
  GridFindings coarse;
  std::optional<GridFindings> fine;
  bool stable = false;
  bool passed = false;
  std::string message;
};

GridFindings analyze_sectors(const RadialProfile& Q, const NondegeneracyOptions& opts = {});

// Single-grid check: zero mode in sector 1 matching Q', every other sector
// gapped. Throws InsufficientSectors when ell_max < 1.
NondegeneracyReport nondegeneracy_check(const RadialProfile& Q, const NondegeneracyOptions& opts = {});
// Adds the refinement test: the translation residual shrinks and no sector's
// lowest eigenvalues move by more than stability_tol.
NondegeneracyReport nondegeneracy_check(const RadialProfile& Q_coarse, const RadialProfile& Q_fine,
                                        const NondegeneracyOptions& opts = {});

}  // namespace bstar
