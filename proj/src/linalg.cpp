#include "bstar/linalg.hpp"

#include <lapacke.h>

#include <string>
#include <vector>

#include "bstar/errors.hpp"

namespace bstar {

Eigen::MatrixXd weighted_similarity(const Eigen::MatrixXd& A, const Eigen::VectorXd& w) {
  const Eigen::VectorXd s = w.array().sqrt();
  const Eigen::VectorXd si = s.cwiseInverse();
  return s.asDiagonal() * A * si.asDiagonal();
}

double weighted_symmetry_defect(const Eigen::MatrixXd& A, const Eigen::VectorXd& w) {
  const Eigen::MatrixXd B = weighted_similarity(A, w);
  const double scale = B.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  return (B - B.transpose()).cwiseAbs().maxCoeff() / scale;
}

SymEig sym_eig_lowest(const Eigen::MatrixXd& B, int k) {
  const lapack_int n = static_cast<lapack_int>(B.rows());
  if (k < 1 || k > n) throw Error(ErrorCode::EigensolverFailure, "requested " + std::to_string(k) + " eigenpairs of " +
                                                                      std::to_string(n));
  Eigen::MatrixXd a = B;  // dsyevr destroys its input
  lapack_int found = 0;
  Eigen::VectorXd vals(n);
  Eigen::MatrixXd vecs(n, k);
  std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(k));
  const lapack_int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'L', n, a.data(), n, 0.0, 0.0, 1, k, 0.0,
                                         &found, vals.data(), vecs.data(), n, isuppz.data());
  if (info != 0 || found != k)
    throw Error(ErrorCode::EigensolverFailure, "dsyevr info=" + std::to_string(info));
  return SymEig{vals.head(k), vecs};
}

SymEig sym_eig_full(const Eigen::MatrixXd& B) {
  const lapack_int n = static_cast<lapack_int>(B.rows());
  SymEig out{Eigen::VectorXd(n), B};
  const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, out.vectors.data(), n, out.values.data());
  if (info != 0) throw Error(ErrorCode::EigensolverFailure, "dsyevd info=" + std::to_string(info));
  return out;
}

Eigen::MatrixXd weighted_matrix_function(const Eigen::MatrixXd& A, const Eigen::VectorXd& w,
                                         const std::function<double(double)>& fn) {
  Eigen::MatrixXd B = weighted_similarity(A, w);
  B = 0.5 * (B + B.transpose()).eval();
  SymEig e = sym_eig_full(B);
  Eigen::VectorXd fv = e.values.unaryExpr(fn);
  Eigen::MatrixXd F = e.vectors * fv.asDiagonal() * e.vectors.transpose();
  const Eigen::VectorXd s = w.array().sqrt();
  return s.cwiseInverse().asDiagonal() * F * s.asDiagonal();
}

}  // namespace bstar
