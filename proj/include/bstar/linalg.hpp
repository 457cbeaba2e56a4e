#pragma once

#include <functional>

#include <Eigen/Dense>

namespace bstar {

// Operators that are symmetric with respect to <f,g> = sum w_j f_j g_j become
// ordinary symmetric matrices under B = W^{1/2} A W^{-1/2}.
Eigen::MatrixXd weighted_similarity(const Eigen::MatrixXd& A, const Eigen::VectorXd& w);

// max|B - B^T| / max|B| for the similarity transform above.
double weighted_symmetry_defect(const Eigen::MatrixXd& A, const Eigen::VectorXd& w);

struct SymEig {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns, orthonormal in the Euclidean sense
};

// Lowest k eigenpairs of a symmetric matrix (LAPACK dsyevr with an index
// range). Only the lower triangle is read.
SymEig sym_eig_lowest(const Eigen::MatrixXd& B, int k);
// Full decomposition (LAPACK dsyevd).
SymEig sym_eig_full(const Eigen::MatrixXd& B);

// f(A) for a weighted-symmetric A, computed through the symmetric similarity
// transform so the result is weighted-symmetric to rounding.
Eigen::MatrixXd weighted_matrix_function(const Eigen::MatrixXd& A, const Eigen::VectorXd& w,
                                         const std::function<double(double)>& fn);

}  // namespace bstar
