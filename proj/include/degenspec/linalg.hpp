#pragma once

// Thin LAPACKE wrappers. Inputs are copied; Eigen matrices are column-major.

#include <Eigen/Dense>

namespace degenspec::linalg {

struct SymmetricEigen {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns, empty when not requested
};

/// All eigenvalues of a real symmetric matrix (dsyevd), ascending.
Eigen::VectorXd sym_eigenvalues(const Eigen::MatrixXd& a);
/// All eigenpairs of a real symmetric matrix (dsyevd).
SymmetricEigen sym_eigen(const Eigen::MatrixXd& a);
/// Eigenpairs with value in (lower, upper] (dsyevr, range 'V').
SymmetricEigen sym_eigen_range(const Eigen::MatrixXd& a, double lower, double upper, bool vectors = true);

/// All eigenvalues of a complex Hermitian matrix (zheevd), ascending.
Eigen::VectorXd herm_eigenvalues(const Eigen::MatrixXcd& a);

/// Singular values, nonincreasing (dgesdd / zgesdd, no vectors).
Eigen::VectorXd singular_values(const Eigen::MatrixXd& a);
Eigen::VectorXd singular_values(const Eigen::MatrixXcd& a);

/// OpenBLAS 0.3.20 returns wrong eigenvectors with its Cooperlake kernels.
/// When that core is detected and OPENBLAS_CORETYPE is unset, re-executes the
/// process with OPENBLAS_CORETYPE=SkylakeX. Call first thing in main.
void ensure_safe_blas_kernel(char** argv);

}  // namespace degenspec::linalg
