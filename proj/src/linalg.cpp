#include "degenspec/linalg.hpp"

#include <dlfcn.h>
#include <lapacke.h>
#include <strings.h>
#include <unistd.h>

#include <cstdlib>

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace degenspec::linalg {

namespace {

void check_info(lapack_int info, const char* routine) {
  if (info != 0) throw std::runtime_error(std::string("linalg: ") + routine + " failed, info=" + std::to_string(info));
}

void check_square(Eigen::Index rows, Eigen::Index cols) {
  if (rows != cols) throw std::invalid_argument("linalg: matrix is not square");
}

}  // namespace

Eigen::VectorXd sym_eigenvalues(const Eigen::MatrixXd& a) {
  check_square(a.rows(), a.cols());
  const auto n = static_cast<lapack_int>(a.rows());
  Eigen::VectorXd w(n);
  if (n == 0) return w;
  Eigen::MatrixXd work = a;
  check_info(LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'U', n, work.data(), n, w.data()), "dsyevd");
  return w;
}

SymmetricEigen sym_eigen(const Eigen::MatrixXd& a) {
  check_square(a.rows(), a.cols());
  const auto n = static_cast<lapack_int>(a.rows());
  SymmetricEigen out;
  out.values.resize(n);
  out.vectors = a;
  if (n == 0) return out;
  check_info(LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'U', n, out.vectors.data(), n, out.values.data()), "dsyevd");
  return out;
}

SymmetricEigen sym_eigen_range(const Eigen::MatrixXd& a, double lower, double upper, bool vectors) {
  check_square(a.rows(), a.cols());
  if (!(lower < upper)) throw std::invalid_argument("linalg: empty eigenvalue interval");
  const auto n = static_cast<lapack_int>(a.rows());
  SymmetricEigen out;
  if (n == 0) return out;
  Eigen::MatrixXd work = a;
  Eigen::VectorXd w(n);
  Eigen::MatrixXd z;
  if (vectors) z.resize(n, n);
  std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(n));
  lapack_int m = 0;
  const lapack_int ldz = vectors ? n : 1;
  double dummy = 0.0;
  check_info(LAPACKE_dsyevr(LAPACK_COL_MAJOR, vectors ? 'V' : 'N', 'V', 'U', n, work.data(), n, lower, upper, 0, 0,
                            0.0, &m, w.data(), vectors ? z.data() : &dummy, ldz, isuppz.data()),
             "dsyevr");
  out.values = w.head(m);
  if (vectors) out.vectors = z.leftCols(m);
  return out;
}

Eigen::VectorXd herm_eigenvalues(const Eigen::MatrixXcd& a) {
  check_square(a.rows(), a.cols());
  const auto n = static_cast<lapack_int>(a.rows());
  Eigen::VectorXd w(n);
  if (n == 0) return w;
  Eigen::MatrixXcd work = a;
  check_info(LAPACKE_zheevd(LAPACK_COL_MAJOR, 'N', 'U', n, reinterpret_cast<lapack_complex_double*>(work.data()), n,
                            w.data()),
             "zheevd");
  return w;
}

Eigen::VectorXd singular_values(const Eigen::MatrixXd& a) {
  const auto m = static_cast<lapack_int>(a.rows());
  const auto n = static_cast<lapack_int>(a.cols());
  Eigen::VectorXd s(std::min(m, n));
  if (s.size() == 0) return s;
  Eigen::MatrixXd work = a;
  double dummy = 0.0;
  check_info(LAPACKE_dgesdd(LAPACK_COL_MAJOR, 'N', m, n, work.data(), m, s.data(), &dummy, 1, &dummy, 1), "dgesdd");
  return s;
}

Eigen::VectorXd singular_values(const Eigen::MatrixXcd& a) {
  const auto m = static_cast<lapack_int>(a.rows());
  const auto n = static_cast<lapack_int>(a.cols());
  Eigen::VectorXd s(std::min(m, n));
  if (s.size() == 0) return s;
  Eigen::MatrixXcd work = a;
  lapack_complex_double dummy{};
  check_info(LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', m, n, reinterpret_cast<lapack_complex_double*>(work.data()), m,
                            s.data(), &dummy, 1, &dummy, 1),
             "zgesdd");
  return s;
}

void ensure_safe_blas_kernel(char** argv) {
  if (std::getenv("OPENBLAS_CORETYPE")) return;
  using corename_fn = char* (*)();
  auto fn = reinterpret_cast<corename_fn>(dlsym(RTLD_DEFAULT, "openblas_get_corename"));
  if (!fn) return;
  const char* core = fn();
  if (!core || strcasecmp(core, "cooperlake") != 0) return;
  setenv("OPENBLAS_CORETYPE", "SkylakeX", 1);
  execv("/proc/self/exe", argv);
}

}  // namespace degenspec::linalg
