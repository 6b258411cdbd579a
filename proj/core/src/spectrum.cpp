#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "curveq/errors.hpp"
#include "curveq/operators.hpp"

namespace curveq {
namespace {

// Rotates v so that its largest-magnitude entry is real and positive.
void fix_phase(Eigen::Ref<Eigen::VectorXcd> v) {
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  const Complex pivot = v[imax];
  if (std::abs(pivot) > 0.0) v *= std::conj(pivot) / std::abs(pivot);
}

}  // namespace

Spectrum solve_spectrum(const OperatorMatrix& hamiltonian, int k) {
  const int n = hamiltonian.size();
  if (k < 1 || k > n) throw OperatorError("solve_spectrum: k must lie in [1, n]");
  if (hamiltonian.hermitian == false && hermiticity_defect(hamiltonian) > 1e-13 * max_entry(hamiltonian)) {
    throw OperatorError("solve_spectrum: operator is not Hermitian");
  }

  std::vector<double> w(static_cast<std::size_t>(n));
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(k));
  lapack_int found = 0;
  Eigen::MatrixXcd vectors(n, k);
  lapack_int info = 0;

  const bool real = hamiltonian.entries.imag().cwiseAbs().maxCoeff() == 0.0;
  if (real) {
    Eigen::MatrixXd a = hamiltonian.entries.real();
    Eigen::MatrixXd z(n, k);
    info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'U', n, a.data(), n, 0.0, 0.0, 1, k, 0.0, &found, w.data(),
                          z.data(), n, support.data());
    vectors = z.cast<Complex>();
  } else {
    Eigen::MatrixXcd a = hamiltonian.entries;
    info = LAPACKE_zheevr(LAPACK_COL_MAJOR, 'V', 'I', 'U', n, reinterpret_cast<lapack_complex_double*>(a.data()), n,
                          0.0, 0.0, 1, k, 0.0, &found, w.data(),
                          reinterpret_cast<lapack_complex_double*>(vectors.data()), n, support.data());
  }
  if (info != 0 || found != k) {
    throw SolverError(std::numeric_limits<double>::quiet_NaN(), "eigen-solver failed (info " + std::to_string(info) + ")");
  }

  const double norm_inf = hamiltonian.entries.cwiseAbs().rowwise().sum().maxCoeff();
  Spectrum out;
  out.h = hamiltonian.grid.h;
  out.eigenvalues.assign(w.begin(), w.begin() + k);
  out.residuals.resize(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) {
    fix_phase(vectors.col(j));
    const Eigen::VectorXcd r = hamiltonian.entries * vectors.col(j) - w[static_cast<std::size_t>(j)] * vectors.col(j);
    const double res = r.norm();
    out.residuals[static_cast<std::size_t>(j)] = res;
    if (res > 1e-9 * norm_inf) throw SolverError(res, "eigenpair residual above tolerance");
  }
  const double ortho = (vectors.adjoint() * vectors - Eigen::MatrixXcd::Identity(k, k)).cwiseAbs().maxCoeff();
  if (ortho > 1e-10) throw SolverError(ortho, "eigenvectors not orthonormal");
  out.eigenvectors = vectors / std::sqrt(out.h);
  return out;
}

Complex expectation(const OperatorMatrix& m, const Eigen::VectorXcd& psi) {
  const double h = m.grid.h;
  if (psi.size() != m.size()) throw OperatorError("expectation: state size does not match operator");
  const double norm = h * psi.squaredNorm();
  if (std::abs(norm - 1.0) > 1e-8) throw OperatorError("expectation: state not grid-normalized");
  return h * psi.dot(m.entries * psi);
}

}  // namespace curveq
