#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace qspin {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr Complex kI{0.0, 1.0};

/// ab - ba. Throws DimensionError on shape mismatch.
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b);

/// (m + m^dagger) / 2
ComplexMatrix hermitian_part(const ComplexMatrix& m);

/// max_ij |m_ij - conj(m_ji)|
double hermiticity_defect(const ComplexMatrix& m);

/// max_ij |a_ij - b_ij|
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// Tr(a b) without forming the product.
Complex trace_product(const ComplexMatrix& a, const ComplexMatrix& b);

/// Ascending real eigenvalues of a Hermitian matrix. Inputs with a
/// hermiticity defect above 1e-8 are rejected.
std::vector<double> eigenvalues_hermitian(const ComplexMatrix& m);

/// Unit-trace, Hermitian, positive semidefinite d x d matrix.
class DensityMatrix {
 public:
  static constexpr double kTolerance = 1e-10;

  /// Checks hermiticity, unit trace and positivity; throws InvalidStateError.
  static DensityMatrix validated(const ComplexMatrix& m);

  /// Wraps a matrix the caller already knows to be a state (integrator output).
  static DensityMatrix assume_valid(ComplexMatrix m) { return DensityMatrix(std::move(m)); }

  const ComplexMatrix& matrix() const noexcept { return mat_; }
  Eigen::Index dim() const noexcept { return mat_.rows(); }
  double purity() const;

 private:
  explicit DensityMatrix(ComplexMatrix m) : mat_(std::move(m)) {}

  ComplexMatrix mat_;
};

/// Solves X - i kappa [rho, X] = rhs0 for X via the vectorized d^2 x d^2
/// system (I - i kappa (rho (x) I - I (x) rho^T)) vec(X) = vec(rhs0), LU with
/// partial pivoting, row-major vec. The result is symmetrized.
///
/// For real-spectrum rho every eigenvalue of the system matrix is
/// 1 - i kappa (p_i - p_j), so |lambda| >= 1 and the solve cannot be singular.
ComplexMatrix solve_implicit_rhs(const ComplexMatrix& rho, const ComplexMatrix& rhs0,
                                 double kappa);

inline ComplexMatrix solve_implicit_rhs(const DensityMatrix& rho, const ComplexMatrix& rhs0,
                                        double kappa) {
  return solve_implicit_rhs(rho.matrix(), rhs0, kappa);
}

}  // namespace qspin
