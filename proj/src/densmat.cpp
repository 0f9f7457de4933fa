#include "qspin/densmat.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qspin/error.hpp"

namespace qspin {

namespace {

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols()) {
    throw DimensionError(std::string(what) + ": operands must be square and of equal size (" +
                         std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " vs " +
                         std::to_string(b.rows()) + "x" + std::to_string(b.cols()) + ")");
  }
}

}  // namespace

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "commutator");
  return a * b - b * a;
}

ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "anticommutator");
  return a * b + b * a;
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) {
  return 0.5 * (m + m.adjoint());
}

double hermiticity_defect(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("hermiticity_defect: matrix is not square");
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("max_abs_diff: shape mismatch");
  }
  return (a - b).cwiseAbs().maxCoeff();
}

Complex trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "trace_product");
  // Tr(ab) = sum_ij a_ij b_ji
  return (a.array() * b.transpose().array()).sum();
}

std::vector<double> eigenvalues_hermitian(const ComplexMatrix& m) {
  const double defect = hermiticity_defect(m);
  if (defect > 1e-8) {
    throw InvalidStateError("eigenvalues_hermitian: matrix is not Hermitian (defect " +
                            std::to_string(defect) + ")");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(m),
                                                      Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigenvalues_hermitian: eigensolver did not converge");
  }
  const Eigen::VectorXd& ev = solver.eigenvalues();
  std::vector<double> out(ev.data(), ev.data() + ev.size());
  std::sort(out.begin(), out.end());
  return out;
}

DensityMatrix DensityMatrix::validated(const ComplexMatrix& m) {
  if (m.rows() != m.cols() || m.rows() < 2) {
    throw DimensionError("density matrix must be square with dim >= 2");
  }
  if (!m.allFinite()) throw InvalidStateError("density matrix has non-finite entries");
  const double defect = hermiticity_defect(m);
  if (defect > kTolerance) {
    throw InvalidStateError("density matrix is not Hermitian (defect " + std::to_string(defect) +
                            ")");
  }
  const Complex tr = m.trace();
  if (std::abs(tr - 1.0) > kTolerance) {
    throw InvalidStateError("density matrix trace is " + std::to_string(tr.real()) +
                            ", expected 1");
  }
  const auto ev = eigenvalues_hermitian(m);
  if (ev.front() < -kTolerance) {
    throw InvalidStateError("density matrix is not positive semidefinite (min eigenvalue " +
                            std::to_string(ev.front()) + ")");
  }
  return DensityMatrix(hermitian_part(m));
}

double DensityMatrix::purity() const {
  return trace_product(mat_, mat_).real();
}

ComplexMatrix solve_implicit_rhs(const ComplexMatrix& rho, const ComplexMatrix& rhs0,
                                 double kappa) {
  require_same_shape(rho, rhs0, "solve_implicit_rhs");
  if (!(kappa >= 0.0)) throw InvalidStateError("solve_implicit_rhs: kappa must be >= 0");

  const Eigen::Index d = rho.rows();
  const Eigen::Index n = d * d;
  const Complex c = -kI * kappa;

  // Row-major vec: vec(X)[i*d + j] = X_ij.
  //   (rho X)_ij = sum_k rho_ik X_kj   -> rho (x) I
  //   (X rho)_ij = sum_k X_ik rho_kj   -> I (x) rho^T
  ComplexMatrix system = ComplexMatrix::Identity(n, n);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      const Eigen::Index row = i * d + j;
      for (Eigen::Index k = 0; k < d; ++k) {
        system(row, k * d + j) += c * rho(i, k);
        system(row, i * d + k) -= c * rho(k, j);
      }
    }
  }

  Eigen::VectorXcd rhs(n);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) rhs(i * d + j) = rhs0(i, j);

  const Eigen::PartialPivLU<ComplexMatrix> lu(system);
  const double min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (!(min_pivot > 1e-13)) {
    throw NumericalError("solve_implicit_rhs: singular system (min pivot " +
                         std::to_string(min_pivot) + ")");
  }
  const Eigen::VectorXcd x = lu.solve(rhs);

  ComplexMatrix out(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) out(i, j) = x(i * d + j);
  return hermitian_part(out);
}

}  // namespace qspin
