#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "qspin/densmat.hpp"
#include "qspin/hamiltonian.hpp"

namespace qspin {

enum class DynamicsKind { QLL, QLLG };

std::string_view to_string(DynamicsKind kind) noexcept;

enum class IntegratorMethod { RK4Fixed, RK45Adaptive };

struct IntegratorConfig {
  IntegratorMethod method = IntegratorMethod::RK4Fixed;
  /// Fixed step for RK4 (upper bound; adjusted down to divide the output
  /// spacing), initial step for RK45.
  double step = 1e-3;
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double kappa = 0.0;

  void validate() const;
};

struct TrajectoryDiagnostics {
  double max_trace_drift = 0.0;   // max |Tr rho - 1| over recorded states
  double max_purity_drift = 0.0;  // max |Tr rho^2 - Tr rho0^2|
  double min_eigenvalue = 0.0;    // smallest eigenvalue seen on the grid
  std::size_t internal_steps = 0;
};

/// States and rho-dot on an equidistant grid t_i = i * t_max / (n - 1).
struct Trajectory {
  DynamicsKind kind = DynamicsKind::QLL;
  std::vector<double> times;
  std::vector<DensityMatrix> states;
  std::vector<ComplexMatrix> derivatives;
  TrajectoryDiagnostics diagnostics;

  std::size_t size() const noexcept { return times.size(); }
  double spacing() const { return times.size() > 1 ? times[1] - times[0] : 0.0; }
};

/// q-LL:  i[rho,H] - kappa [rho,[rho,H]]
/// q-LLG: X with X = i[rho,H] + i kappa [rho, X], solved exactly.
/// The result is symmetrized.
ComplexMatrix rhs(DynamicsKind kind, const ComplexMatrix& rho, const ComplexMatrix& h,
                  double kappa);

inline ComplexMatrix rhs(DynamicsKind kind, const DensityMatrix& rho, const HamiltonianMatrix& h,
                         double kappa) {
  return rhs(kind, rho.matrix(), h.h, kappa);
}

/// Integrates from 0 to t_max and records n_grid equidistant snapshots.
/// Each internal step is followed by Hermitian symmetrization and trace
/// renormalization. Throws NumericalError if a recorded eigenvalue drops
/// below -1e-6.
Trajectory integrate(DynamicsKind kind, const DensityMatrix& rho0, const HamiltonianMatrix& h,
                     const IntegratorConfig& cfg, double t_max, std::size_t n_grid);

}  // namespace qspin
