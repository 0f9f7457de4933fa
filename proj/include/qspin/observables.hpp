#pragma once

#include <array>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "qspin/densmat.hpp"
#include "qspin/dynamics.hpp"
#include "qspin/hamiltonian.hpp"
#include "qspin/spin_algebra.hpp"

namespace qspin {

/// <S> = Tr(S rho)
struct SpinExpectation {
  double sx = 0.0;
  double sy = 0.0;
  double sz = 0.0;

  Vec3 vector() const { return {sx, sy, sz}; }
};

/// C_jk = (1/2) <{S_j, S_k}> - <S_j><S_k>, symmetric by construction.
struct CovarianceMatrix {
  Eigen::Matrix3d c = Eigen::Matrix3d::Zero();

  double trace() const { return c.trace(); }
  double determinant() const { return c.determinant(); }
};

struct FluctuationSummary {
  double ve = 0.0;              // (4 pi / 3) sqrt(det C), det clamped at 0
  double total_variance = 0.0;  // Tr C
  double purity = 0.0;
  double energy = 0.0;          // Re Tr(H rho)
};

SpinExpectation spin_expectation(const DensityMatrix& rho, const SpinOperators& ops);
CovarianceMatrix covariance(const DensityMatrix& rho, const SpinOperators& ops);
double fluctuation_volume(const CovarianceMatrix& cov);
FluctuationSummary fluctuation_summary(const DensityMatrix& rho, const SpinOperators& ops,
                                       const HamiltonianMatrix& h);

/// Column order of the observables CSV (after the leading time column).
inline constexpr std::array<std::string_view, 13> kObservableColumns = {
    "Sx", "Sy", "Sz", "Cxx", "Cxy", "Cxz", "Cyy", "Cyz", "Czz", "purity", "energy", "Ve", "trC"};

/// The nine components that enter the rescaling-misfit analysis; they are
/// the first nine observable columns.
inline constexpr std::array<std::string_view, 9> kMisfitComponents = {
    "Sx", "Sy", "Sz", "Cxx", "Cxy", "Cxz", "Cyy", "Cyz", "Czz"};

/// Observables on every grid point, with time derivatives (through rho-dot)
/// for the misfit components.
struct ObservableTable {
  std::vector<double> times;
  std::array<std::vector<double>, kObservableColumns.size()> columns;
  std::array<std::vector<double>, kMisfitComponents.size()> derivatives;

  std::size_t size() const noexcept { return times.size(); }
  /// Index into `columns`; throws for unknown names.
  static std::size_t column_index(std::string_view name);
};

ObservableTable compute_observables(const Trajectory& traj, const SpinOperators& ops,
                                    const HamiltonianMatrix& h);

/// Same, from raw grids (used when replaying persisted trajectories).
ObservableTable compute_observables(const std::vector<double>& times,
                                    const std::vector<ComplexMatrix>& states,
                                    const std::vector<ComplexMatrix>& derivatives,
                                    const SpinOperators& ops, const HamiltonianMatrix& h);

}  // namespace qspin
