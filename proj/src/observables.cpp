#include "qspin/observables.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qspin/error.hpp"

namespace qspin {

namespace {

constexpr double kImagTolerance = 1e-10;

// Symmetrized second-moment operators (1/2){S_j, S_k}, upper triangle order
// xx, xy, xz, yy, yz, zz.
std::array<ComplexMatrix, 6> second_moment_operators(const SpinOperators& ops) {
  std::array<ComplexMatrix, 6> out;
  std::size_t n = 0;
  for (int j = 0; j < 3; ++j)
    for (int k = j; k < 3; ++k)
      out[n++] = 0.5 * anticommutator(ops.component(j), ops.component(k));
  return out;
}

double checked_real(Complex v, const char* what) {
  if (std::abs(v.imag()) > kImagTolerance) {
    throw NumericalError(std::string(what) + ": expectation value has imaginary part " +
                         std::to_string(v.imag()));
  }
  return v.real();
}

void require_dims(const ComplexMatrix& rho, const SpinOperators& ops) {
  if (rho.rows() != ops.sz.rows()) {
    throw DimensionError("state and spin operator dimensions differ");
  }
}

}  // namespace

SpinExpectation spin_expectation(const DensityMatrix& rho, const SpinOperators& ops) {
  require_dims(rho.matrix(), ops);
  return {checked_real(trace_product(ops.sx, rho.matrix()), "spin_expectation"),
          checked_real(trace_product(ops.sy, rho.matrix()), "spin_expectation"),
          checked_real(trace_product(ops.sz, rho.matrix()), "spin_expectation")};
}

CovarianceMatrix covariance(const DensityMatrix& rho, const SpinOperators& ops) {
  const SpinExpectation m = spin_expectation(rho, ops);
  const Vec3 mv = m.vector();
  const auto moments = second_moment_operators(ops);
  CovarianceMatrix cov;
  std::size_t n = 0;
  for (int j = 0; j < 3; ++j) {
    for (int k = j; k < 3; ++k) {
      const double second = checked_real(trace_product(moments[n++], rho.matrix()), "covariance");
      cov.c(j, k) = second - mv(j) * mv(k);
      cov.c(k, j) = cov.c(j, k);
    }
  }
  return cov;
}

double fluctuation_volume(const CovarianceMatrix& cov) {
  return 4.0 * std::numbers::pi / 3.0 * std::sqrt(std::max(cov.determinant(), 0.0));
}

FluctuationSummary fluctuation_summary(const DensityMatrix& rho, const SpinOperators& ops,
                                       const HamiltonianMatrix& h) {
  const CovarianceMatrix cov = covariance(rho, ops);
  return {fluctuation_volume(cov), cov.trace(), rho.purity(),
          trace_product(h.h, rho.matrix()).real()};
}

std::size_t ObservableTable::column_index(std::string_view name) {
  const auto it = std::find(kObservableColumns.begin(), kObservableColumns.end(), name);
  if (it == kObservableColumns.end()) {
    throw Error("unknown observable column '" + std::string(name) + "'");
  }
  return static_cast<std::size_t>(it - kObservableColumns.begin());
}

ObservableTable compute_observables(const std::vector<double>& times,
                                    const std::vector<ComplexMatrix>& states,
                                    const std::vector<ComplexMatrix>& derivatives,
                                    const SpinOperators& ops, const HamiltonianMatrix& h) {
  const std::size_t n = times.size();
  if (states.size() != n || derivatives.size() != n) {
    throw DimensionError("compute_observables: grid, states and derivatives differ in length");
  }
  const auto moments = second_moment_operators(ops);

  ObservableTable table;
  table.times = times;
  for (auto& col : table.columns) col.resize(n);
  for (auto& col : table.derivatives) col.resize(n);

  for (std::size_t i = 0; i < n; ++i) {
    const ComplexMatrix& rho = states[i];
    const ComplexMatrix& drho = derivatives[i];
    require_dims(rho, ops);

    Vec3 m;
    Vec3 dm;
    for (int j = 0; j < 3; ++j) {
      m(j) = checked_real(trace_product(ops.component(j), rho), "spin_expectation");
      dm(j) = trace_product(ops.component(j), drho).real();
      table.columns[static_cast<std::size_t>(j)][i] = m(j);
      table.derivatives[static_cast<std::size_t>(j)][i] = dm(j);
    }

    CovarianceMatrix cov;
    std::size_t slot = 0;
    for (int j = 0; j < 3; ++j) {
      for (int k = j; k < 3; ++k) {
        const double second = checked_real(trace_product(moments[slot], rho), "covariance");
        const double dsecond = trace_product(moments[slot], drho).real();
        cov.c(j, k) = second - m(j) * m(k);
        cov.c(k, j) = cov.c(j, k);
        table.columns[3 + slot][i] = cov.c(j, k);
        table.derivatives[3 + slot][i] = dsecond - dm(j) * m(k) - m(j) * dm(k);
        ++slot;
      }
    }

    table.columns[9][i] = trace_product(rho, rho).real();
    table.columns[10][i] = trace_product(h.h, rho).real();
    table.columns[11][i] = fluctuation_volume(cov);
    table.columns[12][i] = cov.trace();
  }
  return table;
}

ObservableTable compute_observables(const Trajectory& traj, const SpinOperators& ops,
                                    const HamiltonianMatrix& h) {
  std::vector<ComplexMatrix> states;
  states.reserve(traj.size());
  for (const auto& s : traj.states) states.push_back(s.matrix());
  return compute_observables(traj.times, states, traj.derivatives, ops, h);
}

}  // namespace qspin
