#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qspin/misfit_kernels.hpp"
#include "qspin/observables.hpp"

namespace qspin {

/// One observable on an equidistant grid, with its time derivative for
/// Hermite interpolation.
struct ObservableSeries {
  std::vector<double> times;
  std::vector<double> values;
  std::vector<double> derivative_values;

  static ObservableSeries from_table(const ObservableTable& table, std::string_view component);

  std::size_t size() const noexcept { return times.size(); }
  double spacing() const;
  /// Throws unless lengths agree, size >= 2 and the grid is equidistant.
  void validate() const;
};

/// Equidistant scan over the rescaling factor.
struct ZetaScan {
  double lo = 0.85;
  double hi = 1.25;
  std::size_t count = 4001;

  std::vector<double> grid() const;
  void validate() const;
};

struct MisfitCurve {
  std::vector<double> zetas;
  std::vector<double> values;
  double argmin_zeta = 0.0;
  double min_value = 0.0;
  /// False when the best grid point is an endpoint of the scan.
  bool interior = false;
};

using CurveMap = std::map<std::string, MisfitCurve, std::less<>>;

struct MisfitOptions {
  kernels::Isa isa = kernels::active_isa();
  /// 0 = QSPINDYN_THREADS or hardware concurrency.
  unsigned threads = 0;
  /// Golden-section refinement stops at this bracket width relative to zeta.
  double refine_rel_width = 1e-6;
};

/// Worker count for the zeta scan: QSPINDYN_THREADS if set and positive,
/// otherwise the number of hardware threads.
unsigned default_misfit_threads();

/// R(zeta) = (1/N) sum_i [llg(zeta t_i) - ll(t_i)]^2 over the q-LL grid.
/// Throws NumericalError if zeta t_i leaves the q-LLG series.
double misfit_value(const ObservableSeries& llg, const ObservableSeries& ll, double zeta,
                    kernels::Isa isa = kernels::active_isa());

/// Samples R on `zeta_grid` (sorted ascending), then refines the best grid
/// point by golden-section search inside its neighbouring cells.
MisfitCurve misfit_curve(const ObservableSeries& llg, const ObservableSeries& ll,
                         std::span<const double> zeta_grid, const MisfitOptions& opts = {});

struct EquivalenceVerdict {
  std::map<std::string, double, std::less<>> per_component_argmins;
  double spread = 0.0;    // max - min of argmins
  double residual = 0.0;  // max of min_values
  double zeta_tol = 0.0;
  double residual_tol = 0.0;
  bool equivalent = false;
};

inline constexpr double kDefaultZetaTolerance = 5e-4;
inline constexpr double kDefaultResidualTolerance = 1e-6;

/// equivalent = spread <= zeta_tol && residual <= residual_tol. Needs at
/// least two components.
EquivalenceVerdict equivalence_verdict(const CurveMap& curves,
                                       double zeta_tol = kDefaultZetaTolerance,
                                       double residual_tol = kDefaultResidualTolerance);

struct MagnitudeRatio {
  double ratio = 0.0;
  bool degenerate = false;  // both runs have (numerically) zero residual
};

/// max min_value of `run_b` over max min_value of `run_a`. A zero
/// denominator gives +inf; both zero is degenerate.
MagnitudeRatio misfit_magnitude_compare(const CurveMap& run_a, const CurveMap& run_b);

}  // namespace qspin
