#include "qspin/misfit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>
#include <thread>

#include "qspin/error.hpp"

namespace qspin {

namespace {

// Both residuals below this are treated as "no misfit at all".
constexpr double kZeroMisfit = 1e-20;

kernels::HermiteSource as_source(const ObservableSeries& s) {
  return {s.values.data(), s.derivative_values.data(), s.size(), s.times.front(), s.spacing()};
}

kernels::TargetGrid as_target(const ObservableSeries& s) {
  return {s.values.data(), s.size(), s.times.front(), s.spacing()};
}

void check_range(const ObservableSeries& llg, const ObservableSeries& ll, double zeta_lo,
                 double zeta_hi) {
  if (!(zeta_lo > 0.0)) throw NumericalError("rescaling factors must be positive");
  const double lo = zeta_lo * ll.times.front();
  const double hi = zeta_hi * ll.times.back();
  const double slack = 1e-12 * std::max(1.0, std::abs(llg.times.back()));
  if (lo < llg.times.front() - slack || hi > llg.times.back() + slack) {
    throw NumericalError("rescaled time " + std::to_string(hi) +
                         " exceeds the q-LLG series range [" +
                         std::to_string(llg.times.front()) + ", " +
                         std::to_string(llg.times.back()) + "]; integrate q-LLG longer");
  }
}

double evaluate(const kernels::HermiteSource& src, const kernels::TargetGrid& target, double zeta,
                kernels::Isa isa) {
  return kernels::squared_misfit_sum(src, target, zeta, isa) / static_cast<double>(target.size);
}

}  // namespace

ObservableSeries ObservableSeries::from_table(const ObservableTable& table,
                                              std::string_view component) {
  const auto it = std::find(kMisfitComponents.begin(), kMisfitComponents.end(), component);
  if (it == kMisfitComponents.end()) {
    throw Error("'" + std::string(component) + "' is not a misfit component");
  }
  const auto idx = static_cast<std::size_t>(it - kMisfitComponents.begin());
  return {table.times, table.columns[idx], table.derivatives[idx]};
}

double ObservableSeries::spacing() const {
  return (times.back() - times.front()) / static_cast<double>(times.size() - 1);
}

void ObservableSeries::validate() const {
  if (times.size() < 2) throw DimensionError("observable series needs at least 2 points");
  if (values.size() != times.size() || derivative_values.size() != times.size()) {
    throw DimensionError("observable series arrays differ in length");
  }
  const double h = spacing();
  if (!(h > 0.0)) throw DimensionError("observable series times must increase");
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double expected = times.front() + static_cast<double>(i) * h;
    if (std::abs(times[i] - expected) > 1e-9 * std::max(1.0, std::abs(expected))) {
      throw DimensionError("observable series grid is not equidistant");
    }
  }
}

std::vector<double> ZetaScan::grid() const {
  validate();
  std::vector<double> out(count);
  const double step = (hi - lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) out[i] = lo + static_cast<double>(i) * step;
  out.back() = hi;
  return out;
}

void ZetaScan::validate() const {
  if (!(lo > 0.0) || !(hi > lo) || !std::isfinite(hi)) {
    throw InvalidStateError("zeta scan needs 0 < lo < hi");
  }
  if (count < 3) throw InvalidStateError("zeta scan needs at least 3 points");
}

unsigned default_misfit_threads() {
  if (const char* env = std::getenv("QSPINDYN_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

double misfit_value(const ObservableSeries& llg, const ObservableSeries& ll, double zeta,
                    kernels::Isa isa) {
  llg.validate();
  ll.validate();
  check_range(llg, ll, zeta, zeta);
  return evaluate(as_source(llg), as_target(ll), zeta, isa);
}

MisfitCurve misfit_curve(const ObservableSeries& llg, const ObservableSeries& ll,
                         std::span<const double> zeta_grid, const MisfitOptions& opts) {
  llg.validate();
  ll.validate();
  if (zeta_grid.size() < 2) throw InvalidStateError("zeta grid needs at least 2 points");
  if (!std::is_sorted(zeta_grid.begin(), zeta_grid.end())) {
    throw InvalidStateError("zeta grid must be sorted");
  }
  check_range(llg, ll, zeta_grid.front(), zeta_grid.back());

  const auto src = as_source(llg);
  const auto target = as_target(ll);

  MisfitCurve curve;
  curve.zetas.assign(zeta_grid.begin(), zeta_grid.end());
  curve.values.resize(zeta_grid.size());

  const unsigned workers = std::clamp<unsigned>(
      opts.threads ? opts.threads : default_misfit_threads(), 1u,
      static_cast<unsigned>(zeta_grid.size()));
  auto scan = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      curve.values[i] = evaluate(src, target, curve.zetas[i], opts.isa);
    }
  };
  if (workers == 1) {
    scan(0, zeta_grid.size());
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (zeta_grid.size() + workers - 1) / workers;
    for (std::size_t begin = 0; begin < zeta_grid.size(); begin += chunk) {
      pool.emplace_back(scan, begin, std::min(begin + chunk, zeta_grid.size()));
    }
  }

  const auto best = static_cast<std::size_t>(
      std::min_element(curve.values.begin(), curve.values.end()) - curve.values.begin());
  curve.interior = best > 0 && best + 1 < curve.values.size();
  curve.argmin_zeta = curve.zetas[best];
  curve.min_value = curve.values[best];

  // Golden-section search in the cells adjacent to the best grid point.
  double a = curve.zetas[best > 0 ? best - 1 : best];
  double b = curve.zetas[best + 1 < curve.zetas.size() ? best + 1 : best];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = evaluate(src, target, x1, opts.isa);
  double f2 = evaluate(src, target, x2, opts.isa);
  while (b - a > opts.refine_rel_width * curve.argmin_zeta) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = evaluate(src, target, x1, opts.isa);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = evaluate(src, target, x2, opts.isa);
    }
  }
  const double refined = 0.5 * (a + b);
  const double refined_value = evaluate(src, target, refined, opts.isa);
  if (refined_value <= curve.min_value) {
    curve.argmin_zeta = refined;
    curve.min_value = refined_value;
  }
  return curve;
}

EquivalenceVerdict equivalence_verdict(const CurveMap& curves, double zeta_tol,
                                       double residual_tol) {
  if (curves.size() < 2) throw InvalidStateError("equivalence verdict needs >= 2 components");
  EquivalenceVerdict v;
  v.zeta_tol = zeta_tol;
  v.residual_tol = residual_tol;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& [name, curve] : curves) {
    v.per_component_argmins.emplace(name, curve.argmin_zeta);
    lo = std::min(lo, curve.argmin_zeta);
    hi = std::max(hi, curve.argmin_zeta);
    v.residual = std::max(v.residual, curve.min_value);
  }
  v.spread = hi - lo;
  v.equivalent = v.spread <= zeta_tol && v.residual <= residual_tol;
  return v;
}

MagnitudeRatio misfit_magnitude_compare(const CurveMap& run_a, const CurveMap& run_b) {
  if (run_a.size() != run_b.size() ||
      !std::equal(run_a.begin(), run_a.end(), run_b.begin(),
                  [](const auto& x, const auto& y) { return x.first == y.first; })) {
    throw InvalidStateError("misfit runs must cover the same components");
  }
  auto peak = [](const CurveMap& run) {
    double m = 0.0;
    for (const auto& [name, curve] : run) m = std::max(m, curve.min_value);
    return m;
  };
  const double a = peak(run_a);
  const double b = peak(run_b);
  if (a <= kZeroMisfit && b <= kZeroMisfit) {
    return {std::numeric_limits<double>::quiet_NaN(), true};
  }
  if (a <= kZeroMisfit) return {std::numeric_limits<double>::infinity(), false};
  return {b / a, false};
}

}  // namespace qspin
