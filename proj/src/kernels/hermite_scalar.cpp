#include <cmath>

#include "qspin/misfit_kernels.hpp"

namespace qspin::kernels {

namespace {

inline double interpolate(const HermiteSource& src, double tau) {
  const double u = (tau - src.t0) / src.spacing;
  double cell = std::floor(u);
  const double last_cell = static_cast<double>(src.size - 2);
  if (cell > last_cell) cell = last_cell;
  if (cell < 0.0) cell = 0.0;
  const double s = u - cell;
  const auto k = static_cast<std::size_t>(cell);

  const double y0 = src.values[k];
  const double y1 = src.values[k + 1];
  const double hm0 = src.spacing * src.slopes[k];
  const double hm1 = src.spacing * src.slopes[k + 1];
  const double d = y1 - y0;
  const double c2 = 3.0 * d - 2.0 * hm0 - hm1;
  const double c3 = -2.0 * d + hm0 + hm1;
  return y0 + s * (hm0 + s * (c2 + s * c3));
}

}  // namespace

double squared_misfit_sum_scalar(const HermiteSource& src, const TargetGrid& target,
                                 double zeta) {
  double acc = 0.0;
  for (std::size_t i = 0; i < target.size; ++i) {
    const double t = target.t0 + static_cast<double>(i) * target.spacing;
    const double diff = interpolate(src, zeta * t) - target.values[i];
    acc += diff * diff;
  }
  return acc;
}

void hermite_resample_scalar(const HermiteSource& src, double t0, double spacing, double zeta,
                             double* out, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = interpolate(src, zeta * (t0 + static_cast<double>(i) * spacing));
  }
}

}  // namespace qspin::kernels
