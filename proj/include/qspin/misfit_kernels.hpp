#pragma once

// Hot loops of the rescaling-misfit scan. Every kernel has a portable scalar
// reference; SIMD variants are selected at runtime and must agree with the
// reference to rounding (see tests/test_kernels.cpp).

#include <cstddef>
#include <string_view>

namespace qspin::kernels {

/// Samples y(t) and y'(t) on t_k = t0 + k * spacing, k = 0 .. size-1.
struct HermiteSource {
  const double* values = nullptr;
  const double* slopes = nullptr;
  std::size_t size = 0;
  double t0 = 0.0;
  double spacing = 1.0;
};

/// Equidistant target grid t_i = t0 + i * spacing with reference values.
struct TargetGrid {
  const double* values = nullptr;
  std::size_t size = 0;
  double t0 = 0.0;
  double spacing = 1.0;
};

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa) noexcept;

/// True if the CPU (and build) supports `isa`.
bool isa_available(Isa isa) noexcept;

/// Best available ISA, unless QSPINDYN_SIMD=scalar forces the reference path.
Isa active_isa() noexcept;

// Cubic Hermite interpolation of `src` at zeta * t_i; callers guarantee every
// query lies inside the source grid (indices are clamped, not checked).

/// sum_i (interp(zeta t_i) - target_i)^2
double squared_misfit_sum_scalar(const HermiteSource& src, const TargetGrid& target, double zeta);
double squared_misfit_sum_avx2(const HermiteSource& src, const TargetGrid& target, double zeta);
double squared_misfit_sum(const HermiteSource& src, const TargetGrid& target, double zeta,
                          Isa isa);

/// out[i] = interp(zeta * (t0 + i * spacing)), i < count
void hermite_resample_scalar(const HermiteSource& src, double t0, double spacing, double zeta,
                             double* out, std::size_t count);
void hermite_resample_avx2(const HermiteSource& src, double t0, double spacing, double zeta,
                           double* out, std::size_t count);
void hermite_resample(const HermiteSource& src, double t0, double spacing, double zeta,
                      double* out, std::size_t count, Isa isa);

}  // namespace qspin::kernels
