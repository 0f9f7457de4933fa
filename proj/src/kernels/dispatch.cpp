#include <cstdlib>
#include <string_view>

#include "qspin/misfit_kernels.hpp"

namespace qspin::kernels {

std::string_view to_string(Isa isa) noexcept {
  return isa == Isa::Avx2 ? "avx2" : "scalar";
}

bool isa_available(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa() noexcept {
  static const Isa chosen = [] {
    if (const char* forced = std::getenv("QSPINDYN_SIMD")) {
      if (std::string_view(forced) == "scalar") return Isa::Scalar;
    }
    return isa_available(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
  }();
  return chosen;
}

double squared_misfit_sum(const HermiteSource& src, const TargetGrid& target, double zeta,
                          Isa isa) {
  if (isa == Isa::Avx2 && isa_available(Isa::Avx2)) {
    return squared_misfit_sum_avx2(src, target, zeta);
  }
  return squared_misfit_sum_scalar(src, target, zeta);
}

void hermite_resample(const HermiteSource& src, double t0, double spacing, double zeta,
                      double* out, std::size_t count, Isa isa) {
  if (isa == Isa::Avx2 && isa_available(Isa::Avx2)) {
    hermite_resample_avx2(src, t0, spacing, zeta, out, count);
  } else {
    hermite_resample_scalar(src, t0, spacing, zeta, out, count);
  }
}

}  // namespace qspin::kernels
