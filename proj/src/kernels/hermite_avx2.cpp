#include "qspin/misfit_kernels.hpp"

#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
#define QSPIN_HAVE_AVX2_KERNELS 1
#include <immintrin.h>
#endif

namespace qspin::kernels {

#if QSPIN_HAVE_AVX2_KERNELS

namespace {

#define QSPIN_AVX2 __attribute__((target("avx2,fma")))

struct Lanes {
  __m256d lane_offsets;
  __m256d t0;
  __m256d spacing;
  __m256d zeta;
  __m256d src_t0;
  __m256d src_spacing;
  __m256d last_cell;
};

QSPIN_AVX2 inline __m256d interpolate4(const HermiteSource& src, const Lanes& c,
                                       double first_index) {
  const __m256d idx = _mm256_add_pd(_mm256_set1_pd(first_index), c.lane_offsets);
  const __m256d t = _mm256_add_pd(c.t0, _mm256_mul_pd(idx, c.spacing));
  const __m256d tau = _mm256_mul_pd(c.zeta, t);
  const __m256d u = _mm256_div_pd(_mm256_sub_pd(tau, c.src_t0), c.src_spacing);
  __m256d cell = _mm256_floor_pd(u);
  cell = _mm256_min_pd(cell, c.last_cell);
  cell = _mm256_max_pd(cell, _mm256_setzero_pd());
  const __m256d s = _mm256_sub_pd(u, cell);
  const __m128i k = _mm256_cvtpd_epi32(cell);

  const __m256d y0 = _mm256_i32gather_pd(src.values, k, 8);
  const __m256d y1 = _mm256_i32gather_pd(src.values + 1, k, 8);
  const __m256d hm0 = _mm256_mul_pd(c.src_spacing, _mm256_i32gather_pd(src.slopes, k, 8));
  const __m256d hm1 = _mm256_mul_pd(c.src_spacing, _mm256_i32gather_pd(src.slopes + 1, k, 8));
  const __m256d d = _mm256_sub_pd(y1, y0);
  const __m256d two = _mm256_set1_pd(2.0);
  const __m256d c2 = _mm256_sub_pd(_mm256_fmsub_pd(_mm256_set1_pd(3.0), d, _mm256_mul_pd(two, hm0)), hm1);
  const __m256d c3 = _mm256_add_pd(_mm256_fnmadd_pd(two, d, hm0), hm1);
  __m256d y = _mm256_fmadd_pd(s, c3, c2);
  y = _mm256_fmadd_pd(s, y, hm0);
  return _mm256_fmadd_pd(s, y, y0);
}

QSPIN_AVX2 Lanes make_lanes(const HermiteSource& src, double t0, double spacing, double zeta) {
  return Lanes{_mm256_set_pd(3.0, 2.0, 1.0, 0.0),
               _mm256_set1_pd(t0),
               _mm256_set1_pd(spacing),
               _mm256_set1_pd(zeta),
               _mm256_set1_pd(src.t0),
               _mm256_set1_pd(src.spacing),
               _mm256_set1_pd(static_cast<double>(src.size - 2))};
}

}  // namespace

QSPIN_AVX2 double squared_misfit_sum_avx2(const HermiteSource& src, const TargetGrid& target,
                                          double zeta) {
  const Lanes c = make_lanes(src, target.t0, target.spacing, zeta);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= target.size; i += 4) {
    const __m256d y = interpolate4(src, c, static_cast<double>(i));
    const __m256d diff = _mm256_sub_pd(y, _mm256_loadu_pd(target.values + i));
    acc = _mm256_fmadd_pd(diff, diff, acc);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double total = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  if (i < target.size) {
    TargetGrid tail{target.values + i, target.size - i,
                    target.t0 + static_cast<double>(i) * target.spacing, target.spacing};
    total += squared_misfit_sum_scalar(src, tail, zeta);
  }
  return total;
}

QSPIN_AVX2 void hermite_resample_avx2(const HermiteSource& src, double t0, double spacing,
                                      double zeta, double* out, std::size_t count) {
  const Lanes c = make_lanes(src, t0, spacing, zeta);
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    _mm256_storeu_pd(out + i, interpolate4(src, c, static_cast<double>(i)));
  }
  if (i < count) {
    hermite_resample_scalar(src, t0 + static_cast<double>(i) * spacing, spacing, zeta, out + i,
                            count - i);
  }
}

#else

double squared_misfit_sum_avx2(const HermiteSource& src, const TargetGrid& target, double zeta) {
  return squared_misfit_sum_scalar(src, target, zeta);
}

void hermite_resample_avx2(const HermiteSource& src, double t0, double spacing, double zeta,
                           double* out, std::size_t count) {
  hermite_resample_scalar(src, t0, spacing, zeta, out, count);
}

#endif

}  // namespace qspin::kernels
