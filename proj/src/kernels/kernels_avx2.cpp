#include "specrev/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>
#define SPECREV_X86 1
#else
#define SPECREV_X86 0
#endif

namespace specrev::kernels::avx2 {

#if SPECREV_X86

#define SPECREV_AVX2 __attribute__((target("avx2,fma")))

namespace {

SPECREV_AVX2 inline double hsum(__m256d v) noexcept {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

SPECREV_AVX2 double dot(const double* a, const double* b, std::size_t n) noexcept {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

SPECREV_AVX2 double sum(const double* a, std::size_t n) noexcept {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(_mm256_loadu_pd(a + i), acc0);
    acc1 = _mm256_add_pd(_mm256_loadu_pd(a + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) acc0 = _mm256_add_pd(_mm256_loadu_pd(a + i), acc0);
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += a[i];
  return acc;
}

SPECREV_AVX2 double sum_squares(const double* a, std::size_t n) noexcept {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d x0 = _mm256_loadu_pd(a + i);
    const __m256d x1 = _mm256_loadu_pd(a + i + 4);
    acc0 = _mm256_fmadd_pd(x0, x0, acc0);
    acc1 = _mm256_fmadd_pd(x1, x1, acc1);
  }
  for (; i + 4 <= n; i += 4) {
    const __m256d x0 = _mm256_loadu_pd(a + i);
    acc0 = _mm256_fmadd_pd(x0, x0, acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * a[i];
  return acc;
}

SPECREV_AVX2 double centered_dot(const double* a, const double* b, std::size_t n, double mean_a,
                                 double mean_b) noexcept {
  const __m256d ma = _mm256_set1_pd(mean_a);
  const __m256d mb = _mm256_set1_pd(mean_b);
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_sub_pd(_mm256_loadu_pd(a + i), ma),
                           _mm256_sub_pd(_mm256_loadu_pd(b + i), mb), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_sub_pd(_mm256_loadu_pd(a + i + 4), ma),
                           _mm256_sub_pd(_mm256_loadu_pd(b + i + 4), mb), acc1);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_sub_pd(_mm256_loadu_pd(a + i), ma),
                           _mm256_sub_pd(_mm256_loadu_pd(b + i), mb), acc0);
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += (a[i] - mean_a) * (b[i] - mean_b);
  return acc;
}

SPECREV_AVX2 void axpy(double alpha, const double* x, double* y, std::size_t n) noexcept {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

SPECREV_AVX2 void shift_scale(double* x, std::size_t n, double shift, double scale) noexcept {
  const __m256d vs = _mm256_set1_pd(shift);
  const __m256d vk = _mm256_set1_pd(scale);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(x + i, _mm256_mul_pd(_mm256_sub_pd(_mm256_loadu_pd(x + i), vs), vk));
  for (; i < n; ++i) x[i] = (x[i] - shift) * scale;
}

#undef SPECREV_AVX2

#else  // no x86: the avx2 entry points alias the scalar reference

double dot(const double* a, const double* b, std::size_t n) noexcept {
  return scalar::dot(a, b, n);
}
double sum(const double* a, std::size_t n) noexcept { return scalar::sum(a, n); }
double sum_squares(const double* a, std::size_t n) noexcept { return scalar::sum_squares(a, n); }
double centered_dot(const double* a, const double* b, std::size_t n, double mean_a,
                    double mean_b) noexcept {
  return scalar::centered_dot(a, b, n, mean_a, mean_b);
}
void axpy(double alpha, const double* x, double* y, std::size_t n) noexcept {
  scalar::axpy(alpha, x, y, n);
}
void shift_scale(double* x, std::size_t n, double shift, double scale) noexcept {
  scalar::shift_scale(x, n, shift, scale);
}

#endif

}  // namespace specrev::kernels::avx2
