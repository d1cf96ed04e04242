#include <immintrin.h>

#include <cmath>

#include "goat/kernels.hpp"

namespace goat::simd {
namespace avx2 {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d shuf = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

double dot(const double* a, const double* b, std::size_t n) {
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

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void mul(const double* x, const double* m, double* y, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(m + i)));
  for (; i < n; ++i) y[i] = x[i] * m[i];
}

double sqdist(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d diff = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_fmadd_pd(diff, diff, acc);
  }
  double total = hsum(acc);
  for (; i < n; ++i) {
    const double diff = a[i] - b[i];
    total += diff * diff;
  }
  return total;
}

// Four rows at a time so each load of `a` feeds four accumulators.
void dot_rows(const double* a, const double* rows, std::size_t stride, std::size_t count,
              std::size_t n, double* out) {
  std::size_t j = 0;
  for (; j + 4 <= count; j += 4) {
    const double* r0 = rows + j * stride;
    const double* r1 = r0 + stride;
    const double* r2 = r1 + stride;
    const double* r3 = r2 + stride;
    __m256d c0 = _mm256_setzero_pd(), c1 = _mm256_setzero_pd();
    __m256d c2 = _mm256_setzero_pd(), c3 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
      const __m256d va = _mm256_loadu_pd(a + i);
      c0 = _mm256_fmadd_pd(va, _mm256_loadu_pd(r0 + i), c0);
      c1 = _mm256_fmadd_pd(va, _mm256_loadu_pd(r1 + i), c1);
      c2 = _mm256_fmadd_pd(va, _mm256_loadu_pd(r2 + i), c2);
      c3 = _mm256_fmadd_pd(va, _mm256_loadu_pd(r3 + i), c3);
    }
    double s0 = hsum(c0), s1 = hsum(c1), s2 = hsum(c2), s3 = hsum(c3);
    for (; i < n; ++i) {
      s0 += a[i] * r0[i];
      s1 += a[i] * r1[i];
      s2 += a[i] * r2[i];
      s3 += a[i] * r3[i];
    }
    out[j] = s0;
    out[j + 1] = s1;
    out[j + 2] = s2;
    out[j + 3] = s3;
  }
  for (; j < count; ++j) out[j] = dot(a, rows + j * stride, n);
}

void adam_step(double* w, double* m, double* v, const double* g, std::size_t n, double lr_hat,
               double v_scale, double beta1, double beta2, double eps) {
  const __m256d b1 = _mm256_set1_pd(beta1), b1c = _mm256_set1_pd(1.0 - beta1);
  const __m256d b2 = _mm256_set1_pd(beta2), b2c = _mm256_set1_pd(1.0 - beta2);
  const __m256d lr = _mm256_set1_pd(lr_hat), vs = _mm256_set1_pd(v_scale);
  const __m256d ve = _mm256_set1_pd(eps);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vg = _mm256_loadu_pd(g + i);
    __m256d vm = _mm256_mul_pd(b1, _mm256_loadu_pd(m + i));
    vm = _mm256_fmadd_pd(b1c, vg, vm);
    __m256d vv = _mm256_mul_pd(b2, _mm256_loadu_pd(v + i));
    vv = _mm256_fmadd_pd(_mm256_mul_pd(b2c, vg), vg, vv);
    const __m256d denom = _mm256_add_pd(_mm256_sqrt_pd(_mm256_mul_pd(vv, vs)), ve);
    const __m256d step = _mm256_div_pd(_mm256_mul_pd(lr, vm), denom);
    _mm256_storeu_pd(m + i, vm);
    _mm256_storeu_pd(v + i, vv);
    _mm256_storeu_pd(w + i, _mm256_sub_pd(_mm256_loadu_pd(w + i), step));
  }
  for (; i < n; ++i) {
    m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
    v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
    w[i] -= lr_hat * m[i] / (std::sqrt(v[i] * v_scale) + eps);
  }
}

}  // namespace
}  // namespace avx2

const KernelTable* avx2_kernels_compiled() {
  static const KernelTable table{Isa::avx2,   avx2::dot,      avx2::axpy,     avx2::mul,
                                 avx2::sqdist, avx2::dot_rows, avx2::adam_step};
  return &table;
}

}  // namespace goat::simd
