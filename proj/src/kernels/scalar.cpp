#include <cmath>

#include "goat/kernels.hpp"

namespace goat::simd {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void mul_scalar(const double* x, const double* m, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = x[i] * m[i];
}

double sqdist_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double diff = a[i] - b[i];
    acc += diff * diff;
  }
  return acc;
}

void dot_rows_scalar(const double* a, const double* rows, std::size_t stride,
                     std::size_t count, std::size_t n, double* out) {
  for (std::size_t j = 0; j < count; ++j) out[j] = dot_scalar(a, rows + j * stride, n);
}

void adam_step_scalar(double* w, double* m, double* v, const double* g, std::size_t n,
                      double lr_hat, double v_scale, double beta1, double beta2, double eps) {
  for (std::size_t i = 0; i < n; ++i) {
    m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
    v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
    w[i] -= lr_hat * m[i] / (std::sqrt(v[i] * v_scale) + eps);
  }
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{Isa::scalar,   dot_scalar,      axpy_scalar,     mul_scalar,
                                 sqdist_scalar, dot_rows_scalar, adam_step_scalar};
  return table;
}

}  // namespace goat::simd
