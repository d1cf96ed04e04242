#pragma once

// Dense vector kernels used by the attention block, the optimizer and
// k-Means. Every kernel has a portable scalar reference; an AVX2/FMA
// variant is compiled in on x86-64 and picked at runtime when the CPU
// supports it. Set GOAT_FORCE_SCALAR=1 to pin the reference path.

#include <cassert>
#include <cstddef>
#include <span>
#include <string_view>

namespace goat::simd {

enum class Isa { scalar, avx2 };

struct KernelTable {
  Isa isa;
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // y = x * m (elementwise)
  void (*mul)(const double* x, const double* m, double* y, std::size_t n);
  double (*sqdist)(const double* a, const double* b, std::size_t n);
  // out[j] = dot(a, rows[j]) for j < count, rows laid out with `stride`.
  void (*dot_rows)(const double* a, const double* rows, std::size_t stride,
                   std::size_t count, std::size_t n, double* out);
  // One Adam step on w given gradient g and moments m, v. `lr_hat` folds in
  // the first-moment bias correction, `v_scale` is 1 / (1 - beta2^t).
  void (*adam_step)(double* w, double* m, double* v, const double* g, std::size_t n,
                    double lr_hat, double v_scale, double beta1, double beta2, double eps);
};

const KernelTable& scalar_kernels();

// nullptr when the variant was not compiled in or the CPU lacks it.
const KernelTable* avx2_kernels();

// The table selected for this process (resolved once).
const KernelTable& active();

std::string_view isa_name(Isa isa);

inline double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  return active().dot(a.data(), b.data(), a.size());
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  active().axpy(alpha, x.data(), y.data(), x.size());
}

inline double sqdist(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  return active().sqdist(a.data(), b.data(), a.size());
}

}  // namespace goat::simd
