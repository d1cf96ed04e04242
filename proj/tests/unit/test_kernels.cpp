#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "goat/kernels.hpp"

using namespace goat::simd;

namespace {

std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

// FMA and lane-wise accumulation reorder the sums, so results agree to a
// few ulps of the magnitude involved rather than bit-for-bit.
void check_close(double a, double b, double scale) {
  CHECK(std::abs(a - b) <= 1e-13 * (1.0 + scale));
}

}  // namespace

TEST_CASE("GOAT_FORCE_SCALAR pins the reference kernels") {
  const char* env = std::getenv("GOAT_FORCE_SCALAR");
  if (env && std::string(env) == "1") {
    CHECK(active().isa == Isa::scalar);
  } else if (avx2_kernels()) {
    CHECK(active().isa == Isa::avx2);
  } else {
    CHECK(active().isa == Isa::scalar);
  }
  CHECK(isa_name(Isa::scalar) == "scalar");
  CHECK(isa_name(Isa::avx2) == "avx2");
}

TEST_CASE("scalar kernels on hand-sized inputs") {
  const KernelTable& k = scalar_kernels();
  const std::vector<double> a{1, 2, 3}, b{4, -5, 6};
  CHECK(k.dot(a.data(), b.data(), 3) == 12.0);
  CHECK(k.sqdist(a.data(), b.data(), 3) == 9.0 + 49.0 + 9.0);
  std::vector<double> y{1, 1, 1};
  k.axpy(2.0, a.data(), y.data(), 3);
  CHECK(y == std::vector<double>{3, 5, 7});
  std::vector<double> z(3);
  k.mul(a.data(), b.data(), z.data(), 3);
  CHECK(z == std::vector<double>{4, -10, 18});
  CHECK(k.dot(a.data(), b.data(), 0) == 0.0);
}

TEST_CASE("scalar adam step matches the textbook update") {
  const KernelTable& k = scalar_kernels();
  std::vector<double> w{0.5}, m{0.0}, v{0.0};
  const std::vector<double> g{0.2};
  // First step: m = 0.1 g, v = 0.001 g^2, corrections 0.1 and 0.001.
  k.adam_step(w.data(), m.data(), v.data(), g.data(), 1, 0.01 / 0.1, 1.0 / 0.001, 0.9, 0.999,
              1e-8);
  CHECK(m[0] == doctest::Approx(0.02));
  CHECK(v[0] == doctest::Approx(0.00004));
  // Bias-corrected step is lr * g / (|g| + eps) = lr.
  CHECK(w[0] == doctest::Approx(0.5 - 0.01).epsilon(1e-9));
}

TEST_CASE("avx2 kernels agree with the scalar reference") {
  const KernelTable* fast = avx2_kernels();
  if (!fast) {
    MESSAGE("AVX2 not available on this CPU; equivalence not exercised");
    return;
  }
  const KernelTable& ref = scalar_kernels();
  std::mt19937_64 rng(7);
  // Lengths cover the empty case, sub-vector tails and multiple unrolls.
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 9u, 15u, 16u, 17u, 31u, 64u, 67u, 200u}) {
    CAPTURE(n);
    const auto a = random_vector(n, rng), b = random_vector(n, rng);
    double scale = 0;
    for (std::size_t i = 0; i < n; ++i) scale += std::abs(a[i] * b[i]);

    check_close(fast->dot(a.data(), b.data(), n), ref.dot(a.data(), b.data(), n), scale);
    check_close(fast->sqdist(a.data(), b.data(), n), ref.sqdist(a.data(), b.data(), n),
                4 * scale + 16.0 * n);

    auto y1 = b, y2 = b;
    fast->axpy(-0.37, a.data(), y1.data(), n);
    ref.axpy(-0.37, a.data(), y2.data(), n);
    for (std::size_t i = 0; i < n; ++i) check_close(y1[i], y2[i], std::abs(y2[i]));

    std::vector<double> z1(n), z2(n);
    fast->mul(a.data(), b.data(), z1.data(), n);
    ref.mul(a.data(), b.data(), z2.data(), n);
    CHECK(z1 == z2);

    for (std::size_t count : {1u, 3u, 4u, 5u, 9u}) {
      const std::size_t stride = n + 2;
      const auto rows = random_vector(count * stride, rng);
      std::vector<double> o1(count), o2(count);
      fast->dot_rows(a.data(), rows.data(), stride, count, n, o1.data());
      ref.dot_rows(a.data(), rows.data(), stride, count, n, o2.data());
      for (std::size_t j = 0; j < count; ++j) check_close(o1[j], o2[j], 4.0 * n);
    }

    auto w1 = a, w2 = a, m1 = b, m2 = b;
    std::vector<double> v1(n), v2(n);
    for (std::size_t i = 0; i < n; ++i) v1[i] = v2[i] = std::abs(b[i]) * 0.1;
    const auto g = random_vector(n, rng);
    fast->adam_step(w1.data(), m1.data(), v1.data(), g.data(), n, 0.01, 2.0, 0.9, 0.999, 1e-8);
    ref.adam_step(w2.data(), m2.data(), v2.data(), g.data(), n, 0.01, 2.0, 0.9, 0.999, 1e-8);
    for (std::size_t i = 0; i < n; ++i) {
      check_close(w1[i], w2[i], std::abs(w2[i]));
      check_close(m1[i], m2[i], std::abs(m2[i]));
      check_close(v1[i], v2[i], std::abs(v2[i]));
    }
  }
}

TEST_CASE("span wrappers route through the active table") {
  const std::vector<double> a{1, 2, 3, 4, 5}, b{5, 4, 3, 2, 1};
  CHECK(dot(a, b) == doctest::Approx(35.0));
  CHECK(sqdist(a, b) == doctest::Approx(40.0));
  std::vector<double> y(5, 0.0);
  axpy(1.0, a, y);
  CHECK(y == a);
}
