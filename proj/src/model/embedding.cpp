#include "goat/embedding.hpp"

#include <algorithm>
#include <cmath>

#include "goat/error.hpp"

namespace goat {

Embedding::Embedding(std::size_t num_nodes, std::size_t dim)
    : n_(num_nodes), d_(dim), data_((num_nodes + 1) * dim, 0.0) {
  if (num_nodes == 0 || dim == 0) throw ValidationError("embedding needs n >= 1 and d >= 1");
}

bool Embedding::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

bool Embedding::padding_is_zero() const noexcept {
  auto pad = row(padding_id());
  return std::all_of(pad.begin(), pad.end(), [](double x) { return x == 0.0; });
}

Embedding init_embedding(std::size_t num_nodes, std::size_t dim, Rng& rng) {
  Embedding e(num_nodes, dim);
  const double bound = 0.5 / static_cast<double>(dim);
  std::uniform_real_distribution<double> uniform(-bound, bound);
  auto values = e.values();
  std::generate(values.begin(), values.end() - static_cast<std::ptrdiff_t>(dim),
                [&] { return uniform(rng); });
  return e;
}

}  // namespace goat
