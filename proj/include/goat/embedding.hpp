#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "goat/graph.hpp"
#include "goat/random.hpp"

namespace goat {

/// Global (context-free) node embeddings: one d-dimensional row per node
/// plus a trailing padding row that stays identically zero.
class Embedding {
 public:
  Embedding() = default;
  Embedding(std::size_t num_nodes, std::size_t dim);

  std::size_t num_nodes() const noexcept { return n_; }
  std::size_t dim() const noexcept { return d_; }
  NodeId padding_id() const noexcept { return static_cast<NodeId>(n_); }

  std::span<double> row(NodeId v) noexcept { return {data_.data() + std::size_t{v} * d_, d_}; }
  std::span<const double> row(NodeId v) const noexcept {
    return {data_.data() + std::size_t{v} * d_, d_};
  }

  // All (n + 1) * d entries, row-major.
  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }

  bool all_finite() const noexcept;
  bool padding_is_zero() const noexcept;

  friend bool operator==(const Embedding&, const Embedding&) = default;

 private:
  std::size_t n_ = 0;
  std::size_t d_ = 0;
  std::vector<double> data_;
};

/// Entries i.i.d. uniform in [-0.5/d, 0.5/d]; padding row zero.
Embedding init_embedding(std::size_t num_nodes, std::size_t dim, Rng& rng);

}  // namespace goat
