#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "goat/graph.hpp"
#include "goat/random.hpp"

namespace goat {

/// Fixed-length neighborhood of `owner`. Real neighbors occupy the first
/// `valid` slots (distinct, without replacement); the remaining slots hold
/// the padding sentinel (graph.padding_id()).
struct NeighborhoodSample {
  NodeId owner = 0;
  std::vector<NodeId> ids;
  std::size_t valid = 0;

  std::size_t size() const noexcept { return ids.size(); }
  bool is_real(std::size_t slot) const noexcept { return slot < valid; }
  std::span<const NodeId> real_ids() const noexcept { return {ids.data(), valid}; }
  std::vector<bool> mask() const;
};

/// Draws min(D(u), size) distinct neighbors of u. When D(u) <= size the
/// whole neighborhood is returned in adjacency order and `rng` is untouched.
/// Throws ValidationError for isolated nodes or size == 0.
NeighborhoodSample sample_neighborhood(const Graph& g, NodeId u, std::size_t size, Rng& rng);
void sample_neighborhood(const Graph& g, NodeId u, std::size_t size, Rng& rng,
                         NeighborhoodSample& out);

/// Negative-node distribution p(u) proportional to D(u)^0.75, drawn in O(1)
/// with Walker's alias method. Immutable once built.
class NegativeSampler {
 public:
  static constexpr double kExponent = 0.75;

  explicit NegativeSampler(const Graph& g);

  NodeId operator()(Rng& rng) const;

  std::span<const double> probabilities() const noexcept { return probability_; }
  std::size_t size() const noexcept { return probability_.size(); }

 private:
  std::vector<double> probability_;
  std::vector<double> threshold_;
  std::vector<NodeId> alias_;
};

}  // namespace goat
