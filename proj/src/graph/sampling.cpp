#include "goat/sampling.hpp"

#include <algorithm>
#include <cmath>

#include "goat/error.hpp"

namespace goat {

std::vector<bool> NeighborhoodSample::mask() const {
  std::vector<bool> m(ids.size(), false);
  std::fill_n(m.begin(), valid, true);
  return m;
}

void sample_neighborhood(const Graph& g, NodeId u, std::size_t size, Rng& rng,
                         NeighborhoodSample& out) {
  if (size == 0) throw ValidationError("neighborhood size must be at least 1");
  if (u >= g.num_nodes()) throw ValidationError("node " + std::to_string(u) + " out of range");
  const auto neighbors = g.neighbors(u);
  if (neighbors.empty())
    throw ValidationError("node " + g.label(u) + " is isolated and has no neighborhood");

  out.owner = u;
  out.ids.assign(size, g.padding_id());
  if (neighbors.size() <= size) {
    for (std::size_t i = 0; i < neighbors.size(); ++i) out.ids[i] = neighbors[i].id;
    out.valid = neighbors.size();
    return;
  }
  // Partial Fisher-Yates over positions: O(size) draws, no extra allocation
  // beyond the output.
  thread_local std::vector<NodeId> pool;
  pool.resize(neighbors.size());
  for (std::size_t i = 0; i < neighbors.size(); ++i) pool[i] = neighbors[i].id;
  for (std::size_t i = 0; i < size; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
    std::swap(pool[i], pool[pick(rng)]);
    out.ids[i] = pool[i];
  }
  out.valid = size;
}

NeighborhoodSample sample_neighborhood(const Graph& g, NodeId u, std::size_t size, Rng& rng) {
  NeighborhoodSample sample;
  sample_neighborhood(g, u, size, rng, sample);
  return sample;
}

NegativeSampler::NegativeSampler(const Graph& g) {
  if (g.num_edges() == 0) throw ValidationError("negative sampler needs at least one edge");
  const std::size_t n = g.num_nodes();
  probability_.resize(n);
  double total = 0.0;
  for (std::size_t v = 0; v < n; ++v) {
    probability_[v] = std::pow(static_cast<double>(g.degree(static_cast<NodeId>(v))), kExponent);
    total += probability_[v];
  }
  for (double& p : probability_) p /= total;

  // Vose's alias construction.
  threshold_.assign(n, 1.0);
  alias_.resize(n);
  std::vector<double> scaled(n);
  std::vector<NodeId> small, large;
  for (std::size_t v = 0; v < n; ++v) {
    scaled[v] = probability_[v] * static_cast<double>(n);
    alias_[v] = static_cast<NodeId>(v);
    (scaled[v] < 1.0 ? small : large).push_back(static_cast<NodeId>(v));
  }
  while (!small.empty() && !large.empty()) {
    const NodeId s = small.back();
    small.pop_back();
    const NodeId l = large.back();
    threshold_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] -= 1.0 - scaled[s];
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  // Leftovers are 1 up to rounding; a zero-probability bucket must never be
  // returned directly, so route it to its alias.
  for (NodeId v : large) threshold_[v] = 1.0;
  for (NodeId v : small) threshold_[v] = probability_[v] > 0.0 ? 1.0 : 0.0;
  for (std::size_t v = 0; v < n; ++v) {
    if (probability_[v] == 0.0 && alias_[v] == v) {
      // Only reachable through rounding; point it at any positive bucket.
      auto it = std::find_if(probability_.begin(), probability_.end(),
                             [](double p) { return p > 0.0; });
      alias_[v] = static_cast<NodeId>(it - probability_.begin());
      threshold_[v] = 0.0;
    }
  }
}

NodeId NegativeSampler::operator()(Rng& rng) const {
  std::uniform_int_distribution<std::size_t> bucket(0, threshold_.size() - 1);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  const std::size_t b = bucket(rng);
  return coin(rng) < threshold_[b] ? static_cast<NodeId>(b) : alias_[b];
}

}  // namespace goat
