#include "goat/graph.hpp"

#include <algorithm>
#include <cmath>

#include "goat/error.hpp"

namespace goat {

Graph::Graph(std::size_t n, std::vector<Edge> edges, bool directed,
             std::vector<std::string> labels)
    : n_(n), directed_(directed), labels_(std::move(labels)) {
  if (n_ >= static_cast<std::size_t>(UINT32_MAX))
    throw ValidationError("graph too large: " + std::to_string(n_) + " nodes");
  if (!labels_.empty() && labels_.size() != n_)
    throw ValidationError("label count " + std::to_string(labels_.size()) +
                          " does not match node count " + std::to_string(n_));

  for (Edge& e : edges) {
    if (e.source >= n_ || e.target >= n_)
      throw ValidationError("edge (" + std::to_string(e.source) + ", " +
                            std::to_string(e.target) + ") references a node outside [0, " +
                            std::to_string(n_) + ")");
    if (e.source == e.target)
      throw ValidationError("self-loop on node " + std::to_string(e.source));
    if (!(e.weight > 0.0) || !std::isfinite(e.weight))
      throw ValidationError("edge weight must be positive and finite");
    if (!directed_ && e.source > e.target) std::swap(e.source, e.target);
  }

  std::stable_sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.source != b.source ? a.source < b.source : a.target < b.target;
  });
  for (const Edge& e : edges) {
    if (!edges_.empty() && edges_.back().source == e.source && edges_.back().target == e.target)
      edges_.back().weight += e.weight;
    else
      edges_.push_back(e);
  }

  // Undirected adjacency in CSR form.
  std::vector<std::vector<Neighbor>> lists(n_);
  for (const Edge& e : edges_) {
    lists[e.source].push_back({e.target, e.weight});
    lists[e.target].push_back({e.source, e.weight});
  }
  offsets_.assign(n_ + 1, 0);
  for (std::size_t v = 0; v < n_; ++v) {
    auto& list = lists[v];
    std::sort(list.begin(), list.end(),
              [](const Neighbor& a, const Neighbor& b) { return a.id < b.id; });
    // Reciprocal directed edges become one neighbor.
    std::size_t out = 0;
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (out > 0 && list[out - 1].id == list[i].id)
        list[out - 1].weight += list[i].weight;
      else
        list[out++] = list[i];
    }
    list.resize(out);
    offsets_[v + 1] = offsets_[v] + out;
  }
  adjacency_.reserve(offsets_[n_]);
  for (auto& list : lists) adjacency_.insert(adjacency_.end(), list.begin(), list.end());

  if (labels_.empty()) {
    labels_.reserve(n_);
    for (std::size_t v = 0; v < n_; ++v) labels_.push_back(std::to_string(v));
  }
  index_.reserve(n_);
  for (std::size_t v = 0; v < n_; ++v) {
    if (!index_.emplace(labels_[v], static_cast<NodeId>(v)).second)
      throw ValidationError("duplicate node label '" + labels_[v] + "'");
  }
}

bool Graph::adjacent(NodeId u, NodeId v) const noexcept {
  if (u >= n_ || v >= n_) return false;
  auto list = neighbors(u);
  auto it = std::lower_bound(list.begin(), list.end(), v,
                             [](const Neighbor& a, NodeId id) { return a.id < id; });
  return it != list.end() && it->id == v;
}

std::optional<NodeId> Graph::find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<Edge> training_arcs(const Graph& g) {
  std::vector<Edge> arcs;
  arcs.reserve(g.directed() ? g.num_edges() : 2 * g.num_edges());
  for (const Edge& e : g.edges()) {
    arcs.push_back(e);
    if (!g.directed()) arcs.push_back({e.target, e.source, e.weight});
  }
  return arcs;
}

}  // namespace goat
