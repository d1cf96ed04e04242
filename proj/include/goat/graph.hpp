#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace goat {

using NodeId = std::uint32_t;

struct Edge {
  NodeId source;
  NodeId target;
  double weight = 1.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct NodePair {
  NodeId source;
  NodeId target;

  friend bool operator==(const NodePair&, const NodePair&) = default;
};

struct Neighbor {
  NodeId id;
  double weight;
};

/// Immutable weighted graph.
///
/// Edges keep their orientation for directed graphs; for undirected graphs
/// they are canonicalised to source < target. Duplicate edges collapse into
/// one with summed weight. The adjacency used for neighborhoods and degrees
/// ignores orientation: D(v) is the number of distinct nodes connected to v
/// in either direction.
class Graph {
 public:
  Graph() = default;

  /// Throws ValidationError on out-of-range ids, self-loops or non-positive
  /// weights. `labels` is either empty or has exactly `n` entries.
  Graph(std::size_t n, std::vector<Edge> edges, bool directed,
        std::vector<std::string> labels = {});

  std::size_t num_nodes() const noexcept { return n_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  bool directed() const noexcept { return directed_; }

  std::span<const Edge> edges() const noexcept { return edges_; }

  /// Undirected neighbors of v, sorted by id. Weights of the two
  /// orientations are summed for directed graphs.
  std::span<const Neighbor> neighbors(NodeId v) const noexcept {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }

  std::size_t degree(NodeId v) const noexcept { return offsets_[v + 1] - offsets_[v]; }

  bool adjacent(NodeId u, NodeId v) const noexcept;

  /// Original token of a node (its index as text when none was given).
  const std::string& label(NodeId v) const { return labels_[v]; }
  std::span<const std::string> labels() const noexcept { return labels_; }
  std::optional<NodeId> find(std::string_view token) const;

  /// Padding sentinel used by neighborhood samples: one past the last node.
  NodeId padding_id() const noexcept { return static_cast<NodeId>(n_); }

 private:
  std::size_t n_ = 0;
  bool directed_ = false;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Neighbor> adjacency_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeId> index_;
};

/// Training arcs: the edges as given for directed graphs, both orientations
/// for undirected ones.
std::vector<Edge> training_arcs(const Graph& g);

}  // namespace goat
