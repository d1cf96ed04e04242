#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "goat/graph.hpp"
#include "goat/random.hpp"

namespace goat {

/// Link-prediction holdout. Negatives are drawn uniformly from node pairs
/// that are not connected in either orientation, one per held-out edge.
struct EvalSplit {
  double fraction = 1.0;
  std::vector<Edge> train;
  std::vector<NodePair> test_pos;
  std::vector<NodePair> test_neg;
  /// Nodes with edges in `g` but none left in `train`. Their test pairs are
  /// kept; scoring falls back to the global embedding for them.
  std::vector<NodeId> stranded;

  /// Graph over the same node set holding only the training edges.
  Graph train_graph(const Graph& full) const;
};

/// |train| = round(fraction * m). Throws ValidationError when
/// fraction is outside (0, 1] or fraction * m < 1.
EvalSplit split_edges(const Graph& g, double fraction, Rng& rng);

/// Draws `count` distinct unordered non-adjacent pairs, no self-pairs.
std::vector<NodePair> sample_non_edges(const Graph& g, std::size_t count, Rng& rng);

/// Writes train.tsv, test_pos.tsv and test_neg.tsv under `dir`, each
/// starting with a "# digest=<hex>" line.
void write_split(const std::filesystem::path& dir, const EvalSplit& split, std::uint64_t digest);

struct LoadedSplit {
  EvalSplit split;
  std::uint64_t digest = 0;
};
LoadedSplit read_split(const std::filesystem::path& dir, std::size_t num_nodes);

}  // namespace goat
