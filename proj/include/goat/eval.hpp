#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "goat/embedding.hpp"
#include "goat/graph.hpp"
#include "goat/metrics.hpp"
#include "goat/model.hpp"
#include "goat/random.hpp"
#include "goat/split.hpp"

namespace goat {

/// Scores every held-out positive and negative pair with score_pair on the
/// training graph.
RankedScores score_split(const Embedding& e, const Graph& train_graph, const EvalSplit& split,
                         std::size_t neighborhood, std::size_t trials, Variant variant, Rng& rng);

/// Row-major point set for k-Means.
struct PointSet {
  std::size_t count = 0;
  std::size_t dim = 0;
  std::vector<double> values;

  std::span<const double> point(std::size_t i) const { return {values.data() + i * dim, dim}; }
};

enum class FeatureMode { global, averaged_context };
std::string_view to_string(FeatureMode m);
std::optional<FeatureMode> parse_feature_mode(std::string_view text);

/// global: the rows of E. averaged_context: for every node u the mean of
/// r_u over its gossip partners in `g` (one block per neighbor, dropout
/// off); isolated nodes fall back to E_u.
PointSet node_features_for_clustering(const Embedding& e, const Graph& g, FeatureMode mode,
                                      std::size_t neighborhood, Rng& rng);

struct ClusterResult {
  std::vector<int> assignments;
  std::size_t k = 0;
  double inertia = 0.0;
  std::size_t iterations = 0;
  /// Inertia after each Lloyd iteration of the winning restart.
  std::vector<double> inertia_trace;
};

struct KMeansOptions {
  std::size_t k = 2;
  std::size_t restarts = 10;
  std::size_t max_iter = 300;
};

/// Lloyd's algorithm with k-means++ seeding, best of `restarts` by inertia.
/// Throws ValidationError when k == 0 or k > number of points.
ClusterResult kmeans(const PointSet& points, const KMeansOptions& opts, Rng& rng);

struct AttentionEntry {
  NodeId id;
  double weight;
};

struct AttentionRecord {
  NodeId source;
  NodeId target;
  std::vector<AttentionEntry> source_neighbors;
  std::vector<AttentionEntry> target_neighbors;
};

/// Attention each endpoint pays to its sampled neighbors when gossiping
/// with the other, sorted by descending weight. Both endpoints need at
/// least one neighbor in `g`.
AttentionRecord attention_for_pair(const Embedding& e, const Graph& g, NodeId s, NodeId t,
                                   std::size_t neighborhood, Rng& rng);

struct AttentionReport {
  std::vector<AttentionRecord> records;
  std::size_t skipped = 0;
};

/// Pairs with an isolated endpoint are skipped and counted.
AttentionReport export_attention(const Embedding& e, const Graph& g,
                                 std::span<const NodePair> pairs, std::size_t neighborhood,
                                 Rng& rng);

/// JSON array of {source, target, source_neighbors: [{id, weight}],
/// target_neighbors: [...]}, ids written as the graph's original tokens.
std::string attention_to_json(const AttentionReport& report, const Graph& g);

}  // namespace goat
