#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "goat/block.hpp"
#include "goat/embedding.hpp"
#include "goat/graph.hpp"
#include "goat/random.hpp"
#include "goat/sampling.hpp"

namespace goat {

enum class Variant { goat, global };

/// How negatives are represented in the logit r_s . r_k: a full attention
/// block between the source and the negative, or the negative's global row.
enum class NegativeRepr { context, global };

std::string_view to_string(Variant v);
std::string_view to_string(NegativeRepr r);
std::optional<Variant> parse_variant(std::string_view text);
std::optional<NegativeRepr> parse_negative_repr(std::string_view text);

struct ObjectiveOptions {
  std::size_t neighborhood = 100;
  double dropout = 0.0;
  std::size_t negatives = 5;
  Variant variant = Variant::goat;
  NegativeRepr negative_repr = NegativeRepr::context;
  bool training = true;
  /// Per-node samples drawn once and reused; null means draw per call.
  const std::vector<NeighborhoodSample>* fixed_neighborhoods = nullptr;
};

/// Row-sparse gradient over an embedding.
class SparseGradient {
 public:
  SparseGradient() = default;
  SparseGradient(std::size_t num_rows, std::size_t dim);

  void add(NodeId row, std::span<const double> grad);
  void clear();

  std::span<const NodeId> rows() const noexcept { return rows_; }
  std::span<const double> values(std::size_t k) const noexcept {
    return {values_.data() + k * dim_, dim_};
  }
  /// Dense copy of one row's gradient (zeros when untouched).
  std::vector<double> dense_row(NodeId row) const;

 private:
  std::size_t dim_ = 0;
  std::vector<int> slot_;
  std::vector<NodeId> rows_;
  std::vector<double> values_;
};

/// Scratch buffers reused across edges by one worker.
struct EdgeWorkspace {
  NeighborhoodSample source, target;
  std::vector<NeighborhoodSample> negative_samples;
  Message source_msg, target_msg;
  std::vector<Message> negative_msgs;
  std::vector<AttentionBlock> blocks;
  std::vector<NodeId> negatives;
  std::vector<double> logits;
  std::vector<double> grad_rs, grad_other;
};

/// Negative-sampling loss of one training arc; when `grad` is non-null the
/// exact gradient with respect to every referenced row of `e` is added to
/// it. All randomness (neighborhoods, negatives, dropout) comes from `rng`,
/// so the same seed reproduces the same objective.
double edge_objective(const Embedding& e, const Graph& g, const Edge& arc,
                      const ObjectiveOptions& opts, const NegativeSampler& sampler, Rng& rng,
                      EdgeWorkspace& ws, SparseGradient* grad);

/// -w log P(t|s) with the full softmax over every node w of the graph,
/// P(t|s) = exp(r_s . r_t) / sum_w exp(r_s . r_w), where r_s comes from the
/// (s, t) block and r_w from the (s, w) block. Dropout is off. Intended for
/// tiny graphs; candidates without neighbors use their global row.
double exact_softmax_loss(const Embedding& e, const Graph& g, const Edge& edge,
                          std::size_t neighborhood, Variant variant, Rng& rng);

/// Link score: mean over `trials` resampled blocks of r_u . r_v, dropout
/// off. Falls back to E_u . E_v when either node is isolated in `g`, and
/// always for the global variant.
double score_pair(const Embedding& e, const Graph& g, NodeId u, NodeId v, std::size_t neighborhood,
                  std::size_t trials, Rng& rng, Variant variant = Variant::goat);

}  // namespace goat
