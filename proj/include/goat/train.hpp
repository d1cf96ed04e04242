#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "goat/embedding.hpp"
#include "goat/graph.hpp"
#include "goat/model.hpp"
#include "goat/sampling.hpp"

namespace goat {

enum class ParallelMode { sync, async };
enum class OptimizerKind { sgd, adam };

std::string_view to_string(ParallelMode m);
std::string_view to_string(OptimizerKind o);
std::optional<ParallelMode> parse_parallel_mode(std::string_view text);
std::optional<OptimizerKind> parse_optimizer(std::string_view text);

struct TrainConfig {
  std::size_t dim = 200;
  std::size_t neighborhood = 100;
  double learning_rate = 1e-4;
  double dropout = 0.5;
  std::size_t negatives = 5;
  std::size_t epochs = 10;
  std::uint64_t seed = 1;
  Variant variant = Variant::goat;
  NegativeRepr negative_repr = NegativeRepr::context;
  OptimizerKind optimizer = OptimizerKind::adam;
  /// Draw neighborhoods again for every edge visit; otherwise once per node.
  bool resample_neighborhoods = true;

  std::size_t workers = 1;
  ParallelMode mode = ParallelMode::sync;
  /// Edges per worker between synchronisation barriers in sync mode.
  std::size_t batch_per_worker = 1;

  /// Early stopping on validation AUC; 0 disables it.
  std::size_t patience = 0;
  double validation_fraction = 0.2;

  /// Throws ValidationError on out-of-range values.
  void validate() const;
  /// Canonical "key=value" lines, used for digests and config sidecars.
  std::string canonical() const;
};

struct TrainResult {
  Embedding embedding;
  std::vector<double> epoch_loss;
  /// Per-epoch validation AUC when early stopping is active.
  std::vector<double> validation_auc;
  std::size_t best_epoch = 0;
};

struct TrainHooks {
  /// Called after every epoch with (epoch, mean loss).
  std::function<void(std::size_t, double)> on_epoch;
};

/// SGD/Adam over shuffled training arcs (both orientations for undirected
/// graphs). Sync mode is deterministic for a given seed and worker count:
/// workers compute gradients against a frozen snapshot and updates are
/// applied in a fixed order at a barrier. With one worker and a batch of one
/// this is plain sequential SGD. Throws TrainingError on a non-finite loss.
TrainResult train(const Graph& g, const TrainConfig& cfg, const NegativeSampler& sampler,
                  const TrainHooks& hooks = {});

/// Row-wise parameter update. Adam keeps lazy per-row moments and step
/// counts (as running powers of beta), so rows absent from a gradient are
/// left untouched. The padding row is never updated.
class Optimizer {
 public:
  Optimizer(OptimizerKind kind, double learning_rate, std::size_t num_rows, std::size_t dim);
  void apply(Embedding& e, const SparseGradient& grad);

 private:
  OptimizerKind kind_;
  double lr_;
  std::size_t dim_;
  std::vector<double> first_, second_;
  std::vector<double> beta1_pow_, beta2_pow_;  // beta^t per row
};

/// Epoch-level driver behind train(); also used directly by the scaling
/// benchmark.
class Trainer {
 public:
  Trainer(const Graph& g, const TrainConfig& cfg, const NegativeSampler& sampler,
          Embedding initial);

  /// One pass over all training arcs; returns the mean arc loss.
  double run_epoch(std::size_t epoch);

  const Embedding& embedding() const noexcept { return embedding_; }
  Embedding release() { return std::move(embedding_); }
  std::size_t num_arcs() const noexcept { return arcs_.size(); }

 private:
  double run_sync(std::size_t epoch);
  double run_async(std::size_t epoch);
  ObjectiveOptions objective_options() const;

  const Graph& graph_;
  TrainConfig cfg_;
  const NegativeSampler& sampler_;
  Embedding embedding_;
  Optimizer optimizer_;
  std::vector<Edge> arcs_;
  std::vector<NeighborhoodSample> fixed_;
};

}  // namespace goat
