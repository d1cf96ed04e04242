#include "goat/train.hpp"

#include <algorithm>
#include <atomic>
#include <barrier>
#include <cmath>
#include <mutex>
#include <sstream>
#include <thread>

#include "goat/error.hpp"
#include "goat/kernels.hpp"
#include "goat/metrics.hpp"
#include "goat/split.hpp"

namespace goat {

std::string_view to_string(ParallelMode m) { return m == ParallelMode::sync ? "sync" : "async"; }
std::string_view to_string(OptimizerKind o) { return o == OptimizerKind::sgd ? "sgd" : "adam"; }

std::optional<ParallelMode> parse_parallel_mode(std::string_view text) {
  if (text == "sync") return ParallelMode::sync;
  if (text == "async") return ParallelMode::async;
  return std::nullopt;
}

std::optional<OptimizerKind> parse_optimizer(std::string_view text) {
  if (text == "sgd") return OptimizerKind::sgd;
  if (text == "adam") return OptimizerKind::adam;
  return std::nullopt;
}

void TrainConfig::validate() const {
  if (dim < 1) throw ValidationError("dim must be >= 1");
  if (neighborhood < 1) throw ValidationError("neighborhood must be >= 1");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate))
    throw ValidationError("learning rate must be > 0");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw ValidationError("dropout must lie in [0, 1)");
  if (negatives < 1) throw ValidationError("negatives must be >= 1");
  if (workers < 1) throw ValidationError("workers must be >= 1");
  if (batch_per_worker < 1) throw ValidationError("batch_per_worker must be >= 1");
  if (patience > 0 && !(validation_fraction > 0.0 && validation_fraction < 1.0))
    throw ValidationError("validation fraction must lie in (0, 1)");
}

std::string TrainConfig::canonical() const {
  std::ostringstream out;
  out.precision(17);
  out << "dim=" << dim << '\n'
      << "neighborhood=" << neighborhood << '\n'
      << "lr=" << learning_rate << '\n'
      << "dropout=" << dropout << '\n'
      << "negatives=" << negatives << '\n'
      << "epochs=" << epochs << '\n'
      << "seed=" << seed << '\n'
      << "variant=" << to_string(variant) << '\n'
      << "negative-repr=" << to_string(negative_repr) << '\n'
      << "optimizer=" << to_string(optimizer) << '\n'
      << "resample=" << (resample_neighborhoods ? "true" : "false") << '\n'
      << "workers=" << workers << '\n'
      << "mode=" << to_string(mode) << '\n'
      << "batch-per-worker=" << batch_per_worker << '\n'
      << "patience=" << patience << '\n'
      << "validation-fraction=" << validation_fraction << '\n';
  return out.str();
}

Optimizer::Optimizer(OptimizerKind kind, double learning_rate, std::size_t num_rows,
                     std::size_t dim)
    : kind_(kind), lr_(learning_rate), dim_(dim) {
  if (kind_ == OptimizerKind::adam) {
    first_.assign(num_rows * dim, 0.0);
    second_.assign(num_rows * dim, 0.0);
    beta1_pow_.assign(num_rows, 1.0);
    beta2_pow_.assign(num_rows, 1.0);
  }
}

void Optimizer::apply(Embedding& e, const SparseGradient& grad) {
  constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;
  const auto rows = grad.rows();
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const NodeId row = rows[k];
    if (row == e.padding_id()) continue;
    const auto g = grad.values(k);
    auto w = e.row(row);
    if (kind_ == OptimizerKind::sgd) {
      simd::active().axpy(-lr_, g.data(), w.data(), dim_);
      continue;
    }
    // Bias corrections 1 - beta^t, with t the row's own step count.
    const double c1 = 1.0 - (beta1_pow_[row] *= kBeta1);
    const double c2 = 1.0 - (beta2_pow_[row] *= kBeta2);
    simd::active().adam_step(w.data(), first_.data() + std::size_t{row} * dim_,
                             second_.data() + std::size_t{row} * dim_, g.data(), dim_, lr_ / c1,
                             1.0 / c2, kBeta1, kBeta2, kEps);
  }
}

Trainer::Trainer(const Graph& g, const TrainConfig& cfg, const NegativeSampler& sampler,
                 Embedding initial)
    : graph_(g),
      cfg_(cfg),
      sampler_(sampler),
      embedding_(std::move(initial)),
      optimizer_(cfg.optimizer, cfg.learning_rate, g.num_nodes() + 1, cfg.dim),
      arcs_(training_arcs(g)) {
  cfg_.validate();
  if (embedding_.num_nodes() != g.num_nodes() || embedding_.dim() != cfg.dim)
    throw ValidationError("embedding shape does not match graph and config");
  if (sampler_.size() != g.num_nodes())
    throw ValidationError("negative sampler was built for a different graph");
  if (!cfg_.resample_neighborhoods && cfg_.variant == Variant::goat) {
    fixed_.resize(g.num_nodes());
    for (std::size_t v = 0; v < g.num_nodes(); ++v) {
      const auto node = static_cast<NodeId>(v);
      if (g.degree(node) == 0) continue;
      Rng rng = make_rng(cfg_.seed, Stream::edge, UINT64_MAX, v);
      sample_neighborhood(g, node, cfg_.neighborhood, rng, fixed_[v]);
    }
  }
}

ObjectiveOptions Trainer::objective_options() const {
  ObjectiveOptions opts;
  opts.neighborhood = cfg_.neighborhood;
  opts.dropout = cfg_.dropout;
  opts.negatives = cfg_.negatives;
  opts.variant = cfg_.variant;
  opts.negative_repr = cfg_.negative_repr;
  opts.training = true;
  opts.fixed_neighborhoods = fixed_.empty() ? nullptr : &fixed_;
  return opts;
}

double Trainer::run_epoch(std::size_t epoch) {
  if (arcs_.empty()) return 0.0;
  Rng shuffle_rng = make_rng(cfg_.seed, Stream::shuffle, epoch);
  std::shuffle(arcs_.begin(), arcs_.end(), shuffle_rng);
  return cfg_.mode == ParallelMode::sync ? run_sync(epoch) : run_async(epoch);
}

namespace {

[[noreturn]] void non_finite(std::size_t epoch, const Edge& arc) {
  throw TrainingError("non-finite loss at epoch " + std::to_string(epoch) + ", edge (" +
                      std::to_string(arc.source) + ", " + std::to_string(arc.target) + ")");
}

}  // namespace

double Trainer::run_sync(std::size_t epoch) {
  const ObjectiveOptions opts = objective_options();
  const std::size_t workers = cfg_.workers;
  const std::size_t batch = cfg_.batch_per_worker;
  const std::size_t chunk = workers * batch;
  const std::size_t total = arcs_.size();

  std::vector<SparseGradient> grads;
  std::vector<EdgeWorkspace> spaces(workers);
  std::vector<double> losses(workers, 0.0);
  std::vector<std::size_t> failed(workers, SIZE_MAX);
  for (std::size_t w = 0; w < workers; ++w) grads.emplace_back(graph_.num_nodes() + 1, cfg_.dim);

  auto compute = [&](std::size_t worker, std::size_t start) {
    grads[worker].clear();
    const std::size_t begin = std::min(total, start + worker * batch);
    const std::size_t end = std::min(total, begin + batch);
    for (std::size_t idx = begin; idx < end; ++idx) {
      Rng rng = make_rng(cfg_.seed, Stream::edge, epoch, idx);
      const double loss = edge_objective(embedding_, graph_, arcs_[idx], opts, sampler_, rng,
                                         spaces[worker], &grads[worker]);
      if (!std::isfinite(loss)) {
        failed[worker] = std::min(failed[worker], idx);
        return;
      }
      losses[worker] += loss;
    }
  };
  auto apply_all = [&]() noexcept {
    for (auto& g : grads) optimizer_.apply(embedding_, g);
  };
  auto first_failure = [&]() {
    return *std::min_element(failed.begin(), failed.end());
  };

  if (workers == 1) {
    for (std::size_t start = 0; start < total; start += chunk) {
      compute(0, start);
      if (failed[0] != SIZE_MAX) non_finite(epoch, arcs_[failed[0]]);
      apply_all();
    }
  } else {
    std::atomic<bool> stop{false};
    std::barrier sync(static_cast<std::ptrdiff_t>(workers), [&]() noexcept {
      if (*std::min_element(failed.begin(), failed.end()) != SIZE_MAX) {
        stop = true;
        return;
      }
      apply_all();
    });
    auto loop = [&](std::size_t worker) {
      for (std::size_t start = 0; start < total && !stop; start += chunk) {
        compute(worker, start);
        sync.arrive_and_wait();
      }
    };
    {
      std::vector<std::jthread> helpers;
      for (std::size_t w = 1; w < workers; ++w) helpers.emplace_back(loop, w);
      loop(0);
    }
    if (first_failure() != SIZE_MAX) non_finite(epoch, arcs_[first_failure()]);
  }

  double sum = 0.0;
  for (double l : losses) sum += l;
  return sum / static_cast<double>(total);
}

double Trainer::run_async(std::size_t epoch) {
  const ObjectiveOptions opts = objective_options();
  const std::size_t workers = cfg_.workers;
  const std::size_t total = arcs_.size();
  std::vector<double> losses(workers, 0.0);
  std::atomic<std::size_t> failed{SIZE_MAX};

  // Lock-free row updates: workers read and write shared rows without
  // synchronisation, so results depend on scheduling.
  auto loop = [&](std::size_t worker) {
    EdgeWorkspace ws;
    SparseGradient grad(graph_.num_nodes() + 1, cfg_.dim);
    for (std::size_t idx = worker; idx < total && failed == SIZE_MAX; idx += workers) {
      grad.clear();
      Rng rng = make_rng(cfg_.seed, Stream::edge, epoch, idx);
      const double loss =
          edge_objective(embedding_, graph_, arcs_[idx], opts, sampler_, rng, ws, &grad);
      if (!std::isfinite(loss)) {
        failed = idx;
        return;
      }
      losses[worker] += loss;
      optimizer_.apply(embedding_, grad);
    }
  };
  {
    std::vector<std::jthread> helpers;
    for (std::size_t w = 1; w < workers; ++w) helpers.emplace_back(loop, w);
    loop(0);
  }
  if (failed != SIZE_MAX) non_finite(epoch, arcs_[failed]);
  double sum = 0.0;
  for (double l : losses) sum += l;
  return sum / static_cast<double>(total);
}

namespace {

double validation_auc(const Embedding& e, const Graph& fit, const EvalSplit& split,
                      const TrainConfig& cfg) {
  Rng rng = make_rng(cfg.seed, Stream::validation, 1);
  RankedScores scores;
  for (const auto& p : split.test_pos)
    scores.pos.push_back(score_pair(e, fit, p.source, p.target, cfg.neighborhood, 1, rng, cfg.variant));
  for (const auto& p : split.test_neg)
    scores.neg.push_back(score_pair(e, fit, p.source, p.target, cfg.neighborhood, 1, rng, cfg.variant));
  return auc(scores);
}

}  // namespace

TrainResult train(const Graph& g, const TrainConfig& cfg, const NegativeSampler& sampler,
                  const TrainHooks& hooks) {
  cfg.validate();
  if (g.num_edges() == 0) throw ValidationError("cannot train on a graph without edges");
  TrainResult result;
  Rng init_rng = make_rng(cfg.seed, Stream::init);
  Embedding initial = init_embedding(g.num_nodes(), cfg.dim, init_rng);

  const bool early_stopping = cfg.patience > 0 && g.num_edges() >= 2;
  if (!early_stopping) {
    Trainer trainer(g, cfg, sampler, std::move(initial));
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
      const double loss = trainer.run_epoch(epoch);
      result.epoch_loss.push_back(loss);
      if (hooks.on_epoch) hooks.on_epoch(epoch, loss);
    }
    result.best_epoch = cfg.epochs == 0 ? 0 : cfg.epochs - 1;
    result.embedding = trainer.release();
    return result;
  }

  // Hold out part of the training edges; keep the epoch with the best
  // validation AUC and stop after `patience` epochs without improvement.
  Rng split_rng = make_rng(cfg.seed, Stream::validation);
  const EvalSplit holdout = split_edges(g, 1.0 - cfg.validation_fraction, split_rng);
  const Graph fit = holdout.train_graph(g);
  const NegativeSampler fit_sampler(fit);
  Trainer trainer(fit, cfg, fit_sampler, std::move(initial));

  double best = -1.0;
  std::size_t since_best = 0;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    const double loss = trainer.run_epoch(epoch);
    result.epoch_loss.push_back(loss);
    if (hooks.on_epoch) hooks.on_epoch(epoch, loss);
    const double score = validation_auc(trainer.embedding(), fit, holdout, cfg);
    result.validation_auc.push_back(score);
    if (score > best) {
      best = score;
      since_best = 0;
      result.best_epoch = epoch;
      result.embedding = trainer.embedding();
    } else if (++since_best >= cfg.patience) {
      break;
    }
  }
  if (result.embedding.num_nodes() == 0) result.embedding = trainer.release();
  return result;
}

}  // namespace goat
