#include <doctest.h>

#include <cmath>

#include "goat/error.hpp"
#include "goat/eval.hpp"
#include "goat/train.hpp"
#include "toy_graphs.hpp"

using namespace goat;

namespace {

TrainConfig toy_config() {
  TrainConfig cfg;
  cfg.dim = 16;
  cfg.neighborhood = 3;
  cfg.learning_rate = 0.01;
  cfg.dropout = 0.0;
  cfg.negatives = 5;
  cfg.epochs = 200;
  cfg.seed = 7;
  return cfg;
}

}  // namespace

// Two triangles, 200 epochs: mean epoch loss strictly decreasing over the
// first 10 epochs and the last epoch below half the first.
static void check_two_triangle_descent(Variant variant) {
  const Graph g = testing::two_triangles();
  const NegativeSampler sampler(g);
  TrainConfig cfg = toy_config();
  cfg.dim = 8;
  cfg.learning_rate = 0.002;
  cfg.negatives = 50;
  cfg.variant = variant;
  const TrainResult r = train(g, cfg, sampler);
  REQUIRE(r.epoch_loss.size() == 200);
  for (std::size_t i = 1; i < 10; ++i) {
    CAPTURE(i);
    CHECK(r.epoch_loss[i] < r.epoch_loss[i - 1]);
  }
  CHECK(r.epoch_loss.back() < r.epoch_loss.front() / 2);
  CHECK(r.embedding.padding_is_zero());
}

TEST_CASE("two triangles: global variant loss falls steadily and halves") {
  check_two_triangle_descent(Variant::global);
}

TEST_CASE("two triangles: attention variant loss falls steadily and halves") {
  check_two_triangle_descent(Variant::goat);
}

TEST_CASE("plain SGD also reduces the loss") {
  const Graph g = testing::two_triangles();
  const NegativeSampler sampler(g);
  TrainConfig cfg = toy_config();
  cfg.optimizer = OptimizerKind::sgd;
  cfg.learning_rate = 0.05;
  const TrainResult r = train(g, cfg, sampler);
  CHECK(r.epoch_loss.back() < r.epoch_loss.front());
}

TEST_CASE("same seed, single worker: bit-identical embeddings") {
  Rng rng(3);
  const Graph g = testing::random_connected(40, 60, rng);
  const NegativeSampler sampler(g);
  TrainConfig cfg = toy_config();
  cfg.epochs = 5;
  cfg.dropout = 0.3;
  const TrainResult a = train(g, cfg, sampler), b = train(g, cfg, sampler);
  CHECK(a.embedding == b.embedding);
  CHECK(a.epoch_loss == b.epoch_loss);
  cfg.seed = 8;
  CHECK_FALSE(train(g, cfg, sampler).embedding == a.embedding);
}

TEST_CASE("sync mode with several workers is deterministic") {
  Rng rng(4);
  const Graph g = testing::random_connected(60, 120, rng);
  const NegativeSampler sampler(g);
  TrainConfig cfg = toy_config();
  cfg.epochs = 3;
  cfg.workers = 4;
  cfg.batch_per_worker = 2;
  const TrainResult a = train(g, cfg, sampler), b = train(g, cfg, sampler);
  CHECK(a.embedding == b.embedding);
  CHECK(a.embedding.all_finite());
}

TEST_CASE("async mode trains to finite values") {
  Rng rng(5);
  const Graph g = testing::random_connected(60, 120, rng);
  const NegativeSampler sampler(g);
  TrainConfig cfg = toy_config();
  cfg.epochs = 3;
  cfg.workers = 4;
  cfg.mode = ParallelMode::async;
  const TrainResult r = train(g, cfg, sampler);
  CHECK(r.embedding.all_finite());
  CHECK(r.embedding.padding_is_zero());
  for (double l : r.epoch_loss) CHECK(std::isfinite(l));
}

TEST_CASE("fixed neighborhoods and the global variant train") {
  Rng rng(6);
  const Graph g = testing::random_connected(30, 40, rng);
  const NegativeSampler sampler(g);
  TrainConfig cfg = toy_config();
  cfg.epochs = 20;
  for (bool resample : {false, true})
    for (Variant v : {Variant::goat, Variant::global}) {
      cfg.resample_neighborhoods = resample;
      cfg.variant = v;
      const TrainResult r = train(g, cfg, sampler);
      CHECK(r.epoch_loss.back() < r.epoch_loss.front());
    }
}

TEST_CASE("memorised edges outscore non-edges") {
  const Graph g = testing::barbell(6);
  const NegativeSampler sampler(g);
  TrainConfig cfg = toy_config();
  cfg.neighborhood = 6;
  const TrainResult r = train(g, cfg, sampler);
  Rng rng(1);
  RankedScores scores;
  for (const Edge& e : g.edges())
    scores.pos.push_back(score_pair(r.embedding, g, e.source, e.target, 6, 1, rng));
  for (NodeId u = 0; u < 12; ++u)
    for (NodeId v = u + 1; v < 12; ++v)
      if (!g.adjacent(u, v)) scores.neg.push_back(score_pair(r.embedding, g, u, v, 6, 1, rng));
  CHECK(auc(scores) >= 0.99);
}

TEST_CASE("sharing every neighbor scores above a cross-clique pair") {
  const Graph g = testing::barbell(5);
  const NegativeSampler sampler(g);
  TrainConfig cfg = toy_config();
  cfg.neighborhood = 5;
  const TrainResult r = train(g, cfg, sampler);
  Rng rng(2);
  // 0 and 1 share the rest of their clique; 0 and 7 sit in different cliques.
  CHECK(score_pair(r.embedding, g, 0, 1, 5, 1, rng) > score_pair(r.embedding, g, 0, 7, 5, 1, rng));
}

TEST_CASE("early stopping keeps the best validation epoch") {
  Rng rng(7);
  const Graph g = testing::random_connected(50, 100, rng);
  const NegativeSampler sampler(g);
  TrainConfig cfg = toy_config();
  cfg.epochs = 40;
  cfg.patience = 3;
  const TrainResult r = train(g, cfg, sampler);
  REQUIRE_FALSE(r.validation_auc.empty());
  CHECK(r.validation_auc.size() == r.epoch_loss.size());
  CHECK(r.validation_auc.size() <= 40);
  const auto best = std::max_element(r.validation_auc.begin(), r.validation_auc.end());
  CHECK(r.best_epoch == static_cast<std::size_t>(best - r.validation_auc.begin()));
  // Training stops `patience` epochs after the best one, unless it ran out.
  if (r.validation_auc.size() < 40) CHECK(r.validation_auc.size() == r.best_epoch + 1 + 3);
}

TEST_CASE("invalid configurations are rejected") {
  const Graph g = testing::two_triangles();
  const NegativeSampler sampler(g);
  auto bad = [&](auto mutate) {
    TrainConfig cfg = toy_config();
    mutate(cfg);
    CHECK_THROWS_AS(train(g, cfg, sampler), ValidationError);
  };
  bad([](TrainConfig& c) { c.dim = 0; });
  bad([](TrainConfig& c) { c.neighborhood = 0; });
  bad([](TrainConfig& c) { c.learning_rate = 0; });
  bad([](TrainConfig& c) { c.dropout = 1.0; });
  bad([](TrainConfig& c) { c.negatives = 0; });
  bad([](TrainConfig& c) { c.workers = 0; });
  bad([](TrainConfig& c) {
    c.patience = 3;
    c.validation_fraction = 1.0;
  });
  const Graph empty(3, {}, false);
  CHECK_THROWS_AS(train(empty, toy_config(), sampler), ValidationError);
}

TEST_CASE("canonical config text is stable and complete") {
  TrainConfig a = toy_config(), b = toy_config();
  CHECK(a.canonical() == b.canonical());
  b.dropout = 0.25;
  CHECK(a.canonical() != b.canonical());
  CHECK(a.canonical().find("dim=16") != std::string::npos);
}
