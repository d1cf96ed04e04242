#include <doctest.h>

#include <cmath>
#include <numeric>
#include <set>

#include "goat/model.hpp"
#include "goat/train.hpp"
#include "property_checks.hpp"

using namespace goat;
using goat::testing::check_gradient;
using goat::testing::gradient_instance;

namespace {

// Independent, unoptimised transcription of the mutual attention block for
// whole neighborhoods (adjacency order, no padding, no dropout).
std::vector<double> naive_rs(const Embedding& e, const Graph& g, NodeId s, NodeId t) {
  std::vector<NodeId> S, T;
  for (const Neighbor& x : g.neighbors(s)) S.push_back(x.id);
  for (const Neighbor& x : g.neighbors(t)) T.push_back(x.id);
  const std::size_t d = e.dim();
  std::vector<double> pooled(S.size(), -1e300);
  for (std::size_t i = 0; i < S.size(); ++i)
    for (std::size_t j = 0; j < T.size(); ++j) {
      double a = 0;
      for (std::size_t k = 0; k < d; ++k) a += e.row(S[i])[k] * e.row(T[j])[k];
      pooled[i] = std::max(pooled[i], a);
    }
  double z = 0;
  for (double& p : pooled) z += (p = std::exp(p));
  std::vector<double> r(d, 0.0);
  for (std::size_t i = 0; i < S.size(); ++i)
    for (std::size_t k = 0; k < d; ++k) r[k] += pooled[i] / z * e.row(S[i])[k];
  return r;
}

double naive_exact_loss(const Embedding& e, const Graph& g, NodeId s, NodeId t, double w) {
  auto dot = [](const std::vector<double>& a, const std::vector<double>& b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
  };
  const auto rs = naive_rs(e, g, s, t);
  double z = 0;
  for (NodeId w = 0; w < g.num_nodes(); ++w) z += std::exp(dot(rs, naive_rs(e, g, w, s)));
  return -w * (dot(rs, naive_rs(e, g, t, s)) - std::log(z));
}

Embedding random_embedding(std::size_t n, std::size_t d, Rng& rng, double scale = 0.5) {
  Embedding e(n, d);
  std::normal_distribution<double> z(0.0, scale);
  for (NodeId v = 0; v < n; ++v)
    for (double& x : e.row(v)) x = z(rng);
  return e;
}

}  // namespace

TEST_CASE("analytic gradient matches central differences") {
  Rng rng(11);
  struct Setup {
    Variant variant;
    NegativeRepr repr;
    double dropout;
  };
  for (const Setup& s : {Setup{Variant::goat, NegativeRepr::context, 0.0},
                         Setup{Variant::goat, NegativeRepr::context, 0.4},
                         Setup{Variant::goat, NegativeRepr::global, 0.3},
                         Setup{Variant::global, NegativeRepr::context, 0.0}}) {
    ObjectiveOptions o;
    o.neighborhood = 4;
    o.negatives = 3;
    o.dropout = s.dropout;
    o.variant = s.variant;
    o.negative_repr = s.repr;
    for (int trial = 0; trial < 5; ++trial) {
      const auto inst = gradient_instance(rng, 6, o);
      const NegativeSampler sampler(inst.graph);
      const auto r = check_gradient(inst.embedding, inst.graph, inst.arc, o, sampler, inst.seed);
      CAPTURE(to_string(s.variant));
      CAPTURE(s.dropout);
      CHECK(r.rel_error < 1e-4);
      CHECK(r.margin >= 1e-3);
    }
  }
}

TEST_CASE("the same seed reproduces the objective and its gradient") {
  Rng rng(12);
  ObjectiveOptions o;
  o.neighborhood = 3;
  o.dropout = 0.5;
  const auto inst = gradient_instance(rng, 5, o, 0.0);
  const NegativeSampler sampler(inst.graph);
  SparseGradient a(inst.graph.num_nodes() + 1, 5), b(inst.graph.num_nodes() + 1, 5);
  const double la = testing::frozen_objective(inst.embedding, inst.graph, inst.arc, o, sampler,
                                              inst.seed, &a);
  const double lb = testing::frozen_objective(inst.embedding, inst.graph, inst.arc, o, sampler,
                                              inst.seed, &b);
  CHECK(la == lb);
  for (NodeId v = 0; v < inst.graph.num_nodes(); ++v) CHECK(a.dense_row(v) == b.dense_row(v));
}

TEST_CASE("gradient touches only sampled neighborhoods") {
  Rng rng(13);
  for (auto repr : {NegativeRepr::context, NegativeRepr::global}) {
    ObjectiveOptions o;
    o.neighborhood = 3;
    o.negatives = 2;
    o.negative_repr = repr;
    for (int trial = 0; trial < 30; ++trial) {
      const Graph g = testing::random_connected(40, 30, rng);
      const Embedding e = random_embedding(40, 4, rng);
      const NegativeSampler sampler(g);
      const auto arcs = training_arcs(g);
      const Edge arc = arcs[trial % arcs.size()];
      EdgeWorkspace ws;
      SparseGradient grad(41, 4);
      edge_objective(e, g, arc, o, sampler, rng, ws, &grad);

      std::set<NodeId> allowed;
      for (NodeId v : ws.source.real_ids()) allowed.insert(v);
      for (NodeId v : ws.target.real_ids()) allowed.insert(v);
      for (std::size_t k = 0; k < o.negatives; ++k) {
        if (repr == NegativeRepr::context)
          for (NodeId v : ws.negative_samples[k].real_ids()) allowed.insert(v);
        else
          allowed.insert(ws.negatives[k]);
      }
      for (NodeId v : grad.rows()) CHECK(allowed.contains(v));
    }
  }
}

TEST_CASE("one optimizer step changes only rows in the gradient") {
  Rng rng(14);
  const Graph g = testing::random_connected(30, 20, rng);
  Embedding e = random_embedding(30, 4, rng);
  const Embedding before = e;
  ObjectiveOptions o;
  o.neighborhood = 2;
  const NegativeSampler sampler(g);
  EdgeWorkspace ws;
  SparseGradient grad(31, 4);
  edge_objective(e, g, training_arcs(g)[0], o, sampler, rng, ws, &grad);
  Optimizer opt(OptimizerKind::sgd, 0.1, 31, 4);
  opt.apply(e, grad);
  const std::set<NodeId> touched(grad.rows().begin(), grad.rows().end());
  for (NodeId v = 0; v < 30; ++v) {
    const bool changed = !std::equal(e.row(v).begin(), e.row(v).end(), before.row(v).begin());
    if (!touched.contains(v)) CHECK_FALSE(changed);
  }
  CHECK(e.padding_is_zero());
}

TEST_CASE("exact softmax: two nodes") {
  // One edge: P(1|0) = e^x / (e^x + e^y) with both candidates' blocks
  // reducing to a single row each.
  const Graph g = testing::undirected(2, {{0, 1}});
  Embedding e(2, 2);
  e.row(0)[0] = 0.3;
  e.row(0)[1] = -0.2;
  e.row(1)[0] = 0.7;
  e.row(1)[1] = 0.4;
  Rng rng(1);
  // N(0) = {1}, N(1) = {0}. r_s = E_1; r_t = E_0; candidate 0 gives r = E_1.
  const double x = 0.7 * 0.3 + 0.4 * -0.2, y = 0.7 * 0.7 + 0.4 * 0.4;
  const double want = -(x - std::log(std::exp(x) + std::exp(y)));
  CHECK(exact_softmax_loss(e, g, {0, 1, 1.0}, 5, Variant::goat, rng) ==
        doctest::Approx(want).epsilon(1e-14));
}

TEST_CASE("exact softmax: identical rows give probability 1/n") {
  Rng graph_rng(2);
  const Graph g = testing::random_connected(7, 5, graph_rng);
  Embedding e(7, 3);
  for (NodeId v = 0; v < 7; ++v) {
    e.row(v)[0] = 0.5;
    e.row(v)[1] = -0.1;
    e.row(v)[2] = 0.2;
  }
  Rng rng(3);
  for (const Edge& arc : training_arcs(g))
    CHECK(exact_softmax_loss(e, g, arc, 7, Variant::goat, rng) / arc.weight ==
          doctest::Approx(std::log(7.0)).epsilon(1e-12));
}

TEST_CASE("exact softmax agrees with a naive evaluation") {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = testing::random_connected(6, 4, rng);
    const Embedding e = random_embedding(6, 3, rng, 0.8);
    for (const Edge& arc : training_arcs(g)) {
      Rng r(5);
      CHECK(exact_softmax_loss(e, g, arc, 6, Variant::goat, r) ==
            doctest::Approx(naive_exact_loss(e, g, arc.source, arc.target, arc.weight)).epsilon(1e-10));
    }
  }
}

TEST_CASE("global variant ignores the neighborhood size") {
  Rng rng(6);
  ObjectiveOptions small, large;
  small.variant = large.variant = Variant::global;
  small.neighborhood = 1;
  large.neighborhood = 50;
  small.dropout = large.dropout = 0.3;
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = testing::random_connected(15, 20, rng);
    const Embedding e = random_embedding(15, 4, rng);
    const NegativeSampler sampler(g);
    const Edge arc = training_arcs(g)[trial];
    const std::uint64_t seed = rng();
    SparseGradient a(16, 4), b(16, 4);
    CHECK(testing::frozen_objective(e, g, arc, small, sampler, seed, &a) ==
          testing::frozen_objective(e, g, arc, large, sampler, seed, &b));
    for (NodeId v = 0; v < 15; ++v) CHECK(a.dense_row(v) == b.dense_row(v));
    Rng r1(1), r2(2);
    CHECK(exact_softmax_loss(e, g, arc, 1, Variant::global, r1) ==
          exact_softmax_loss(e, g, arc, 50, Variant::global, r2));
  }
}

TEST_CASE("score_pair examples") {
  // Nodes 0 and 1 each see a private neighbor; the neighbors' rows are
  // orthogonal, so r_0 . r_1 = 0.
  const Graph g = testing::undirected(5, {{0, 2}, {1, 3}});
  Embedding e(5, 2);
  e.row(2)[0] = 1.0;
  e.row(3)[1] = 1.0;
  e.row(0)[0] = 0.5;
  e.row(1)[0] = 0.25;
  Rng rng(1);
  CHECK(score_pair(e, g, 0, 1, 4, 3, rng) == 0.0);
  // Isolated node 4 falls back to the global rows.
  e.row(4)[0] = 2.0;
  CHECK(score_pair(e, g, 0, 4, 4, 3, rng) == 1.0);
  CHECK(score_pair(e, g, 0, 1, 4, 3, rng, Variant::global) == 0.125);
}

TEST_CASE("score_pair is deterministic when neighborhoods fit") {
  Rng rng(7);
  const Graph g = testing::barbell(5);
  const Embedding e = random_embedding(10, 4, rng);
  Rng a(1), b(99);
  for (NodeId u = 0; u < 10; ++u)
    for (NodeId v = 0; v < 10; ++v)
      CHECK(score_pair(e, g, u, v, 8, 1, a) == score_pair(e, g, u, v, 8, 8, b));
}

TEST_CASE("score_pair averages resampled blocks") {
  Rng rng(8);
  const Graph g = testing::random_connected(30, 120, rng);
  const Embedding e = random_embedding(30, 4, rng);
  // With N = 2 most nodes are subsampled; one trial differs between seeds
  // while many trials concentrate.
  Rng a(1), b(2);
  double spread_one = 0, spread_many = 0;
  for (NodeId u = 0; u < 10; ++u) {
    spread_one += std::abs(score_pair(e, g, u, u + 10, 2, 1, a) - score_pair(e, g, u, u + 10, 2, 1, b));
    spread_many +=
        std::abs(score_pair(e, g, u, u + 10, 2, 200, a) - score_pair(e, g, u, u + 10, 2, 200, b));
  }
  CHECK(spread_one > 0.0);
  CHECK(spread_many < spread_one);
}
