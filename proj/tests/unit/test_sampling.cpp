#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "goat/error.hpp"
#include "goat/sampling.hpp"
#include "toy_graphs.hpp"

using namespace goat;

namespace {

// Star-like graph where node 0 has the given degree.
Graph hub_with_degree(std::size_t degree) {
  std::vector<std::pair<NodeId, NodeId>> pairs;
  for (NodeId v = 1; v <= degree; ++v) pairs.push_back({0, v});
  return testing::undirected(degree + 1, pairs);
}

}  // namespace

TEST_CASE("fewer neighbors than slots pads the tail") {
  const Graph g = hub_with_degree(3);
  Rng rng(1);
  const auto s = sample_neighborhood(g, 0, 5, rng);
  CHECK(s.size() == 5);
  CHECK(s.valid == 3);
  CHECK(s.mask() == std::vector<bool>{true, true, true, false, false});
  CHECK(s.ids[3] == g.padding_id());
  CHECK(s.ids[4] == g.padding_id());
  std::set<NodeId> real(s.ids.begin(), s.ids.begin() + 3);
  CHECK(real == std::set<NodeId>{1, 2, 3});
}

TEST_CASE("more neighbors than slots samples without replacement") {
  const Graph g = hub_with_degree(7);
  Rng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = sample_neighborhood(g, 0, 5, rng);
    CHECK(s.valid == 5);
    std::set<NodeId> ids(s.ids.begin(), s.ids.end());
    CHECK(ids.size() == 5);
    for (NodeId v : ids) CHECK(g.adjacent(0, v));
  }
}

TEST_CASE("sampling is deterministic given the seed") {
  const Graph g = hub_with_degree(30);
  Rng a(99), b(99);
  CHECK(sample_neighborhood(g, 0, 8, a).ids == sample_neighborhood(g, 0, 8, b).ids);
}

TEST_CASE("every slot of a sampled neighborhood is a true neighbor") {
  Rng rng(5);
  const Graph g = testing::random_connected(60, 200, rng);
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    for (std::size_t n : {1u, 2u, 4u, 9u}) {
      const auto s = sample_neighborhood(g, u, n, rng);
      CHECK(s.valid == std::min(n, g.degree(u)));
      for (NodeId v : s.real_ids()) CHECK(g.adjacent(u, v));
      for (std::size_t i = s.valid; i < s.size(); ++i) CHECK(s.ids[i] == g.padding_id());
    }
  }
}

TEST_CASE("sampling errors") {
  const Graph g(3, {{0, 1, 1.0}}, false);
  Rng rng(1);
  CHECK_THROWS_AS(sample_neighborhood(g, 2, 4, rng), ValidationError);
  CHECK_THROWS_AS(sample_neighborhood(g, 0, 0, rng), ValidationError);
}

TEST_CASE("hub with 16 leaves") {
  const Graph g = hub_with_degree(16);
  const NegativeSampler sampler(g);
  const auto p = sampler.probabilities();
  // Hub weight 16^0.75 = 8, each leaf 1, total 24.
  CHECK(p[0] == doctest::Approx(8.0 / 24.0).epsilon(1e-12));
  CHECK(p[1] == doctest::Approx(1.0 / 24.0).epsilon(1e-12));
}

TEST_CASE("two-node degree profile [1, 16] gives p = [1/9, 8/9]") {
  // A degree-16 node needs 16 neighbours, which carry weight too, so the
  // pair is compared after renormalising over the two of them.
  std::vector<std::pair<NodeId, NodeId>> pairs{{0, 1}};  // A = 0, degree 1
  for (NodeId v = 3; v < 19; ++v) pairs.push_back({2, v});  // B = 2, degree 16
  const Graph g = testing::undirected(19, pairs);
  const NegativeSampler sampler(g);
  const auto p = sampler.probabilities();
  const double pa = p[0] / (p[0] + p[2]), pb = p[2] / (p[0] + p[2]);
  CHECK(pa == doctest::Approx(1.0 / 9.0).epsilon(1e-12));
  CHECK(pb == doctest::Approx(8.0 / 9.0).epsilon(1e-12));
}

TEST_CASE("equal degrees give a uniform distribution") {
  // A 6-cycle: every degree is 2.
  const Graph g = testing::undirected(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}});
  const NegativeSampler sampler(g);
  double total = 0;
  for (double p : sampler.probabilities()) {
    CHECK(p == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
    total += p;
  }
  CHECK(total == doctest::Approx(1.0));
}

TEST_CASE("probabilities follow the degree ratio law and sum to one") {
  Rng rng(8);
  const Graph g = testing::random_connected(50, 120, rng);
  const NegativeSampler sampler(g);
  const auto p = sampler.probabilities();
  double total = 0;
  for (double x : p) total += x;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  for (NodeId u = 0; u < 50; ++u)
    for (NodeId v = 0; v < 50; v += 7)
      CHECK(p[u] / p[v] ==
            doctest::Approx(std::pow(double(g.degree(u)) / double(g.degree(v)), 0.75))
                .epsilon(1e-10));
}

TEST_CASE("isolated nodes are never drawn") {
  const Graph g(4, {{0, 1, 1.0}, {1, 2, 1.0}}, false);
  const NegativeSampler sampler(g);
  CHECK(sampler.probabilities()[3] == 0.0);
  Rng rng(4);
  for (int i = 0; i < 10000; ++i) CHECK(sampler(rng) != 3);
}

TEST_CASE("empirical frequencies pass a chi-square test") {
  // Centres of degree 1, 2 and 4 plus their leaves.
  std::vector<std::pair<NodeId, NodeId>> pairs{{0, 1}, {2, 3}, {2, 4}, {5, 6}, {5, 7}, {5, 8},
                                               {5, 9}};
  const Graph g = testing::undirected(10, pairs);
  const NegativeSampler sampler(g);
  const auto p = sampler.probabilities();
  // Degrees: [1,1,2,1,1,4,1,1,1,1] -> weights 1, 2^0.75, 4^0.75.
  const double z = 8.0 + std::pow(2.0, 0.75) + std::pow(4.0, 0.75);
  CHECK(p[2] == doctest::Approx(std::pow(2.0, 0.75) / z).epsilon(1e-12));
  CHECK(p[5] == doctest::Approx(std::pow(4.0, 0.75) / z).epsilon(1e-12));

  constexpr std::size_t kDraws = 1'000'000;
  std::vector<std::size_t> counts(10, 0);
  Rng rng(2024);
  for (std::size_t i = 0; i < kDraws; ++i) ++counts[sampler(rng)];
  double chi2 = 0;
  for (std::size_t v = 0; v < 10; ++v) {
    const double expected = p[v] * kDraws;
    chi2 += (counts[v] - expected) * (counts[v] - expected) / expected;
  }
  // 9 degrees of freedom: the 0.99 quantile is 21.666, i.e. p > 0.01.
  CHECK(chi2 < 21.666);

  // The degree-1, -2 and -4 centres against each other (2 dof, 9.210).
  const double sub = double(counts[0] + counts[2] + counts[5]);
  const double w[3] = {1.0, std::pow(2.0, 0.75), std::pow(4.0, 0.75)};
  const double wsum = w[0] + w[1] + w[2];
  const std::size_t c[3] = {counts[0], counts[2], counts[5]};
  double chi2_sub = 0;
  for (int i = 0; i < 3; ++i) {
    const double expected = sub * w[i] / wsum;
    chi2_sub += (c[i] - expected) * (c[i] - expected) / expected;
  }
  CHECK(chi2_sub < 9.210);
}
