#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "goat/error.hpp"
#include "goat/generators.hpp"

using namespace goat;

namespace {

bool connected(const Graph& g) {
  std::vector<bool> seen(g.num_nodes(), false);
  std::vector<NodeId> stack{0};
  seen[0] = true;
  std::size_t count = 1;
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    for (const auto& nb : g.neighbors(v))
      if (!seen[nb.id]) {
        seen[nb.id] = true;
        ++count;
        stack.push_back(nb.id);
      }
  }
  return count == g.num_nodes();
}

}  // namespace

TEST_CASE("m_attach = 1 grows a tree") {
  Rng rng(1);
  const Graph g = barabasi_albert(10, 1, rng);
  CHECK(g.num_nodes() == 10);
  CHECK(g.num_edges() == 9);
  CHECK(connected(g));
}

TEST_CASE("edge count is (n - m_attach) * m_attach") {
  Rng rng(2);
  for (auto [n, m] : {std::pair{50, 3}, std::pair{200, 5}, std::pair{7, 5}}) {
    const Graph g = barabasi_albert(n, m, rng);
    CHECK(g.num_edges() == std::size_t(n - m) * m);
    CHECK(connected(g));
  }
}

TEST_CASE("degree distribution is heavy-tailed") {
  Rng rng(3);
  const Graph g = barabasi_albert(1000, 2, rng);
  std::vector<std::size_t> deg(g.num_nodes());
  for (NodeId v = 0; v < g.num_nodes(); ++v) deg[v] = g.degree(v);
  std::sort(deg.begin(), deg.end());
  const std::size_t median = deg[deg.size() / 2];
  CHECK(deg.back() > 10 * median);
}

TEST_CASE("too few nodes for attachment is an error") {
  Rng rng(4);
  CHECK_THROWS_AS(barabasi_albert(5, 4, rng), ValidationError);
  CHECK_THROWS_AS(barabasi_albert(3, 0, rng), ValidationError);
  CHECK_NOTHROW(barabasi_albert(6, 4, rng));
}

TEST_CASE("generator is deterministic given the seed") {
  Rng a(5), b(5);
  const Graph x = barabasi_albert(300, 3, a), y = barabasi_albert(300, 3, b);
  REQUIRE(x.num_edges() == y.num_edges());
  for (std::size_t i = 0; i < x.num_edges(); ++i) {
    CHECK(x.edges()[i].source == y.edges()[i].source);
    CHECK(x.edges()[i].target == y.edges()[i].target);
  }
}

TEST_CASE("planted partition respects block structure") {
  Rng rng(6);
  std::vector<int> membership;
  const Graph g = planted_partition(100, 4, 1.0, 0.0, rng, &membership);
  CHECK(membership.size() == 100);
  // Four disjoint 25-cliques.
  CHECK(g.num_edges() == 4 * (25 * 24 / 2));
  for (const Edge& e : g.edges()) CHECK(membership[e.source] == membership[e.target]);
  CHECK_THROWS_AS(planted_partition(10, 0, 0.5, 0.5, rng), ValidationError);
  CHECK_THROWS_AS(planted_partition(10, 2, 1.5, 0.5, rng), ValidationError);
}
