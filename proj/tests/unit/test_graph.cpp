#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "goat/error.hpp"
#include "goat/graph.hpp"
#include "goat/io.hpp"
#include "toy_graphs.hpp"

using namespace goat;

namespace {

ParsedGraph parse(const std::string& text, bool directed = false) {
  std::istringstream in(text);
  return parse_edge_list(in, directed);
}

}  // namespace

TEST_CASE("two-edge path") {
  const auto [g, stats] = parse("0 1\n1 2\n");
  CHECK(g.num_nodes() == 3);
  CHECK(g.num_edges() == 2);
  CHECK(g.degree(0) == 1);
  CHECK(g.degree(1) == 2);
  CHECK(g.degree(2) == 1);
  CHECK(stats.lines == 2);
}

TEST_CASE("duplicate edges collapse with summed weight") {
  const auto [g, stats] = parse("a b 2.0\na b 3.0\n");
  REQUIRE(g.num_edges() == 1);
  CHECK(g.edges()[0].weight == 5.0);
  CHECK(stats.duplicates_collapsed == 1);
  // Reversed orientation is the same undirected edge.
  const auto rev = parse("a b 2.0\nb a 3.0\n");
  REQUIRE(rev.graph.num_edges() == 1);
  CHECK(rev.graph.edges()[0].weight == 5.0);
}

TEST_CASE("tokens are remapped in first-appearance order") {
  const auto [g, stats] = parse("# header\nzeta alpha\n\nalpha mid 0.5\n");
  REQUIRE(g.num_nodes() == 3);
  CHECK(g.label(0) == "zeta");
  CHECK(g.label(1) == "alpha");
  CHECK(g.label(2) == "mid");
  CHECK(g.find("mid") == NodeId{2});
  CHECK_FALSE(g.find("nope").has_value());
  CHECK(g.edges()[1].weight == 0.5);
}

TEST_CASE("unweighted edges get weight one") {
  const auto [g, stats] = parse("1 2\n");
  CHECK(g.edges()[0].weight == 1.0);
}

TEST_CASE("self-loops are skipped and counted") {
  const auto [g, stats] = parse("a a\na b\nc c 2\n");
  CHECK(stats.self_loops_skipped == 2);
  CHECK(g.num_edges() == 1);
  // A token seen only in a self-loop never becomes a node.
  CHECK(g.num_nodes() == 2);
  CHECK_FALSE(g.find("c").has_value());
}

TEST_CASE("malformed lines report their line number") {
  try {
    parse("0 1\n0 1 2 3\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK_THROWS_AS(parse("0\n"), ParseError);
  CHECK_THROWS_AS(parse("0 1 heavy\n"), ParseError);
}

TEST_CASE("non-positive weights are validation errors") {
  CHECK_THROWS_AS(parse("0 1 0\n"), ValidationError);
  CHECK_THROWS_AS(parse("0 1 -2.5\n"), ValidationError);
  CHECK_THROWS_AS(parse("0 1 nan\n"), ValidationError);
}

TEST_CASE("Graph constructor validates") {
  CHECK_THROWS_AS(Graph(2, {{0, 2, 1.0}}, false), ValidationError);
  CHECK_THROWS_AS(Graph(2, {{1, 1, 1.0}}, false), ValidationError);
  CHECK_THROWS_AS(Graph(2, {{0, 1, 0.0}}, false), ValidationError);
  CHECK_THROWS_AS(Graph(2, {{0, 1, 1.0}}, false, {"only-one"}), ValidationError);
}

TEST_CASE("directed graphs keep orientation but degrees are undirected") {
  const auto [g, stats] = parse("a b\nb a\nb c\n", /*directed=*/true);
  CHECK(g.directed());
  CHECK(g.num_edges() == 3);
  // D(v) counts distinct nodes connected in either direction.
  CHECK(g.degree(*g.find("a")) == 1);
  CHECK(g.degree(*g.find("b")) == 2);
  const auto nb = g.neighbors(*g.find("b"));
  REQUIRE(nb.size() == 2);
  // Both orientations of a-b merge into one neighbor entry.
  CHECK(nb[0].weight == 2.0);
  CHECK(g.adjacent(*g.find("c"), *g.find("b")));
}

TEST_CASE("adjacency is sorted without duplicates") {
  Rng rng(3);
  const Graph g = testing::random_connected(40, 80, rng);
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    const auto nb = g.neighbors(v);
    for (std::size_t i = 1; i < nb.size(); ++i) CHECK(nb[i - 1].id < nb[i].id);
    for (const auto& n : nb) CHECK(n.id != v);
  }
}

TEST_CASE("training arcs cover both orientations of undirected edges") {
  const Graph g = testing::two_triangles();
  const auto arcs = training_arcs(g);
  CHECK(arcs.size() == 2 * g.num_edges());
  const auto [d, stats] = parse("a b\nb c\n", true);
  CHECK(training_arcs(d).size() == 2);
}

TEST_CASE("serialize then parse round-trips up to the emitted remapping") {
  Rng rng(11);
  std::uniform_real_distribution<double> w(0.01, 10.0);
  for (int trial = 0; trial < 20; ++trial) {
    const Graph base = testing::random_connected(25, 30, rng);
    std::vector<Edge> edges(base.edges().begin(), base.edges().end());
    for (auto& e : edges) e.weight = w(rng);
    const Graph g(base.num_nodes(), edges, false);

    std::stringstream text;
    write_edge_list(text, g);
    const auto [back, stats] = parse_edge_list(text, false);
    REQUIRE(back.num_nodes() == g.num_nodes());
    REQUIRE(back.num_edges() == g.num_edges());
    // Labels of the re-parsed graph are the original dense ids.
    std::set<std::tuple<NodeId, NodeId, double>> want, got;
    for (const Edge& e : g.edges()) want.insert({e.source, e.target, e.weight});
    for (const Edge& e : back.edges()) {
      auto s = static_cast<NodeId>(std::stoul(back.label(e.source)));
      auto t = static_cast<NodeId>(std::stoul(back.label(e.target)));
      got.insert({std::min(s, t), std::max(s, t), e.weight});
    }
    CHECK(got == want);

    std::stringstream map;
    write_node_map(map, back);
    const auto labels = read_node_map(map);
    CHECK(std::equal(labels.begin(), labels.end(), back.labels().begin(), back.labels().end()));
  }
}

TEST_CASE("community labels") {
  const auto [g, stats] = parse("a b\nb c\nc d\n");
  std::istringstream in("a 7\nb 7\nc 3\nghost 3\n");
  const CommunityLabels labels = parse_labels(in, g);
  CHECK(labels.num_communities == 2);
  CHECK(labels.unknown_nodes == 1);
  CHECK(labels.community[*g.find("a")] == labels.community[*g.find("b")]);
  CHECK(labels.community[*g.find("a")] != labels.community[*g.find("c")]);
  CHECK(labels.community[*g.find("d")] == -1);
}

TEST_CASE("indexed edge files carry an optional digest") {
  std::istringstream in("# digest=00000000000000ff\n0 1\n1 2 2.5\n");
  const IndexedEdges e = parse_indexed_edges(in, 3);
  REQUIRE(e.digest.has_value());
  CHECK(*e.digest == 0xff);
  REQUIRE(e.edges.size() == 2);
  CHECK(e.edges[1].weight == 2.5);
  std::istringstream bad("0 5\n");
  CHECK_THROWS(parse_indexed_edges(bad, 3));
  CHECK(format_digest(0xff) == "00000000000000ff");
}
