#include "goat/split.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_set>

#include "goat/error.hpp"
#include "goat/io.hpp"

namespace goat {
namespace {

std::uint64_t pair_key(NodeId a, NodeId b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  return out;
}

}  // namespace

Graph EvalSplit::train_graph(const Graph& full) const {
  std::vector<std::string> labels(full.labels().begin(), full.labels().end());
  return Graph(full.num_nodes(), train, full.directed(), std::move(labels));
}

std::vector<NodePair> sample_non_edges(const Graph& g, std::size_t count, Rng& rng) {
  const std::size_t n = g.num_nodes();
  const double total_pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  std::size_t connected_pairs = 0;
  for (std::size_t v = 0; v < n; ++v) connected_pairs += g.degree(static_cast<NodeId>(v));
  connected_pairs /= 2;
  if (n < 2 || static_cast<double>(count) > total_pairs - static_cast<double>(connected_pairs))
    throw ValidationError("not enough non-adjacent pairs to sample " + std::to_string(count));

  std::vector<NodePair> pairs;
  pairs.reserve(count);
  std::unordered_set<std::uint64_t> seen;
  std::uniform_int_distribution<NodeId> node(0, static_cast<NodeId>(n - 1));
  while (pairs.size() < count) {
    const NodeId u = node(rng);
    const NodeId v = node(rng);
    if (u == v || g.adjacent(u, v)) continue;
    if (!seen.insert(pair_key(u, v)).second) continue;
    pairs.push_back({u, v});
  }
  return pairs;
}

EvalSplit split_edges(const Graph& g, double fraction, Rng& rng) {
  if (!(fraction > 0.0 && fraction <= 1.0))
    throw ValidationError("train fraction must lie in (0, 1]");
  const std::size_t m = g.num_edges();
  if (fraction * static_cast<double>(m) < 1.0)
    throw ValidationError("train fraction leaves no training edge");

  EvalSplit split;
  split.fraction = fraction;
  std::vector<Edge> edges(g.edges().begin(), g.edges().end());
  std::shuffle(edges.begin(), edges.end(), rng);
  const auto train_count = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(m)));
  split.train.assign(edges.begin(), edges.begin() + static_cast<std::ptrdiff_t>(train_count));
  for (std::size_t i = train_count; i < m; ++i)
    split.test_pos.push_back({edges[i].source, edges[i].target});
  split.test_neg = sample_non_edges(g, split.test_pos.size(), rng);

  std::vector<bool> has_train(g.num_nodes(), false);
  for (const Edge& e : split.train) has_train[e.source] = has_train[e.target] = true;
  for (std::size_t v = 0; v < g.num_nodes(); ++v)
    if (!has_train[v] && g.degree(static_cast<NodeId>(v)) > 0)
      split.stranded.push_back(static_cast<NodeId>(v));

  // Training edges in canonical order so the exported file does not depend
  // on the shuffle beyond set membership.
  std::sort(split.train.begin(), split.train.end(), [](const Edge& a, const Edge& b) {
    return a.source != b.source ? a.source < b.source : a.target < b.target;
  });
  return split;
}

void write_split(const std::filesystem::path& dir, const EvalSplit& split, std::uint64_t digest) {
  std::filesystem::create_directories(dir);
  const std::string header = "# digest=" + format_digest(digest) + "\n";
  {
    auto out = open_output(dir / "train.tsv");
    out << header;
    char buf[64];
    for (const Edge& e : split.train) {
      std::snprintf(buf, sizeof buf, "%.17g", e.weight);
      out << e.source << '\t' << e.target << '\t' << buf << '\n';
    }
  }
  for (auto [name, pairs] : {std::pair{"test_pos.tsv", &split.test_pos},
                             std::pair{"test_neg.tsv", &split.test_neg}}) {
    auto out = open_output(dir / name);
    out << header;
    for (const NodePair& p : *pairs) out << p.source << '\t' << p.target << '\n';
  }
}

LoadedSplit read_split(const std::filesystem::path& dir, std::size_t num_nodes) {
  LoadedSplit loaded;
  auto train = read_indexed_edges(dir / "train.tsv", num_nodes);
  auto pos = read_indexed_edges(dir / "test_pos.tsv", num_nodes);
  auto neg = read_indexed_edges(dir / "test_neg.tsv", num_nodes);
  if (!train.digest || !pos.digest || !neg.digest)
    throw ConsistencyError("split files under '" + dir.string() + "' lack a digest header");
  if (*train.digest != *pos.digest || *train.digest != *neg.digest)
    throw ConsistencyError("split files under '" + dir.string() + "' disagree on digest");
  loaded.digest = *train.digest;
  loaded.split.train = std::move(train.edges);
  for (const Edge& e : pos.edges) loaded.split.test_pos.push_back({e.source, e.target});
  for (const Edge& e : neg.edges) loaded.split.test_neg.push_back({e.source, e.target});
  const double total = static_cast<double>(loaded.split.train.size() + loaded.split.test_pos.size());
  loaded.split.fraction = total > 0 ? static_cast<double>(loaded.split.train.size()) / total : 1.0;
  return loaded;
}

}  // namespace goat
