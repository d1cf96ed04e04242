#include "goat/generators.hpp"

#include <algorithm>
#include <cmath>

#include "goat/error.hpp"

namespace goat {

Graph barabasi_albert(std::size_t n, std::size_t m_attach, Rng& rng) {
  // The seed star already holds m_attach + 1 nodes; at least one more has
  // to join by preferential attachment.
  if (m_attach < 1 || n <= m_attach + 1)
    throw ValidationError("Barabasi-Albert requires m_attach >= 1 and n > m_attach + 1");

  std::vector<Edge> edges;
  edges.reserve((n - m_attach) * m_attach);
  // Every endpoint occurrence, so a uniform pick is degree-proportional.
  std::vector<NodeId> endpoints;
  endpoints.reserve(2 * (n - m_attach) * m_attach);

  const auto hub = static_cast<NodeId>(m_attach);
  for (NodeId leaf = 0; leaf < hub; ++leaf) {
    edges.push_back({leaf, hub, 1.0});
    endpoints.push_back(leaf);
    endpoints.push_back(hub);
  }

  std::vector<NodeId> targets;
  for (auto source = static_cast<NodeId>(m_attach + 1); source < n; ++source) {
    targets.clear();
    std::uniform_int_distribution<std::size_t> pick(0, endpoints.size() - 1);
    while (targets.size() < m_attach) {
      const NodeId t = endpoints[pick(rng)];
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
    }
    for (NodeId t : targets) {
      edges.push_back({t, source, 1.0});
      endpoints.push_back(t);
      endpoints.push_back(source);
    }
  }
  return Graph(n, std::move(edges), /*directed=*/false);
}

Graph planted_partition(std::size_t n, std::size_t blocks, double p_in, double p_out, Rng& rng,
                        std::vector<int>* membership) {
  if (blocks == 0 || blocks > n) throw ValidationError("need 1 <= blocks <= n");
  if (!(p_in >= 0 && p_in <= 1 && p_out >= 0 && p_out <= 1))
    throw ValidationError("edge probabilities must lie in [0, 1]");
  std::vector<int> block(n);
  for (std::size_t v = 0; v < n; ++v) block[v] = static_cast<int>(v * blocks / n);

  std::vector<Edge> edges;
  std::bernoulli_distribution in(p_in), out(p_out);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      if (block[u] == block[v] ? in(rng) : out(rng))
        edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v), 1.0});
  if (membership) *membership = std::move(block);
  return Graph(n, std::move(edges), /*directed=*/false);
}

}  // namespace goat
