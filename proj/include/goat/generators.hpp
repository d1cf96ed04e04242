#pragma once

#include <cstddef>
#include <vector>

#include "goat/graph.hpp"
#include "goat/random.hpp"

namespace goat {

/// Preferential attachment: a star on m_attach + 1 nodes, then every new
/// node links to m_attach distinct existing nodes chosen proportionally to
/// degree. Yields (n - m_attach) * m_attach undirected edges.
/// Requires m_attach >= 1 and n > m_attach + 1, so that at least one node
/// joins by attachment.
Graph barabasi_albert(std::size_t n, std::size_t m_attach, Rng& rng);

/// Planted-partition graph: `blocks` equal-sized communities, edge
/// probability p_in inside a community and p_out across. `membership`
/// receives the community of every node when non-null.
Graph planted_partition(std::size_t n, std::size_t blocks, double p_in, double p_out, Rng& rng,
                        std::vector<int>* membership = nullptr);

}  // namespace goat
