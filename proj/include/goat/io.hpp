#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "goat/graph.hpp"

namespace goat {

struct ParseStats {
  std::size_t lines = 0;
  std::size_t self_loops_skipped = 0;
  std::size_t duplicates_collapsed = 0;
};

struct ParsedGraph {
  Graph graph;
  ParseStats stats;
};

/// Reads "u v" / "u v w" lines. Tokens are arbitrary and remapped to dense
/// ids in first-appearance order; `#` starts a comment line. Self-loops are
/// skipped (their tokens are not registered) and counted.
ParsedGraph parse_edge_list(std::istream& in, bool directed);
ParsedGraph read_edge_list(const std::filesystem::path& path, bool directed);

/// Writes "source\ttarget\tweight" with dense ids and round-trip precision.
void write_edge_list(std::ostream& out, const Graph& g);

/// Sidecar remapping table: "index\ttoken" per node.
void write_node_map(std::ostream& out, const Graph& g);
std::vector<std::string> read_node_map(std::istream& in);

/// Ground-truth communities, "node_id community_id" per line. Nodes of `g`
/// without a label get -1; community tokens are remapped densely.
struct CommunityLabels {
  std::vector<int> community;
  std::size_t num_communities = 0;
  std::size_t unknown_nodes = 0;  // labelled tokens absent from the graph
};
CommunityLabels parse_labels(std::istream& in, const Graph& g);
CommunityLabels read_labels(const std::filesystem::path& path, const Graph& g);

/// Files with dense integer ids ("s t" or "s t w") and an optional
/// "# digest=<hex>" header, as used by the split export.
struct IndexedEdges {
  std::vector<Edge> edges;
  std::optional<std::uint64_t> digest;
};
IndexedEdges parse_indexed_edges(std::istream& in, std::size_t num_nodes);
IndexedEdges read_indexed_edges(const std::filesystem::path& path, std::size_t num_nodes);

std::string format_digest(std::uint64_t digest);

}  // namespace goat
