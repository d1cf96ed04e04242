#include "goat/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>
#include <unordered_map>

#include "goat/error.hpp"

namespace goat {
namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) tokens.push_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

bool is_comment_or_blank(std::string_view line) {
  for (char c : line) {
    if (c == '#') return true;
    if (c != ' ' && c != '\t' && c != '\r') return false;
  }
  return true;
}

double parse_weight(std::string_view token, std::size_t line_no) {
  double w = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), w);
  if (ec != std::errc{} || ptr != token.data() + token.size())
    throw ParseError("invalid weight '" + std::string(token) + "'", line_no);
  if (!(w > 0.0)) throw ValidationError("line " + std::to_string(line_no) +
                                        ": edge weight must be positive, got " +
                                        std::string(token));
  return w;
}

template <class T>
T parse_integer(std::string_view token, std::size_t line_no, const char* what) {
  T value{};
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size())
    throw ParseError(std::string("invalid ") + what + " '" + std::string(token) + "'", line_no);
  return value;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return in;
}

}  // namespace

ParsedGraph parse_edge_list(std::istream& in, bool directed) {
  std::unordered_map<std::string, NodeId> ids;
  std::vector<std::string> labels;
  std::vector<Edge> edges;
  ParseStats stats;

  auto intern = [&](std::string_view token) {
    auto [it, inserted] = ids.try_emplace(std::string(token), static_cast<NodeId>(labels.size()));
    if (inserted) labels.emplace_back(token);
    return it->second;
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_comment_or_blank(line)) continue;
    auto tokens = split_ws(line);
    if (tokens.size() != 2 && tokens.size() != 3)
      throw ParseError("expected 'u v' or 'u v w', got " + std::to_string(tokens.size()) +
                           " fields",
                       line_no);
    const double w = tokens.size() == 3 ? parse_weight(tokens[2], line_no) : 1.0;
    ++stats.lines;
    if (tokens[0] == tokens[1]) {
      ++stats.self_loops_skipped;
      continue;
    }
    const NodeId u = intern(tokens[0]);
    const NodeId v = intern(tokens[1]);
    edges.push_back({u, v, w});
  }

  const std::size_t raw = edges.size();
  const std::size_t n = labels.size();
  Graph g(n, std::move(edges), directed, std::move(labels));
  stats.duplicates_collapsed = raw - g.num_edges();
  return {std::move(g), stats};
}

ParsedGraph read_edge_list(const std::filesystem::path& path, bool directed) {
  auto in = open_input(path);
  return parse_edge_list(in, directed);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  char buf[64];
  for (const Edge& e : g.edges()) {
    std::snprintf(buf, sizeof buf, "%.17g", e.weight);
    out << e.source << '\t' << e.target << '\t' << buf << '\n';
  }
}

void write_node_map(std::ostream& out, const Graph& g) {
  for (std::size_t v = 0; v < g.num_nodes(); ++v)
    out << v << '\t' << g.label(static_cast<NodeId>(v)) << '\n';
}

std::vector<std::string> read_node_map(std::istream& in) {
  std::vector<std::string> labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_comment_or_blank(line)) continue;
    auto tokens = split_ws(line);
    if (tokens.size() != 2) throw ParseError("expected 'index token'", line_no);
    const auto index = parse_integer<std::size_t>(tokens[0], line_no, "node index");
    if (index != labels.size())
      throw ParseError("node map indices must be dense and ascending", line_no);
    labels.emplace_back(tokens[1]);
  }
  return labels;
}

CommunityLabels parse_labels(std::istream& in, const Graph& g) {
  CommunityLabels result;
  result.community.assign(g.num_nodes(), -1);
  std::unordered_map<std::string, int> communities;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_comment_or_blank(line)) continue;
    auto tokens = split_ws(line);
    if (tokens.size() != 2) throw ParseError("expected 'node_id community_id'", line_no);
    auto node = g.find(tokens[0]);
    if (!node) {
      ++result.unknown_nodes;
      continue;
    }
    auto [it, inserted] =
        communities.try_emplace(std::string(tokens[1]), static_cast<int>(communities.size()));
    result.community[*node] = it->second;
  }
  result.num_communities = communities.size();
  return result;
}

CommunityLabels read_labels(const std::filesystem::path& path, const Graph& g) {
  auto in = open_input(path);
  return parse_labels(in, g);
}

IndexedEdges parse_indexed_edges(std::istream& in, std::size_t num_nodes) {
  IndexedEdges result;
  std::string line;
  std::size_t line_no = 0;
  constexpr std::string_view kDigest = "# digest=";
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (view.starts_with(kDigest)) {
      auto hex = view.substr(kDigest.size());
      while (!hex.empty() && (hex.back() == '\r' || hex.back() == ' ')) hex.remove_suffix(1);
      std::uint64_t digest = 0;
      auto [ptr, ec] = std::from_chars(hex.data(), hex.data() + hex.size(), digest, 16);
      if (ec != std::errc{} || ptr != hex.data() + hex.size())
        throw ParseError("invalid digest header", line_no);
      result.digest = digest;
      continue;
    }
    if (is_comment_or_blank(view)) continue;
    auto tokens = split_ws(view);
    if (tokens.size() != 2 && tokens.size() != 3)
      throw ParseError("expected 's t' or 's t w'", line_no);
    const auto s = parse_integer<NodeId>(tokens[0], line_no, "node id");
    const auto t = parse_integer<NodeId>(tokens[1], line_no, "node id");
    if (s >= num_nodes || t >= num_nodes)
      throw ParseError("node id out of range [0, " + std::to_string(num_nodes) + ")", line_no);
    const double w = tokens.size() == 3 ? parse_weight(tokens[2], line_no) : 1.0;
    result.edges.push_back({s, t, w});
  }
  return result;
}

IndexedEdges read_indexed_edges(const std::filesystem::path& path, std::size_t num_nodes) {
  auto in = open_input(path);
  return parse_indexed_edges(in, num_nodes);
}

std::string format_digest(std::uint64_t digest) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(digest));
  return buf;
}

}  // namespace goat
