#include <algorithm>

#include <json.hpp>

#include "goat/error.hpp"
#include "goat/eval.hpp"

namespace goat {

AttentionRecord attention_for_pair(const Embedding& e, const Graph& g, NodeId s, NodeId t,
                                   std::size_t neighborhood, Rng& rng) {
  const auto ns = sample_neighborhood(g, s, neighborhood, rng);
  const auto nt = sample_neighborhood(g, t, neighborhood, rng);
  const BlockOutput out = forward(e, ns, nt, 0.0, false, rng);

  AttentionRecord record{s, t, {}, {}};
  for (std::size_t i = 0; i < ns.valid; ++i) record.source_neighbors.push_back({ns.ids[i], out.a_s[i]});
  for (std::size_t j = 0; j < nt.valid; ++j) record.target_neighbors.push_back({nt.ids[j], out.a_t[j]});
  auto by_weight = [](const AttentionEntry& a, const AttentionEntry& b) {
    return a.weight != b.weight ? a.weight > b.weight : a.id < b.id;
  };
  std::sort(record.source_neighbors.begin(), record.source_neighbors.end(), by_weight);
  std::sort(record.target_neighbors.begin(), record.target_neighbors.end(), by_weight);
  return record;
}

AttentionReport export_attention(const Embedding& e, const Graph& g,
                                 std::span<const NodePair> pairs, std::size_t neighborhood,
                                 Rng& rng) {
  AttentionReport report;
  for (const NodePair& p : pairs) {
    if (p.source >= g.num_nodes() || p.target >= g.num_nodes() || g.degree(p.source) == 0 ||
        g.degree(p.target) == 0) {
      ++report.skipped;
      continue;
    }
    report.records.push_back(attention_for_pair(e, g, p.source, p.target, neighborhood, rng));
  }
  return report;
}

std::string attention_to_json(const AttentionReport& report, const Graph& g) {
  auto entries = [&g](const std::vector<AttentionEntry>& list) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& entry : list) arr.push_back({{"id", g.label(entry.id)}, {"weight", entry.weight}});
    return arr;
  };
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& r : report.records) {
    doc.push_back({{"source", g.label(r.source)},
                   {"target", g.label(r.target)},
                   {"source_neighbors", entries(r.source_neighbors)},
                   {"target_neighbors", entries(r.target_neighbors)}});
  }
  return doc.dump(2);
}

}  // namespace goat
