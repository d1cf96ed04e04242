#include <algorithm>

#include "goat/error.hpp"
#include "goat/eval.hpp"
#include "goat/kernels.hpp"

namespace goat {

std::string_view to_string(FeatureMode m) {
  return m == FeatureMode::global ? "global" : "averaged-context";
}

std::optional<FeatureMode> parse_feature_mode(std::string_view text) {
  if (text == "global") return FeatureMode::global;
  if (text == "averaged-context") return FeatureMode::averaged_context;
  return std::nullopt;
}

RankedScores score_split(const Embedding& e, const Graph& train_graph, const EvalSplit& split,
                         std::size_t neighborhood, std::size_t trials, Variant variant, Rng& rng) {
  RankedScores scores;
  scores.pos.reserve(split.test_pos.size());
  scores.neg.reserve(split.test_neg.size());
  for (const NodePair& p : split.test_pos)
    scores.pos.push_back(
        score_pair(e, train_graph, p.source, p.target, neighborhood, trials, rng, variant));
  for (const NodePair& p : split.test_neg)
    scores.neg.push_back(
        score_pair(e, train_graph, p.source, p.target, neighborhood, trials, rng, variant));
  return scores;
}

PointSet node_features_for_clustering(const Embedding& e, const Graph& g, FeatureMode mode,
                                      std::size_t neighborhood, Rng& rng) {
  if (e.num_nodes() != g.num_nodes()) throw ValidationError("embedding does not match graph");
  PointSet points;
  points.count = g.num_nodes();
  points.dim = e.dim();
  points.values.assign(e.values().begin(),
                       e.values().begin() + static_cast<std::ptrdiff_t>(points.count * points.dim));
  if (mode == FeatureMode::global) return points;

  const auto& k = simd::active();
  NeighborhoodSample nu, nv;
  Message mu, mv;
  AttentionBlock block;
  for (std::size_t u = 0; u < g.num_nodes(); ++u) {
    const auto node = static_cast<NodeId>(u);
    const auto partners = g.neighbors(node);
    if (partners.empty()) continue;
    double* out = points.values.data() + u * points.dim;
    std::fill(out, out + points.dim, 0.0);
    for (const Neighbor& partner : partners) {
      sample_neighborhood(g, node, neighborhood, rng, nu);
      sample_neighborhood(g, partner.id, neighborhood, rng, nv);
      mu.load(e, nu, 0.0, false, rng);
      mv.load(e, nv, 0.0, false, rng);
      block.forward(mu, mv);
      k.axpy(1.0, block.r_s().data(), out, points.dim);
    }
    const double inv = 1.0 / static_cast<double>(partners.size());
    for (std::size_t i = 0; i < points.dim; ++i) out[i] *= inv;
  }
  return points;
}

}  // namespace goat
