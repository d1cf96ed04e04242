#include "goat/model.hpp"

#include <algorithm>
#include <cmath>

#include "goat/error.hpp"
#include "goat/kernels.hpp"
#include "goat/loss.hpp"

namespace goat {

std::string_view to_string(Variant v) { return v == Variant::goat ? "goat" : "global"; }
std::string_view to_string(NegativeRepr r) { return r == NegativeRepr::context ? "context" : "global"; }

std::optional<Variant> parse_variant(std::string_view text) {
  if (text == "goat") return Variant::goat;
  if (text == "global") return Variant::global;
  return std::nullopt;
}

std::optional<NegativeRepr> parse_negative_repr(std::string_view text) {
  if (text == "context") return NegativeRepr::context;
  if (text == "global") return NegativeRepr::global;
  return std::nullopt;
}

SparseGradient::SparseGradient(std::size_t num_rows, std::size_t dim)
    : dim_(dim), slot_(num_rows, -1) {}

void SparseGradient::add(NodeId row, std::span<const double> grad) {
  int& slot = slot_[row];
  if (slot < 0) {
    slot = static_cast<int>(rows_.size());
    rows_.push_back(row);
    values_.resize(values_.size() + dim_, 0.0);
  }
  simd::active().axpy(1.0, grad.data(), values_.data() + static_cast<std::size_t>(slot) * dim_,
                      dim_);
}

void SparseGradient::clear() {
  for (NodeId r : rows_) slot_[r] = -1;
  rows_.clear();
  values_.clear();
}

std::vector<double> SparseGradient::dense_row(NodeId row) const {
  std::vector<double> out(dim_, 0.0);
  if (slot_[row] >= 0) {
    auto v = values(static_cast<std::size_t>(slot_[row]));
    std::copy(v.begin(), v.end(), out.begin());
  }
  return out;
}

namespace {

void draw_sample(const Graph& g, NodeId u, const ObjectiveOptions& opts, Rng& rng,
                 NeighborhoodSample& out) {
  if (opts.fixed_neighborhoods)
    out = (*opts.fixed_neighborhoods)[u];
  else
    sample_neighborhood(g, u, opts.neighborhood, rng, out);
}

NodeId draw_negative(const NegativeSampler& sampler, const Edge& arc, Rng& rng) {
  NodeId w = sampler(rng);
  for (int retry = 0; retry < 16 && (w == arc.target || w == arc.source); ++retry) w = sampler(rng);
  return w;
}

double global_objective(const Embedding& e, const Edge& arc, const ObjectiveOptions& opts,
                        const NegativeSampler& sampler, Rng& rng, EdgeWorkspace& ws,
                        SparseGradient* grad) {
  const auto& k = simd::active();
  const std::size_t d = e.dim();
  auto es = e.row(arc.source);
  auto et = e.row(arc.target);
  ws.negatives.resize(opts.negatives);
  ws.logits.resize(opts.negatives);
  for (std::size_t i = 0; i < opts.negatives; ++i) {
    ws.negatives[i] = draw_negative(sampler, arc, rng);
    ws.logits[i] = k.dot(es.data(), e.row(ws.negatives[i]).data(), d);
  }
  const NceTerms terms = nce_terms(k.dot(es.data(), et.data(), d), ws.logits, arc.weight);
  if (grad) {
    ws.grad_rs.assign(d, 0.0);
    k.axpy(terms.d_positive, et.data(), ws.grad_rs.data(), d);
    ws.grad_other.assign(d, 0.0);
    k.axpy(terms.d_positive, es.data(), ws.grad_other.data(), d);
    grad->add(arc.target, ws.grad_other);
    for (std::size_t i = 0; i < opts.negatives; ++i) {
      auto en = e.row(ws.negatives[i]);
      k.axpy(terms.d_negative[i], en.data(), ws.grad_rs.data(), d);
      std::fill(ws.grad_other.begin(), ws.grad_other.end(), 0.0);
      k.axpy(terms.d_negative[i], es.data(), ws.grad_other.data(), d);
      grad->add(ws.negatives[i], ws.grad_other);
    }
    grad->add(arc.source, ws.grad_rs);
  }
  return terms.loss;
}

}  // namespace

double edge_objective(const Embedding& e, const Graph& g, const Edge& arc,
                      const ObjectiveOptions& opts, const NegativeSampler& sampler, Rng& rng,
                      EdgeWorkspace& ws, SparseGradient* grad) {
  if (opts.variant == Variant::global) return global_objective(e, arc, opts, sampler, rng, ws, grad);

  const auto& k = simd::active();
  const std::size_t d = e.dim();
  const std::size_t K = opts.negatives;
  const bool context_negatives = opts.negative_repr == NegativeRepr::context;

  draw_sample(g, arc.source, opts, rng, ws.source);
  draw_sample(g, arc.target, opts, rng, ws.target);
  ws.source_msg.load(e, ws.source, opts.dropout, opts.training, rng);
  ws.target_msg.load(e, ws.target, opts.dropout, opts.training, rng);
  ws.blocks.resize(K + 1);
  ws.blocks[0].forward(ws.source_msg, ws.target_msg);
  const auto r_s = ws.blocks[0].r_s();
  const auto r_t = ws.blocks[0].r_t();

  ws.negatives.resize(K);
  ws.logits.resize(K);
  if (context_negatives) {
    ws.negative_samples.resize(K);
    ws.negative_msgs.resize(K);
  }
  for (std::size_t i = 0; i < K; ++i) {
    ws.negatives[i] = draw_negative(sampler, arc, rng);
    if (context_negatives) {
      draw_sample(g, ws.negatives[i], opts, rng, ws.negative_samples[i]);
      ws.negative_msgs[i].load(e, ws.negative_samples[i], opts.dropout, opts.training, rng);
      ws.blocks[i + 1].forward(ws.source_msg, ws.negative_msgs[i]);
      ws.logits[i] = k.dot(r_s.data(), ws.blocks[i + 1].r_t().data(), d);
    } else {
      ws.logits[i] = k.dot(r_s.data(), e.row(ws.negatives[i]).data(), d);
    }
  }

  const NceTerms terms = nce_terms(k.dot(r_s.data(), r_t.data(), d), ws.logits, arc.weight);
  if (!std::isfinite(terms.loss) || grad == nullptr) return terms.loss;

  // dL/dr_s gathers every logit; each partner side only sees its own.
  ws.grad_rs.assign(d, 0.0);
  k.axpy(terms.d_positive, r_t.data(), ws.grad_rs.data(), d);
  for (std::size_t i = 0; i < K; ++i) {
    const double* r_k =
        context_negatives ? ws.blocks[i + 1].r_t().data() : e.row(ws.negatives[i]).data();
    k.axpy(terms.d_negative[i], r_k, ws.grad_rs.data(), d);
  }
  ws.grad_other.assign(d, 0.0);
  k.axpy(terms.d_positive, r_s.data(), ws.grad_other.data(), d);
  ws.blocks[0].backward(ws.grad_rs, ws.grad_other, ws.source_msg, ws.target_msg);

  auto sink = [grad](NodeId row, std::span<const double> g_row) { grad->add(row, g_row); };
  for (std::size_t i = 0; i < K; ++i) {
    std::fill(ws.grad_other.begin(), ws.grad_other.end(), 0.0);
    k.axpy(terms.d_negative[i], r_s.data(), ws.grad_other.data(), d);
    if (context_negatives) {
      ws.blocks[i + 1].backward({}, ws.grad_other, ws.source_msg, ws.negative_msgs[i]);
      ws.negative_msgs[i].emit_gradients(sink);
    } else {
      grad->add(ws.negatives[i], ws.grad_other);
    }
  }
  ws.source_msg.emit_gradients(sink);
  ws.target_msg.emit_gradients(sink);
  return terms.loss;
}

double exact_softmax_loss(const Embedding& e, const Graph& g, const Edge& edge,
                          std::size_t neighborhood, Variant variant, Rng& rng) {
  const std::size_t n = g.num_nodes();
  std::vector<double> logits(n);
  double target_logit = 0.0;

  if (variant == Variant::global || g.degree(edge.source) == 0) {
    for (std::size_t w = 0; w < n; ++w)
      logits[w] = simd::dot(e.row(edge.source), e.row(static_cast<NodeId>(w)));
    target_logit = logits[edge.target];
  } else {
    const auto ns = sample_neighborhood(g, edge.source, neighborhood, rng);
    const auto nt = sample_neighborhood(g, edge.target, neighborhood, rng);
    const BlockOutput positive = forward(e, ns, nt, 0.0, false, rng);
    target_logit = simd::dot(positive.r_s, positive.r_t);
    for (std::size_t w = 0; w < n; ++w) {
      const auto node = static_cast<NodeId>(w);
      if (g.degree(node) == 0) {
        logits[w] = simd::dot(positive.r_s, e.row(node));
        continue;
      }
      const auto nw = sample_neighborhood(g, node, neighborhood, rng);
      const BlockOutput block = forward(e, ns, nw, 0.0, false, rng);
      logits[w] = simd::dot(positive.r_s, block.r_t);
    }
  }
  const double top = *std::max_element(logits.begin(), logits.end());
  double total = 0.0;
  for (double x : logits) total += std::exp(x - top);
  const double log_partition = top + std::log(total);
  return -edge.weight * (target_logit - log_partition);
}

double score_pair(const Embedding& e, const Graph& g, NodeId u, NodeId v, std::size_t neighborhood,
                  std::size_t trials, Rng& rng, Variant variant) {
  if (variant == Variant::global || g.degree(u) == 0 || g.degree(v) == 0)
    return simd::dot(e.row(u), e.row(v));
  trials = std::max<std::size_t>(trials, 1);
  // With both neighborhoods fitting in one sample every trial is identical.
  if (g.degree(u) <= neighborhood && g.degree(v) <= neighborhood) trials = 1;

  NeighborhoodSample nu, nv;
  Message mu, mv;
  AttentionBlock block;
  double total = 0.0;
  for (std::size_t i = 0; i < trials; ++i) {
    sample_neighborhood(g, u, neighborhood, rng, nu);
    sample_neighborhood(g, v, neighborhood, rng, nv);
    mu.load(e, nu, 0.0, false, rng);
    mv.load(e, nv, 0.0, false, rng);
    block.forward(mu, mv);
    total += simd::dot(block.r_s(), block.r_t());
  }
  return total / static_cast<double>(trials);
}

}  // namespace goat
