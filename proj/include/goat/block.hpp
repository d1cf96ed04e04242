#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "goat/embedding.hpp"
#include "goat/random.hpp"
#include "goat/sampling.hpp"

namespace goat {

/// The message one gossiper sends: the global embeddings of its sampled
/// neighbors (real slots only), after optional inverted dropout, together
/// with a gradient buffer of the same shape.
class Message {
 public:
  /// With `training` and dropout > 0 every entry is kept with probability
  /// 1 - dropout and scaled by 1 / (1 - dropout).
  void load(const Embedding& e, const NeighborhoodSample& sample, double dropout, bool training,
            Rng& rng);

  std::size_t count() const noexcept { return ids_.size(); }
  std::size_t dim() const noexcept { return dim_; }
  NodeId id(std::size_t i) const noexcept { return ids_[i]; }
  std::span<const NodeId> ids() const noexcept { return ids_; }
  const double* row(std::size_t i) const noexcept { return values_.data() + i * dim_; }
  const double* rows() const noexcept { return values_.data(); }
  double* grad(std::size_t i) noexcept { return grads_.data() + i * dim_; }
  const double* grad(std::size_t i) const noexcept { return grads_.data() + i * dim_; }

  void clear_grad();

  /// Calls sink(node, dL/dE_node) for every slot, with the dropout mask
  /// folded in. Nodes appearing in several slots are reported once per slot.
  template <class Sink>
  void emit_gradients(Sink&& sink) {
    for (std::size_t i = 0; i < ids_.size(); ++i) {
      double* g = grad(i);
      if (!mask_.empty()) {
        const double* m = mask_.data() + i * dim_;
        for (std::size_t k = 0; k < dim_; ++k) g[k] *= m[k];
      }
      sink(ids_[i], std::span<const double>(g, dim_));
    }
  }

 private:
  std::size_t dim_ = 0;
  std::vector<NodeId> ids_;
  std::vector<double> values_;
  std::vector<double> mask_;
  std::vector<double> grads_;
};

/// Mutual attention between two messages S (source side) and T (target
/// side): A = S^T T, a_s[i] = max_j A[i][j], a_t[j] = max_i A[i][j],
/// r_s = S softmax(a_s), r_t = T softmax(a_t). Max-pooling ties resolve to
/// the lowest index, which is also where the subgradient is routed.
class AttentionBlock {
 public:
  /// Messages must be non-empty and share the embedding dimension. The block
  /// keeps no reference to them.
  void forward(const Message& s, const Message& t);

  std::size_t source_count() const noexcept { return n_s_; }
  std::size_t target_count() const noexcept { return n_t_; }

  std::span<const double> r_s() const noexcept { return r_s_; }
  std::span<const double> r_t() const noexcept { return r_t_; }
  /// Normalized attention over the real slots.
  std::span<const double> attention_s() const noexcept { return p_s_; }
  std::span<const double> attention_t() const noexcept { return p_t_; }
  /// n_s x n_t row-major alignment scores.
  std::span<const double> alignment() const noexcept { return align_; }
  std::span<const std::size_t> argmax_s() const noexcept { return arg_s_; }
  std::span<const std::size_t> argmax_t() const noexcept { return arg_t_; }

  /// Accumulates dL/dS and dL/dT into the messages' gradient buffers given
  /// dL/dr_s and dL/dr_t. An empty span means a zero upstream gradient.
  /// `s` and `t` must be the messages passed to forward().
  void backward(std::span<const double> grad_rs, std::span<const double> grad_rt, Message& s,
                Message& t);

 private:
  std::size_t dim_ = 0, n_s_ = 0, n_t_ = 0;
  std::vector<double> align_;
  std::vector<std::size_t> arg_s_, arg_t_;
  std::vector<double> pool_s_, pool_t_;
  std::vector<double> p_s_, p_t_;
  std::vector<double> r_s_, r_t_;
  std::vector<double> d_pool_s_, d_pool_t_;
};

/// Block result expanded to the full sample length: padded slots carry zero
/// attention and zero alignment.
struct BlockOutput {
  std::vector<double> r_s, r_t;
  std::vector<double> a_s, a_t;
  std::vector<double> alignment;  // N_s x N_t row-major
};

/// Single forward pass on fresh messages. Throws ValidationError when a
/// sample has no real neighbor.
BlockOutput forward(const Embedding& e, const NeighborhoodSample& ns, const NeighborhoodSample& nt,
                    double dropout, bool training, Rng& rng);

}  // namespace goat
