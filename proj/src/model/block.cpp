#include "goat/block.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "goat/error.hpp"
#include "goat/kernels.hpp"

namespace goat {
namespace {

// Numerically stable softmax of `logits` into `out`.
void softmax(std::span<const double> logits, std::span<double> out) {
  const double top = *std::max_element(logits.begin(), logits.end());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - top);
    total += out[i];
  }
  for (double& x : out) x /= total;
}

}  // namespace

void Message::load(const Embedding& e, const NeighborhoodSample& sample, double dropout,
                   bool training, Rng& rng) {
  dim_ = e.dim();
  ids_.assign(sample.ids.begin(), sample.ids.begin() + static_cast<std::ptrdiff_t>(sample.valid));
  values_.resize(ids_.size() * dim_);
  grads_.assign(ids_.size() * dim_, 0.0);
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    auto src = e.row(ids_[i]);
    std::copy(src.begin(), src.end(), values_.begin() + static_cast<std::ptrdiff_t>(i * dim_));
  }
  mask_.clear();
  if (training && dropout > 0.0) {
    const double keep = 1.0 - dropout;
    const double scale = 1.0 / keep;
    // Keep decisions come from 16-bit slices of each 64-bit draw, so the
    // keep probability is resolved to 1/65536.
    const auto threshold = static_cast<std::uint32_t>(std::lround(keep * 65536.0));
    mask_.resize(values_.size());
    for (std::size_t i = 0; i < mask_.size(); i += 4) {
      std::uint64_t bits = rng();
      const std::size_t end = std::min(mask_.size(), i + 4);
      for (std::size_t j = i; j < end; ++j, bits >>= 16)
        mask_[j] = scale * static_cast<double>((bits & 0xffffu) < threshold);
    }
    simd::active().mul(values_.data(), mask_.data(), values_.data(), values_.size());
  }
}

void Message::clear_grad() { std::fill(grads_.begin(), grads_.end(), 0.0); }

void AttentionBlock::forward(const Message& s, const Message& t) {
  dim_ = s.dim();
  n_s_ = s.count();
  n_t_ = t.count();
  if (n_s_ == 0 || n_t_ == 0) throw ValidationError("attention block needs non-empty messages");
  if (t.dim() != dim_) throw ValidationError("message dimensions differ");
  const auto& k = simd::active();

  align_.resize(n_s_ * n_t_);
  for (std::size_t i = 0; i < n_s_; ++i)
    k.dot_rows(s.row(i), t.rows(), dim_, n_t_, dim_, align_.data() + i * n_t_);

  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  pool_s_.assign(n_s_, kNegInf);
  pool_t_.assign(n_t_, kNegInf);
  arg_s_.assign(n_s_, 0);
  arg_t_.assign(n_t_, 0);
  for (std::size_t i = 0; i < n_s_; ++i) {
    const double* a_row = align_.data() + i * n_t_;
    for (std::size_t j = 0; j < n_t_; ++j) {
      // Strict comparisons keep the lowest index on ties.
      if (a_row[j] > pool_s_[i]) {
        pool_s_[i] = a_row[j];
        arg_s_[i] = j;
      }
      if (a_row[j] > pool_t_[j]) {
        pool_t_[j] = a_row[j];
        arg_t_[j] = i;
      }
    }
  }

  p_s_.resize(n_s_);
  p_t_.resize(n_t_);
  softmax(pool_s_, p_s_);
  softmax(pool_t_, p_t_);

  r_s_.assign(dim_, 0.0);
  r_t_.assign(dim_, 0.0);
  for (std::size_t i = 0; i < n_s_; ++i) k.axpy(p_s_[i], s.row(i), r_s_.data(), dim_);
  for (std::size_t j = 0; j < n_t_; ++j) k.axpy(p_t_[j], t.row(j), r_t_.data(), dim_);
}

void AttentionBlock::backward(std::span<const double> grad_rs, std::span<const double> grad_rt,
                              Message& s, Message& t) {
  const auto& k = simd::active();
  // Pooled-logit gradients through r = M softmax(pool).
  auto side = [&](std::span<const double> grad_r, Message& m, std::span<const double> p,
                  std::size_t count, std::vector<double>& d_pool) {
    d_pool.assign(count, 0.0);
    if (grad_r.empty()) return;
    double mean = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
      k.axpy(p[i], grad_r.data(), m.grad(i), dim_);
      d_pool[i] = k.dot(m.row(i), grad_r.data(), dim_);
      mean += p[i] * d_pool[i];
    }
    for (std::size_t i = 0; i < count; ++i) d_pool[i] = p[i] * (d_pool[i] - mean);
  };

  side(grad_rs, s, p_s_, n_s_, d_pool_s_);
  side(grad_rt, t, p_t_, n_t_, d_pool_t_);
  const std::vector<double>& d_pool_s = d_pool_s_;
  const std::vector<double>& d_pool_t = d_pool_t_;

  // Max-pooling routes each pooled gradient to one alignment entry A[i][j],
  // whose partials are T_j (w.r.t. S_i) and S_i (w.r.t. T_j).
  if (!grad_rs.empty()) {
    for (std::size_t i = 0; i < n_s_; ++i) {
      const double g = d_pool_s[i];
      if (g == 0.0) continue;
      const std::size_t j = arg_s_[i];
      k.axpy(g, t.row(j), s.grad(i), dim_);
      k.axpy(g, s.row(i), t.grad(j), dim_);
    }
  }
  if (!grad_rt.empty()) {
    for (std::size_t j = 0; j < n_t_; ++j) {
      const double g = d_pool_t[j];
      if (g == 0.0) continue;
      const std::size_t i = arg_t_[j];
      k.axpy(g, t.row(j), s.grad(i), dim_);
      k.axpy(g, s.row(i), t.grad(j), dim_);
    }
  }
}

BlockOutput forward(const Embedding& e, const NeighborhoodSample& ns, const NeighborhoodSample& nt,
                    double dropout, bool training, Rng& rng) {
  if (ns.valid == 0 || nt.valid == 0)
    throw ValidationError("neighborhood sample has no real neighbor");
  Message s, t;
  s.load(e, ns, dropout, training, rng);
  t.load(e, nt, dropout, training, rng);
  AttentionBlock block;
  block.forward(s, t);

  BlockOutput out;
  out.r_s.assign(block.r_s().begin(), block.r_s().end());
  out.r_t.assign(block.r_t().begin(), block.r_t().end());
  out.a_s.assign(ns.size(), 0.0);
  out.a_t.assign(nt.size(), 0.0);
  std::copy(block.attention_s().begin(), block.attention_s().end(), out.a_s.begin());
  std::copy(block.attention_t().begin(), block.attention_t().end(), out.a_t.begin());
  out.alignment.assign(ns.size() * nt.size(), 0.0);
  for (std::size_t i = 0; i < ns.valid; ++i)
    for (std::size_t j = 0; j < nt.valid; ++j)
      out.alignment[i * nt.size() + j] = block.alignment()[i * nt.valid + j];
  return out;
}

}  // namespace goat
