#include "goat/loss.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "goat/kernels.hpp"

namespace goat {

double sigmoid(double x) noexcept {
  x = std::clamp(x, -kLogitClamp, kLogitClamp);
  return 1.0 / (1.0 + std::exp(-x));
}

double log_sigmoid(double x) noexcept {
  // -softplus(-x) = -(max(-x, 0) + log1p(exp(-|x|)))
  return -(std::max(-x, 0.0) + std::log1p(std::exp(-std::abs(x))));
}

NceTerms nce_terms(double positive_logit, std::span<const double> negative_logits, double weight) {
  NceTerms terms;
  terms.loss = -log_sigmoid(positive_logit);
  terms.d_positive = -weight * sigmoid(-positive_logit);
  terms.d_negative.resize(negative_logits.size());
  for (std::size_t k = 0; k < negative_logits.size(); ++k) {
    terms.loss -= log_sigmoid(-negative_logits[k]);
    terms.d_negative[k] = weight * sigmoid(negative_logits[k]);
  }
  terms.loss *= weight;
  return terms;
}

double nce_loss(std::span<const double> r_s, std::span<const double> r_t,
                std::span<const std::vector<double>> r_negatives, double weight) {
  std::vector<double> logits;
  logits.reserve(r_negatives.size());
  for (const auto& r : r_negatives) logits.push_back(simd::dot(r_s, r));
  return nce_terms(simd::dot(r_s, r_t), logits, weight).loss;
}

}  // namespace goat
