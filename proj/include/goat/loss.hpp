#pragma once

#include <span>
#include <vector>

namespace goat {

// Logits are clamped to this range before exponentiation.
inline constexpr double kLogitClamp = 30.0;

double sigmoid(double x) noexcept;
/// log(sigmoid(x)) via the softplus identity; finite for all finite x.
double log_sigmoid(double x) noexcept;

/// Skip-gram negative-sampling loss for one edge and its derivatives with
/// respect to each logit (r_s . r_t for the positive, r_s . r_k for the
/// negatives).
struct NceTerms {
  double loss = 0.0;
  double d_positive = 0.0;
  std::vector<double> d_negative;
};

NceTerms nce_terms(double positive_logit, std::span<const double> negative_logits, double weight);

/// -w [log sigmoid(r_s . r_t) + sum_k log sigmoid(-r_s . r_k)]
double nce_loss(std::span<const double> r_s, std::span<const double> r_t,
                std::span<const std::vector<double>> r_negatives, double weight);

}  // namespace goat
