#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace goat {

/// Scores of held-out true edges (pos) and of sampled non-edges (neg).
struct RankedScores {
  std::vector<double> pos;
  std::vector<double> neg;
};

/// Probability that a random positive outscores a random negative, ties
/// counting one half. O((P + N) log(P + N)) via average ranks.
/// Throws ValidationError when either side is empty or a score is not finite.
double auc(const RankedScores& scores);

/// Area under the precision-recall sweep: sum_k (R_k - R_{k-1}) P_k over
/// descending distinct score thresholds, positives being relevant.
double average_precision(const RankedScores& scores);

/// Mutual information of two labelings (natural log) and entropies.
double mutual_information(std::span<const int> a, std::span<const int> b);
double entropy(std::span<const int> labels);

/// I(y, yhat) / sqrt(H(y) H(yhat)). When either entropy is zero the result
/// is 1 if the two partitions coincide and 0 otherwise.
double nmi(std::span<const int> y, std::span<const int> yhat);

/// (I - E[I]) / (mean(H(y), H(yhat)) - E[I]) with the hypergeometric
/// expected mutual information under the permutation model.
double ami(std::span<const int> y, std::span<const int> yhat);

/// E[I] for two labelings with the given cluster sizes.
double expected_mutual_information(std::span<const std::size_t> a_sizes,
                                   std::span<const std::size_t> b_sizes, std::size_t n);

}  // namespace goat
