#include "goat/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "goat/error.hpp"

namespace goat {
namespace {

void check_scores(const RankedScores& s) {
  if (s.pos.empty() || s.neg.empty())
    throw ValidationError("ranking metrics need at least one positive and one negative");
  auto finite = [](double x) { return std::isfinite(x); };
  if (!std::all_of(s.pos.begin(), s.pos.end(), finite) ||
      !std::all_of(s.neg.begin(), s.neg.end(), finite))
    throw ValidationError("ranking scores must be finite");
}

struct Scored {
  double score;
  bool positive;
};

std::vector<Scored> merged(const RankedScores& s) {
  std::vector<Scored> all;
  all.reserve(s.pos.size() + s.neg.size());
  for (double x : s.pos) all.push_back({x, true});
  for (double x : s.neg) all.push_back({x, false});
  return all;
}

void check_labels(std::span<const int> y, std::span<const int> yhat) {
  if (y.size() != yhat.size())
    throw ValidationError("label vectors differ in length (" + std::to_string(y.size()) + " vs " +
                          std::to_string(yhat.size()) + ")");
  if (y.empty()) throw ValidationError("label vectors are empty");
}

std::vector<std::size_t> cluster_sizes(std::span<const int> labels) {
  std::map<int, std::size_t> counts;
  for (int l : labels) ++counts[l];
  std::vector<std::size_t> sizes;
  for (auto [label, count] : counts) sizes.push_back(count);
  return sizes;
}

double entropy_of_sizes(std::span<const std::size_t> sizes, std::size_t n) {
  double h = 0.0;
  for (std::size_t c : sizes) {
    const double p = static_cast<double>(c) / static_cast<double>(n);
    if (p > 0) h -= p * std::log(p);
  }
  return h;
}

bool same_partition(std::span<const int> a, std::span<const int> b) {
  std::map<int, int> forward, backward;
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto f = forward.try_emplace(a[i], b[i]).first;
    auto r = backward.try_emplace(b[i], a[i]).first;
    if (f->second != b[i] || r->second != a[i]) return false;
  }
  return true;
}

}  // namespace

double auc(const RankedScores& scores) {
  check_scores(scores);
  auto all = merged(scores);
  std::sort(all.begin(), all.end(), [](const Scored& a, const Scored& b) { return a.score < b.score; });
  // Mann-Whitney U from average ranks of the positives.
  double rank_sum = 0.0;
  std::size_t i = 0;
  while (i < all.size()) {
    std::size_t j = i;
    while (j < all.size() && all[j].score == all[i].score) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // ranks i+1 .. j
    for (std::size_t k = i; k < j; ++k)
      if (all[k].positive) rank_sum += avg_rank;
    i = j;
  }
  const double p = static_cast<double>(scores.pos.size());
  const double q = static_cast<double>(scores.neg.size());
  return (rank_sum - p * (p + 1.0) / 2.0) / (p * q);
}

double average_precision(const RankedScores& scores) {
  check_scores(scores);
  auto all = merged(scores);
  std::sort(all.begin(), all.end(), [](const Scored& a, const Scored& b) { return a.score > b.score; });
  const double total_pos = static_cast<double>(scores.pos.size());
  double ap = 0.0, prev_recall = 0.0;
  std::size_t tp = 0, seen = 0, i = 0;
  while (i < all.size()) {
    std::size_t j = i;
    while (j < all.size() && all[j].score == all[i].score) {
      if (all[j].positive) ++tp;
      ++j;
    }
    seen = j;
    const double recall = static_cast<double>(tp) / total_pos;
    const double precision = static_cast<double>(tp) / static_cast<double>(seen);
    ap += (recall - prev_recall) * precision;
    prev_recall = recall;
    i = j;
  }
  return ap;
}

double entropy(std::span<const int> labels) {
  if (labels.empty()) return 0.0;
  auto sizes = cluster_sizes(labels);
  return entropy_of_sizes(sizes, labels.size());
}

double mutual_information(std::span<const int> a, std::span<const int> b) {
  check_labels(a, b);
  std::map<std::pair<int, int>, std::size_t> joint;
  std::map<int, std::size_t> ca, cb;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++joint[{a[i], b[i]}];
    ++ca[a[i]];
    ++cb[b[i]];
  }
  const double n = static_cast<double>(a.size());
  double mi = 0.0;
  for (auto [key, count] : joint) {
    const double nij = static_cast<double>(count);
    mi += nij / n *
          std::log(n * nij / (static_cast<double>(ca[key.first]) * static_cast<double>(cb[key.second])));
  }
  return std::max(mi, 0.0);
}

double nmi(std::span<const int> y, std::span<const int> yhat) {
  check_labels(y, yhat);
  const double hy = entropy(y), hyhat = entropy(yhat);
  if (hy == 0.0 || hyhat == 0.0) return same_partition(y, yhat) ? 1.0 : 0.0;
  return mutual_information(y, yhat) / std::sqrt(hy * hyhat);
}

double expected_mutual_information(std::span<const std::size_t> a_sizes,
                                   std::span<const std::size_t> b_sizes, std::size_t n) {
  const double N = static_cast<double>(n);
  const double lg_n = std::lgamma(N + 1.0);
  double emi = 0.0;
  for (std::size_t ai : a_sizes) {
    for (std::size_t bj : b_sizes) {
      const double a = static_cast<double>(ai), b = static_cast<double>(bj);
      const std::size_t lo = std::max<std::size_t>(1, ai + bj > n ? ai + bj - n : 0);
      const std::size_t hi = std::min(ai, bj);
      // Hypergeometric probability of cell count nij given the margins.
      const double base = std::lgamma(a + 1) + std::lgamma(b + 1) + std::lgamma(N - a + 1) +
                          std::lgamma(N - b + 1) - lg_n;
      for (std::size_t nij = lo; nij <= hi; ++nij) {
        const double x = static_cast<double>(nij);
        const double log_p = base - std::lgamma(x + 1) - std::lgamma(a - x + 1) -
                             std::lgamma(b - x + 1) - std::lgamma(N - a - b + x + 1);
        emi += x / N * std::log(N * x / (a * b)) * std::exp(log_p);
      }
    }
  }
  return emi;
}

double ami(std::span<const int> y, std::span<const int> yhat) {
  check_labels(y, yhat);
  const auto ys = cluster_sizes(y), yhs = cluster_sizes(yhat);
  // Both labelings trivial (one cluster each, or every point alone).
  if ((ys.size() == 1 && yhs.size() == 1) ||
      (ys.size() == y.size() && yhs.size() == yhat.size()))
    return 1.0;
  const double mi = mutual_information(y, yhat);
  const double emi = expected_mutual_information(ys, yhs, y.size());
  const double mean_h = 0.5 * (entropy_of_sizes(ys, y.size()) + entropy_of_sizes(yhs, y.size()));
  double denom = mean_h - emi;
  const double eps = std::numeric_limits<double>::epsilon();
  if (std::abs(denom) < eps) denom = denom < 0 ? -eps : eps;
  return (mi - emi) / denom;
}

}  // namespace goat
