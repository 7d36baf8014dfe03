#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "linkpred/graph.hpp"

namespace linkpred {

enum class MetricKind { HitsAtK, Mrr };

struct MetricSpec {
  MetricKind kind = MetricKind::HitsAtK;
  int k = 100;  // only for HitsAtK
};

/// Train/valid/test positives plus sampled negatives. Hits@K ranks against
/// the shared pool; MRR uses per-positive lists when they are populated.
struct EvalSplit {
  std::size_t n = 0;
  std::vector<Edge> train, valid, test;
  std::vector<Edge> shared_negatives;  // disjoint from the full edge set
  std::vector<std::vector<Edge>> per_positive_negatives;  // aligned with test
  MetricSpec metric;
};

/// Seeded shuffle and partition. Sizes are floor(ratio * m) for train and
/// valid; the remainder is test.
inline EvalSplit random_split(const std::vector<Edge>& edges, double r_train,
                              double r_valid, double r_test,
                              std::uint64_t seed, std::size_t n) {
  if (std::abs(r_train + r_valid + r_test - 1.0) > 1e-9)
    throw std::invalid_argument("random_split: ratios must sum to 1");
  if (r_train < 0 || r_valid < 0 || r_test < 0)
    throw std::invalid_argument("random_split: negative ratio");
  std::vector<Edge> shuffled = edges;
  std::mt19937_64 rng(seed);
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  EvalSplit split;
  split.n = n;
  const std::size_t m = shuffled.size();
  std::size_t n_train = static_cast<std::size_t>(
      std::floor(r_train * static_cast<double>(m) + 1e-12));
  std::size_t n_valid = static_cast<std::size_t>(
      std::floor(r_valid * static_cast<double>(m) + 1e-12));
  if (n_train + n_valid > m) n_valid = m - n_train;
  split.train.assign(shuffled.begin(), shuffled.begin() + n_train);
  split.valid.assign(shuffled.begin() + n_train,
                     shuffled.begin() + n_train + n_valid);
  split.test.assign(shuffled.begin() + n_train + n_valid, shuffled.end());
  return split;
}

/// Fraction of positives scoring strictly above the K-th largest negative.
/// Fewer than K negatives means every positive counts; ties are misses.
inline double hits_at_k(std::span<const double> pos_scores,
                        std::span<const double> neg_scores, int k) {
  if (k < 1) throw std::invalid_argument("hits_at_k: K >= 1");
  if (pos_scores.empty() || neg_scores.empty())
    throw std::invalid_argument("hits_at_k: empty score list");
  if (static_cast<std::size_t>(k) > neg_scores.size()) return 1.0;
  std::vector<double> neg(neg_scores.begin(), neg_scores.end());
  std::nth_element(neg.begin(), neg.begin() + (k - 1), neg.end(),
                   std::greater<double>());
  double threshold = neg[k - 1];
  std::size_t hits = 0;
  for (double p : pos_scores)
    if (p > threshold) ++hits;
  return static_cast<double>(hits) / static_cast<double>(pos_scores.size());
}

/// Mean reciprocal rank; each positive is ranked against its own negative
/// list, rank = 1 + |{negatives with score >= positive}| (pessimistic ties).
inline double mrr(std::span<const double> pos_score_per_item,
                  const std::vector<std::vector<double>>& neg_scores_per_item) {
  if (pos_score_per_item.empty())
    throw std::invalid_argument("mrr: empty input");
  if (pos_score_per_item.size() != neg_scores_per_item.size())
    throw std::invalid_argument("mrr: misaligned lists");
  double total = 0.0;
  for (std::size_t i = 0; i < pos_score_per_item.size(); ++i) {
    std::size_t rank = 1;
    for (double ns : neg_scores_per_item[i])
      if (ns >= pos_score_per_item[i]) ++rank;
    total += 1.0 / static_cast<double>(rank);
  }
  return total / static_cast<double>(pos_score_per_item.size());
}

}  // namespace linkpred
