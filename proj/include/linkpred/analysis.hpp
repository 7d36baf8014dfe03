#pragma once

#include <cstddef>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "linkpred/graph.hpp"
#include "linkpred/metrics.hpp"
#include "linkpred/pairwise.hpp"

namespace linkpred {

/// Raw integer-bucket histogram of per-link common-neighbor counts.
struct CnHistogram {
  std::vector<std::pair<std::size_t, std::size_t>> buckets;  // (count, freq)
  std::string label;
  std::size_t population = 0;

  void write_csv(std::ostream& os) const {
    os << "cn_count,frequency\n";
    for (auto [count, freq] : buckets) os << count << ',' << freq << '\n';
  }
};

inline CnHistogram cn_distribution(const Graph& g_input,
                                   std::span<const Edge> links,
                                   std::string label = "") {
  std::map<std::size_t, std::size_t> freq;
  for (auto [i, j] : links) ++freq[g_input.common_neighbors(i, j).size()];
  CnHistogram h;
  h.label = std::move(label);
  h.population = links.size();
  for (auto [count, f] : freq) h.buckets.push_back({count, f});
  return h;
}

/// CN Hits@K of the train and test positives against the split's negative
/// pool, under the incomplete (train-edges-only) and complete
/// (train+valid+test) graphs.
struct DegradationReport {
  int k = 0;
  double train_incomplete = 0.0, train_complete = 0.0;
  double test_incomplete = 0.0, test_complete = 0.0;

  void write_csv(std::ostream& os) const {
    os << "population,graph,hits_at_" << k << "\n";
    os << "train,incomplete," << train_incomplete << '\n';
    os << "train,complete," << train_complete << '\n';
    os << "test,incomplete," << test_incomplete << '\n';
    os << "test,complete," << test_complete << '\n';
  }
};

inline DegradationReport degradation_report(const EvalSplit& split) {
  DegradationReport report;
  report.k = split.metric.k;
  if (split.test.empty() && split.train.empty()) return report;
  Graph incomplete = Graph::from_edge_list(split.train, split.n);
  std::vector<Edge> all = split.train;
  all.insert(all.end(), split.valid.begin(), split.valid.end());
  all.insert(all.end(), split.test.begin(), split.test.end());
  Graph complete = Graph::from_edge_list(all, split.n);

  auto cn_scores = [](const Graph& g, std::span<const Edge> links) {
    std::vector<double> out;
    out.reserve(links.size());
    for (auto [i, j] : links)
      out.push_back(heuristic_score(g, i, j, Heuristic::CN));
    return out;
  };
  std::vector<double> neg_incomplete =
      cn_scores(incomplete, split.shared_negatives);
  std::vector<double> neg_complete = cn_scores(complete, split.shared_negatives);
  auto hits = [&](const Graph& g, std::span<const double> neg,
                  std::span<const Edge> links) {
    if (links.empty() || neg.empty()) return 0.0;
    return hits_at_k(cn_scores(g, links), neg, split.metric.k);
  };
  report.train_incomplete = hits(incomplete, neg_incomplete, split.train);
  report.train_complete = hits(complete, neg_complete, split.train);
  report.test_incomplete = hits(incomplete, neg_incomplete, split.test);
  report.test_complete = hits(complete, neg_complete, split.test);
  return report;
}

}  // namespace linkpred
