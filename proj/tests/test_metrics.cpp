#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "linkpred/metrics.hpp"
#include "test_util.hpp"

using namespace linkpred;

namespace {

// Full-sort reference: threshold is the K-th entry of the descending-sorted
// negatives; positives must beat it strictly.
double hits_reference(std::vector<double> pos, std::vector<double> neg, int k) {
  if (static_cast<std::size_t>(k) > neg.size()) return 1.0;
  std::sort(neg.begin(), neg.end(), std::greater<double>());
  double threshold = neg[k - 1];
  std::size_t hits = 0;
  for (double p : pos)
    if (p > threshold) ++hits;
  return static_cast<double>(hits) / static_cast<double>(pos.size());
}

double mrr_reference(const std::vector<double>& pos,
                     const std::vector<std::vector<double>>& negs) {
  double total = 0.0;
  for (std::size_t i = 0; i < pos.size(); ++i) {
    std::vector<double> sorted = negs[i];
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());
    std::size_t rank = 1;
    for (double v : sorted)
      if (v >= pos[i]) ++rank;
    total += 1.0 / static_cast<double>(rank);
  }
  return total / static_cast<double>(pos.size());
}

}  // namespace

TEST_CASE("random_split: 70/10/20 of ten edges gives sizes (7,1,2)") {
  std::vector<Edge> edges;
  for (NodeId u = 0; u < 10; ++u) edges.push_back({u, static_cast<NodeId>(u + 10)});
  EvalSplit s = random_split(edges, 0.7, 0.1, 0.2, 42, 20);
  CHECK(s.train.size() == 7);
  CHECK(s.valid.size() == 1);
  CHECK(s.test.size() == 2);
  // partition: disjoint, union = edges
  std::vector<Edge> all = s.train;
  all.insert(all.end(), s.valid.begin(), s.valid.end());
  all.insert(all.end(), s.test.begin(), s.test.end());
  std::sort(all.begin(), all.end());
  std::vector<Edge> want = edges;
  std::sort(want.begin(), want.end());
  CHECK(all == want);
}

TEST_CASE("random_split: all-train ratios and determinism") {
  std::vector<Edge> edges{{0, 1}, {1, 2}, {2, 3}};
  EvalSplit s = random_split(edges, 1.0, 0.0, 0.0, 7, 4);
  CHECK(s.train.size() == 3);
  CHECK(s.test.empty());

  EvalSplit a = random_split(edges, 0.4, 0.3, 0.3, 99, 4);
  EvalSplit b = random_split(edges, 0.4, 0.3, 0.3, 99, 4);
  CHECK(a.train == b.train);
  CHECK(a.valid == b.valid);
  CHECK(a.test == b.test);

  CHECK_THROWS_AS(random_split(edges, 0.5, 0.2, 0.2, 1, 4),
                  std::invalid_argument);
}

TEST_CASE("hits_at_k examples") {
  CHECK(hits_at_k(std::vector<double>{0.9}, std::vector<double>{0.1, 0.2, 0.3},
                  1) == 1.0);
  // 2nd-largest negative is 0.2; 0.25 beats it
  CHECK(hits_at_k(std::vector<double>{0.25},
                  std::vector<double>{0.1, 0.2, 0.3}, 2) == 1.0);
  // K-th largest negative ties the positive: miss
  CHECK(hits_at_k(std::vector<double>{0.2},
                  std::vector<double>{0.3, 0.25, 0.2, 0.1}, 3) == 0.0);
  // fewer than K negatives: everything hits
  CHECK(hits_at_k(std::vector<double>{0.0}, std::vector<double>{0.5}, 5) == 1.0);
  CHECK_THROWS_AS(hits_at_k(std::vector<double>{0.1},
                            std::vector<double>{0.2}, 0),
                  std::invalid_argument);
}

TEST_CASE("mrr examples") {
  // positive always greatest
  CHECK(mrr(std::vector<double>{0.9, 0.8},
            {{0.1, 0.2}, {0.3}}) == 1.0);
  // one item below all four negatives: rank 5
  CHECK(mrr(std::vector<double>{0.05},
            {{0.1, 0.2, 0.3, 0.4}}) == doctest::Approx(0.2));
  // tie with the single negative: rank 2
  CHECK(mrr(std::vector<double>{0.5}, {{0.5}}) == doctest::Approx(0.5));
  CHECK_THROWS_AS(mrr(std::vector<double>{}, {}), std::invalid_argument);
}

TEST_CASE("oracle equivalence on random score sets with ties") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0, 1);
  std::uniform_int_distribution<int> grid(0, 9);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t np = 1 + rng() % 20, nn = 1 + rng() % 50;
    bool coarse = trial % 2 == 0;  // coarse grid forces ties
    std::vector<double> pos(np), neg(nn);
    for (auto& x : pos) x = coarse ? grid(rng) * 0.1 : u(rng);
    for (auto& x : neg) x = coarse ? grid(rng) * 0.1 : u(rng);
    int k = 1 + static_cast<int>(rng() % (nn + 2));
    CHECK(hits_at_k(pos, neg, k) == hits_reference(pos, neg, k));

    std::vector<std::vector<double>> negs(np);
    for (auto& v : negs) {
      v.resize(1 + rng() % 10);
      for (auto& x : v) x = coarse ? grid(rng) * 0.1 : u(rng);
    }
    CHECK(mrr(pos, negs) == mrr_reference(pos, negs));
  }
}

TEST_CASE("property: raising a positive score never lowers either metric") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> pos(5), neg(30);
    for (auto& x : pos) x = u(rng);
    for (auto& x : neg) x = u(rng);
    int k = 1 + static_cast<int>(rng() % 10);
    double before = hits_at_k(pos, neg, k);
    std::size_t idx = rng() % pos.size();
    pos[idx] += u(rng);
    CHECK(hits_at_k(pos, neg, k) >= before);

    std::vector<std::vector<double>> negs(pos.size(), neg);
    std::vector<double> pos2 = pos;
    double m_before = mrr(pos2, negs);
    pos2[idx] += u(rng);
    CHECK(mrr(pos2, negs) >= m_before);
  }
}

TEST_CASE("property: strictly increasing transforms leave metrics unchanged") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-2, 2);
  auto transform = [](double x) { return std::exp(0.7 * x) + 3.0; };
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> pos(6), neg(25);
    for (auto& x : pos) x = u(rng);
    for (auto& x : neg) x = u(rng);
    int k = 1 + static_cast<int>(rng() % 8);
    std::vector<double> tpos = pos, tneg = neg;
    for (auto& x : tpos) x = transform(x);
    for (auto& x : tneg) x = transform(x);
    CHECK(hits_at_k(pos, neg, k) == hits_at_k(tpos, tneg, k));

    std::vector<std::vector<double>> negs(pos.size(), neg);
    std::vector<std::vector<double>> tnegs(pos.size(), tneg);
    CHECK(mrr(pos, negs) == mrr(tpos, tnegs));
  }
}
