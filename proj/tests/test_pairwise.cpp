#include <doctest.h>

#include <cmath>
#include <random>

#include "linkpred/pairwise.hpp"
#include "test_util.hpp"

using namespace linkpred;
using testutil::DenseAdj;

namespace {

// Brute-force heuristic oracle over the dense adjacency.
double dense_heuristic(const DenseAdj& d, NodeId i, NodeId j, Heuristic kind) {
  double s = 0.0;
  for (std::size_t u = 0; u < d.n; ++u) {
    if (!(d.at(i, u) > 0.0 && d.at(j, u) > 0.0)) continue;
    switch (kind) {
      case Heuristic::CN: s += 1.0; break;
      case Heuristic::RA: s += 1.0 / static_cast<double>(d.degree(u)); break;
      case Heuristic::AA: s += 1.0 / std::log(static_cast<double>(d.degree(u))); break;
    }
  }
  return s;
}

}  // namespace

TEST_CASE("heuristic_score on G1 (0,3)") {
  Graph g = testutil::g1();
  DenseAdj d = DenseAdj::from_edges(testutil::g1_edges(), 5);
  CHECK(heuristic_score(g, 0, 3, Heuristic::CN) == 2.0);
  CHECK(heuristic_score(g, 0, 3, Heuristic::RA) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(heuristic_score(g, 0, 3, Heuristic::AA) ==
        doctest::Approx(2.0 / std::log(3.0)).epsilon(1e-12));
  for (auto kind : {Heuristic::CN, Heuristic::RA, Heuristic::AA})
    CHECK(heuristic_score(g, 0, 3, kind) ==
          doctest::Approx(dense_heuristic(d, 0, 3, kind)).epsilon(1e-14));
}

TEST_CASE("general_pairwise presets reduce to the direct heuristics") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t n = 5 + rng() % 46;  // n <= 50
    double p = (trial % 3 == 0) ? 0.1 : (trial % 3 == 1 ? 0.3 : 0.5);
    Graph g = Graph::from_edge_list(testutil::random_gnp(n, p, rng), n);
    std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(n - 1));
    for (int q = 0; q < 30; ++q) {
      NodeId i = pick(rng), j = pick(rng);
      if (i == j) continue;  // RA/AA denominators assume distinct endpoints
      double cn = general_pairwise(g, i, j, PairwiseConfig::cn_preset());
      CHECK(cn == heuristic_score(g, i, j, Heuristic::CN));
      double ra = general_pairwise(g, i, j, PairwiseConfig::ra_preset());
      double ra_direct = heuristic_score(g, i, j, Heuristic::RA);
      CHECK(testutil::rel_err(ra, ra_direct) < 1e-12);
      double aa = general_pairwise(g, i, j, PairwiseConfig::aa_preset());
      double aa_direct = heuristic_score(g, i, j, Heuristic::AA);
      CHECK(testutil::rel_err(aa, aa_direct) < 1e-12);
    }
  }
}

TEST_CASE("general_pairwise with i == j counts the degree") {
  Graph g = testutil::g1();
  // intersection of N(i) with itself under constant f, g
  CHECK(general_pairwise(g, 1, 1, PairwiseConfig::cn_preset()) ==
        static_cast<double>(g.degree(1)));
}

TEST_CASE("general_pairwise difference operators drop the absent g-factor") {
  Graph g = testutil::g1();
  PairwiseConfig cfg;
  cfg.set_op = SetOp::LeftDifference;
  cfg.weight_fn = WeightFn::RawWeight;
  // N(1) - N(2) = {2}; only g(A_{1,2}) = 1.0 applies, f = 1
  CHECK(general_pairwise(g, 1, 2, cfg) == 1.0);
  cfg.set_op = SetOp::RightDifference;
  // N(2) - N(1) = {1}
  CHECK(general_pairwise(g, 1, 2, cfg) == 1.0);
}

TEST_CASE("general_pairwise validates config") {
  Graph g = testutil::g1();
  PairwiseConfig bad;
  bad.left_l1 = 0;
  CHECK_THROWS_AS(general_pairwise(g, 0, 1, bad), std::invalid_argument);
  PairwiseConfig missing;
  missing.node_fn = NodeFn::Custom;
  CHECK_THROWS_AS(general_pairwise(g, 0, 1, missing), std::invalid_argument);
}

TEST_CASE("neo_gnn_feature reduces to CN at l=1") {
  Graph g = testutil::g1();
  NeoGnnConfig cfg;
  cfg.max_hop = 1;
  cfg.beta = 0.77;
  CHECK(neo_gnn_feature(g, 0, 3, cfg) ==
        heuristic_score(g, 0, 3, Heuristic::CN));
}

TEST_CASE("neo_gnn_feature matches dense double-sum oracle") {
  // z_{l1,l2} enumerated over the dense powers of A.
  auto oracle = [](const DenseAdj& d, NodeId i, NodeId j, int l, double beta) {
    std::vector<DenseAdj> pw;
    for (int e = 1; e <= l; ++e) pw.push_back(d.power(e));
    double s = 0.0;
    for (int l1 = 1; l1 <= l; ++l1)
      for (int l2 = 1; l2 <= l; ++l2) {
        double z = 0.0;
        for (std::size_t u = 0; u < d.n; ++u) {
          // diagonal walk counts are not neighborhood entries
          double wi = u == i ? 0.0 : pw[l1 - 1].at(i, u);
          double wj = u == j ? 0.0 : pw[l2 - 1].at(j, u);
          if (wi > 0.0 && wj > 0.0) z += wi * wj;
        }
        int e = l1 + l2 - 2;
        s += (e == 0 ? 1.0 : std::pow(beta, e)) * z;
      }
    return s;
  };

  Graph g = testutil::g1();
  DenseAdj d = DenseAdj::from_edges(testutil::g1_edges(), 5);
  NeoGnnConfig cfg;
  cfg.max_hop = 2;
  cfg.beta = 0.5;
  double got = neo_gnn_feature(g, 0, 4, cfg);
  CHECK(got == doctest::Approx(oracle(d, 0, 4, 2, 0.5)).epsilon(1e-12));
  CHECK(got == doctest::Approx(2.5).epsilon(1e-12));  // frozen from the oracle

  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 15; ++trial) {
    std::size_t n = 6 + rng() % 20;
    auto edges = testutil::random_gnp(n, 0.25, rng);
    Graph rg = Graph::from_edge_list(edges, n);
    DenseAdj rd = DenseAdj::from_edges(edges, n);
    std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(n - 1));
    NodeId i = pick(rng), j = pick(rng);
    CHECK(neo_gnn_feature(rg, i, j, cfg) ==
          doctest::Approx(oracle(rd, i, j, 2, 0.5)).epsilon(1e-10));
  }
}

TEST_CASE("neo_gnn_feature beta=0 keeps only the first-order term") {
  Graph g = testutil::g1();
  NeoGnnConfig cfg;
  cfg.max_hop = 3;
  cfg.beta = 0.0;
  CHECK(neo_gnn_feature(g, 0, 3, cfg) ==
        heuristic_score(g, 0, 3, Heuristic::CN));
}

TEST_CASE("buddy_features k=1 on G1") {
  Graph g = testutil::g1();
  BuddyConfig cfg;
  cfg.max_hop = 1;
  auto f = buddy_features(g, 0, 3, cfg);
  REQUIRE(f.size() == 3);  // k^2 + 2k
  CHECK(f[0] == 2.0);      // a_{1,1} = |{1,2}|
  CHECK(f[1] == 0.0);      // b_1(0,3): N(0) - N(3) = {}
  CHECK(f[2] == 1.0);      // b_1(3,0): N(3) - N(0) = {4}
  CHECK(f[0] == heuristic_score(g, 0, 3, Heuristic::CN));
}

TEST_CASE("buddy_features shells match BFS oracle") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    std::size_t n = 8 + rng() % 24;
    auto edges = testutil::random_gnp(n, 0.15, rng);
    Graph g = Graph::from_edge_list(edges, n);
    DenseAdj d = DenseAdj::from_edges(edges, n);
    std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(n - 1));
    NodeId i = pick(rng), j = pick(rng);
    BuddyConfig cfg;
    cfg.max_hop = 2;
    auto got = buddy_features(g, i, j, cfg);
    REQUIRE(got.size() == 8);
    // oracle from BFS shells
    auto si1 = d.shell(i, 1), si2 = d.shell(i, 2);
    auto sj1 = d.shell(j, 1), sj2 = d.shell(j, 2);
    auto isect = [](const NodeSet& a, const NodeSet& b) {
      NodeSet out;
      std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                            std::back_inserter(out));
      return out.size();
    };
    auto diff_union = [](const NodeSet& a, const NodeSet& u1, const NodeSet& u2) {
      NodeSet un, out;
      std::set_union(u1.begin(), u1.end(), u2.begin(), u2.end(),
                     std::back_inserter(un));
      std::set_difference(a.begin(), a.end(), un.begin(), un.end(),
                          std::back_inserter(out));
      return out.size();
    };
    CHECK(got[0] == static_cast<double>(isect(si1, sj1)));
    CHECK(got[1] == static_cast<double>(isect(si1, sj2)));
    CHECK(got[2] == static_cast<double>(isect(si2, sj1)));
    CHECK(got[3] == static_cast<double>(isect(si2, sj2)));
    CHECK(got[4] == static_cast<double>(diff_union(si1, sj1, sj2)));
    CHECK(got[5] == static_cast<double>(diff_union(si2, sj1, sj2)));
    CHECK(got[6] == static_cast<double>(diff_union(sj1, si1, si2)));
    CHECK(got[7] == static_cast<double>(diff_union(sj2, si1, si2)));
  }
}

TEST_CASE("buddy_features on a disconnected pair is all zero") {
  Graph g = Graph::from_edge_list({{0, 1}, {2, 3}}, 6);
  BuddyConfig cfg;
  cfg.max_hop = 2;
  auto f = buddy_features(g, 4, 5, cfg);
  for (double x : f) CHECK(x == 0.0);
}

TEST_CASE("property: symmetry of heuristics and buddy overlap") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    std::size_t n = 6 + rng() % 30;
    Graph g = Graph::from_edge_list(testutil::random_gnp(n, 0.3, rng), n);
    std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(n - 1));
    for (int q = 0; q < 25; ++q) {
      NodeId i = pick(rng), j = pick(rng);
      for (auto kind : {Heuristic::CN, Heuristic::RA, Heuristic::AA})
        CHECK(heuristic_score(g, i, j, kind) == heuristic_score(g, j, i, kind));
      BuddyConfig cfg;
      cfg.max_hop = 2;
      auto fij = buddy_features(g, i, j, cfg);
      auto fji = buddy_features(g, j, i, cfg);
      CHECK(fij[0] == fji[0]);  // a_{1,1}
      CHECK(fij[3] == fji[3]);  // a_{2,2}
      CHECK(fij[1] == fji[2]);  // a_{1,2} <-> a_{2,1}
      CHECK(fij[4] == fji[6]);  // b_1(i,j) <-> b_1(j,i)
      CHECK(fij[5] == fji[7]);
    }
  }
}

TEST_CASE("property: adding an edge (u,j) with u in N(i)-N(j) bumps CN by 1") {
  std::mt19937_64 rng(64);
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t n = 8 + rng() % 24;
    auto edges = testutil::random_gnp(n, 0.25, rng);
    Graph g = Graph::from_edge_list(edges, n);
    std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(n - 1));
    NodeId i = pick(rng), j = pick(rng);
    if (i == j) continue;
    auto candidates = g.neighbor_difference(i, j);
    // drop j itself: adding (j,j) would be a self loop
    std::erase(candidates, j);
    if (candidates.empty()) continue;
    NodeId u = candidates[rng() % candidates.size()];
    double before = heuristic_score(g, i, j, Heuristic::CN);
    edges.push_back({u, j});
    Graph g2 = Graph::from_edge_list(edges, n);
    CHECK(heuristic_score(g2, i, j, Heuristic::CN) == before + 1.0);
  }
}

TEST_CASE("AA ranking is invariant to the log base") {
  // scores scale by 1/log_b(e); rankings must not change
  std::mt19937_64 rng(3);
  std::size_t n = 24;
  Graph g = Graph::from_edge_list(testutil::random_gnp(n, 0.3, rng), n);
  std::vector<std::pair<double, double>> scores;  // (ln, log2)
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = i + 1; j < n; ++j) {
      double ln_score = heuristic_score(g, i, j, Heuristic::AA);
      double log2_score = 0.0;
      for (NodeId u : g.common_neighbors(i, j))
        log2_score += 1.0 / std::log2(static_cast<double>(g.degree(u)));
      scores.push_back({ln_score, log2_score});
    }
  // a strict order by a clear margin in one base must hold in the other;
  // ties up to rounding are left undetermined
  for (std::size_t a = 0; a < scores.size(); ++a)
    for (std::size_t b = a + 1; b < scores.size(); b += 7) {
      double tol = 1e-9 * std::max(1.0, std::abs(scores[a].first));
      if (scores[a].first > scores[b].first + tol)
        CHECK(scores[a].second > scores[b].second);
      else if (scores[b].first > scores[a].first + tol)
        CHECK(scores[b].second > scores[a].second);
    }
}
