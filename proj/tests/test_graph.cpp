#include <doctest.h>

#include <random>

#include "linkpred/graph.hpp"
#include "test_util.hpp"

using namespace linkpred;
using testutil::DenseAdj;

TEST_CASE("from_edge_list: empty graph") {
  Graph g = Graph::from_edge_list({}, 3);
  CHECK(g.node_count() == 3);
  CHECK(g.edge_count() == 0);
  CHECK(g.neighbors(0).empty());
  CHECK(g.degree(2) == 0);
}

TEST_CASE("from_edge_list: symmetric duplicates collapse") {
  Graph g = Graph::from_edge_list({{0, 1}, {1, 0}, {1, 2}}, 3);
  CHECK(g.edge_count() == 2);
  CHECK(testutil::to_vec(g.neighbors(1)) == std::vector<NodeId>{0, 2});
  // duplicate weights sum
  CHECK(g.edge_weight(0, 1) == 2.0);
  CHECK(g.edge_weight(1, 2) == 1.0);
}

TEST_CASE("from_edge_list: G1 degrees match dense oracle") {
  Graph g = testutil::g1();
  DenseAdj d = DenseAdj::from_edges(testutil::g1_edges(), 5);
  std::vector<std::size_t> want{2, 3, 3, 3, 1};
  for (NodeId u = 0; u < 5; ++u) {
    CHECK(g.degree(u) == d.degree(u));
    CHECK(g.degree(u) == want[u]);
  }
  CHECK(g.edge_count() == 6);
}

TEST_CASE("from_edge_list: errors and self loops") {
  CHECK_THROWS_AS(Graph::from_edge_list({{0, 3}}, 3), std::out_of_range);
  std::size_t loops = 0;
  Graph g = Graph::from_edge_list({{0, 0}, {0, 1}}, 2, nullptr, &loops);
  CHECK(loops == 1);
  CHECK(g.edge_count() == 1);
}

TEST_CASE("neighbors and degree") {
  Graph g = testutil::g1();
  CHECK(testutil::to_vec(g.neighbors(4)) == std::vector<NodeId>{3});
  CHECK(g.degree(4) == 1);
  CHECK(testutil::to_vec(g.neighbors(1)) == std::vector<NodeId>{0, 2, 3});
  CHECK_THROWS_AS(g.neighbors(5), std::out_of_range);

  Graph iso = Graph::from_edge_list({{0, 1}}, 3);
  CHECK(iso.neighbors(2).empty());
  CHECK(iso.degree(2) == 0);
}

TEST_CASE("weighted degree sums weights") {
  std::vector<double> w{2.5, 0.5};
  Graph g = Graph::from_edge_list({{0, 1}, {0, 2}}, 3, &w);
  CHECK(g.weighted_degree(0) == doctest::Approx(3.0));
  CHECK(g.degree(0) == 2);
}

TEST_CASE("common_neighbors") {
  Graph g = testutil::g1();
  CHECK(g.common_neighbors(0, 3) == std::vector<NodeId>{1, 2});
  CHECK(g.common_neighbors(3, 4).empty());
  // i == j gives N(i) itself
  CHECK(g.common_neighbors(1, 1) == std::vector<NodeId>{0, 2, 3});
}

TEST_CASE("neighbor_difference") {
  Graph g = testutil::g1();
  CHECK(g.neighbor_difference(1, 2) == std::vector<NodeId>{2});
  CHECK(g.neighbor_difference(4, 3) == std::vector<NodeId>{3});
  CHECK(g.neighbor_difference(1, 1).empty());
}

TEST_CASE("power_graph: l=1 is identity, weights preserved") {
  std::vector<double> w{2.0, 1.0, 1.0, 1.0, 3.0, 1.0};
  auto edges = testutil::g1_edges();
  Graph g = Graph::from_edge_list(edges, 5, &w);
  Graph p = power_graph(g, 1);
  CHECK(p.edge_count() == g.edge_count());
  CHECK(p.edge_weight(0, 1) == 2.0);
  CHECK(p.edge_weight(2, 3) == 3.0);
}

TEST_CASE("power_graph: l=0 rejected") {
  CHECK_THROWS_AS(power_graph(testutil::g1(), 0), std::invalid_argument);
}

TEST_CASE("power_graph: A^2 walk counts on G1") {
  Graph g = testutil::g1();
  Graph p = power_graph(g, 2);
  // two walks 0-1-3 and 0-2-3
  CHECK(p.edge_weight(0, 3) == 2.0);
  DenseAdj d = DenseAdj::from_edges(testutil::g1_edges(), 5).power(2);
  for (NodeId u = 0; u < 5; ++u)
    for (NodeId v = 0; v < 5; ++v)
      if (u != v) CHECK(p.edge_weight(u, v) == d.at(u, v));
}

TEST_CASE("power_graph: diagonal reported separately") {
  Graph path = Graph::from_edge_list({{0, 1}, {1, 2}}, 3);
  std::vector<double> diag;
  Graph p = power_graph(path, 2, &diag);
  auto nb0 = p.neighbors(0);
  CHECK(std::binary_search(nb0.begin(), nb0.end(), NodeId{2}));
  CHECK(!p.has_edge(0, 0));
  // (A^2)_{11} = 2 walk counts: 1-0-1 and 1-2-1
  CHECK(diag == std::vector<double>{1.0, 2.0, 1.0});
}

TEST_CASE("power_graph: random graphs match dense matrix power") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t n = 4 + rng() % 29;  // n <= 32
    auto edges = testutil::random_gnp(n, 0.2, rng);
    Graph g = Graph::from_edge_list(edges, n);
    for (int l = 1; l <= 3; ++l) {
      std::vector<double> diag;
      Graph p = power_graph(g, l, &diag);
      DenseAdj d = DenseAdj::from_edges(edges, n).power(l);
      for (NodeId u = 0; u < n; ++u) {
        CHECK(diag[u] == d.at(u, u));
        for (NodeId v = 0; v < n; ++v)
          if (u != v) CHECK(p.edge_weight(u, v) == d.at(u, v));
      }
    }
  }
}

TEST_CASE("shortest_path_neighborhood") {
  Graph g = testutil::g1();
  CHECK(shortest_path_neighborhood(g, 4, 2) == std::vector<NodeId>{1, 2});
  auto nb0 = g.neighbors(0);
  CHECK(shortest_path_neighborhood(g, 0, 1) ==
        std::vector<NodeId>(nb0.begin(), nb0.end()));

  Graph iso = Graph::from_edge_list({{0, 1}}, 3);
  CHECK(shortest_path_neighborhood(iso, 2, 1).empty());
  CHECK_THROWS_AS(shortest_path_neighborhood(g, 9, 1), std::out_of_range);
}

TEST_CASE("general_neighborhood") {
  Graph g = testutil::g1();
  auto nb = g.neighbors(0);
  CHECK(general_neighborhood(g, 0, 1, 1) ==
        std::vector<NodeId>(nb.begin(), nb.end()));
  // nodes with (A^2)_{0,.} > 0
  DenseAdj d2 = DenseAdj::from_edges(testutil::g1_edges(), 5).power(2);
  NodeSet want;
  for (NodeId v = 0; v < 5; ++v)
    if (v != 0 && d2.at(0, v) > 0) want.push_back(v);
  CHECK(general_neighborhood(g, 0, 1, 2) == want);
  CHECK(general_neighborhood(g, 4, 2, 1) == std::vector<NodeId>{1, 2});
  CHECK_THROWS_AS(general_neighborhood(g, 0, 0, 1), std::invalid_argument);
}

TEST_CASE("remove_edges") {
  Graph g = testutil::g1();
  std::size_t removed = 0;
  Graph r = g.remove_edges({{0, 1}}, &removed);
  CHECK(removed == 1);
  CHECK(r.degree(0) == 1);
  CHECK(r.degree(1) == 2);
  CHECK(g.degree(0) == 2);  // input unchanged

  Graph same = g.remove_edges({}, &removed);
  CHECK(removed == 0);
  CHECK(same.edge_count() == g.edge_count());

  Graph absent = g.remove_edges({{0, 4}}, &removed);
  CHECK(removed == 0);
  CHECK(absent.edge_count() == g.edge_count());
}

TEST_CASE("round trip: edge_list -> from_edge_list reproduces arcs") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    std::size_t n = 5 + rng() % 40;
    auto edges = testutil::random_gnp(n, 0.15, rng);
    Graph g = Graph::from_edge_list(edges, n);
    auto listed = g.edge_list();
    std::vector<Edge> pairs;
    std::vector<double> weights;
    for (auto& [e, w] : listed) {
      pairs.push_back(e);
      weights.push_back(w);
    }
    Graph h = Graph::from_edge_list(pairs, n, &weights);
    REQUIRE(h.edge_count() == g.edge_count());
    for (NodeId u = 0; u < n; ++u) {
      auto a = g.neighbors(u);
      auto b = h.neighbors(u);
      CHECK(std::vector<NodeId>(a.begin(), a.end()) ==
            std::vector<NodeId>(b.begin(), b.end()));
    }
  }
}

TEST_CASE("property: CSR neighborhoods equal dense oracle on random graphs") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t n = 2 + rng() % 63;  // n <= 64
    auto edges = testutil::random_gnp(n, 0.25, rng);
    Graph g = Graph::from_edge_list(edges, n);
    DenseAdj d = DenseAdj::from_edges(edges, n);
    std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(n - 1));
    for (int q = 0; q < 20; ++q) {
      NodeId i = pick(rng), j = pick(rng);
      CHECK(g.common_neighbors(i, j) == d.common_neighbors(i, j));
      CHECK(g.common_neighbors(i, j) == g.common_neighbors(j, i));
      CHECK(g.neighbor_difference(i, j) == d.difference(i, j));
      auto nb = g.neighbors(i);
      CHECK(std::vector<NodeId>(nb.begin(), nb.end()) == d.neighbors(i));
    }
  }
}

TEST_CASE("property: common neighbors have degree >= 2") {
  std::mt19937_64 rng(123);
  for (int trial = 0; trial < 10; ++trial) {
    std::size_t n = 4 + rng() % 30;
    Graph g = Graph::from_edge_list(testutil::random_gnp(n, 0.3, rng), n);
    std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(n - 1));
    for (int q = 0; q < 50; ++q) {
      NodeId i = pick(rng), j = pick(rng);
      if (i == j) continue;
      for (NodeId u : g.common_neighbors(i, j)) CHECK(g.degree(u) >= 2);
    }
  }
}

TEST_CASE("property: remove then re-add restores neighbor multiset") {
  std::mt19937_64 rng(5);
  auto edges = testutil::random_gnp(20, 0.3, rng);
  Graph g = Graph::from_edge_list(edges, 20);
  std::vector<Edge> batch{edges[0], edges[3], edges[5]};
  std::size_t removed = 0;
  Graph r = g.remove_edges(batch, &removed);
  CHECK(removed == 3);
  auto listed = r.edge_list();
  std::vector<Edge> pairs;
  std::vector<double> weights;
  for (auto& [e, w] : listed) {
    pairs.push_back(e);
    weights.push_back(w);
  }
  for (auto e : batch) {
    pairs.push_back(e);
    weights.push_back(1.0);
  }
  Graph back = Graph::from_edge_list(pairs, 20, &weights);
  REQUIRE(back.edge_count() == g.edge_count());
  for (NodeId u = 0; u < 20; ++u) {
    auto a = g.neighbors(u);
    auto b = back.neighbors(u);
    CHECK(std::vector<NodeId>(a.begin(), a.end()) ==
          std::vector<NodeId>(b.begin(), b.end()));
  }
}
