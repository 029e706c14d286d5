#include <algorithm>
#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "pfwd/graph.hpp"

using namespace pfwd;

namespace {

void check_invariants(const Graph& g) {
  std::set<std::pair<NodeId, NodeId>> seen;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    auto nbrs = g.neighbors(u);
    CHECK(std::is_sorted(nbrs.begin(), nbrs.end()));
    CHECK(std::adjacent_find(nbrs.begin(), nbrs.end()) == nbrs.end());
    for (NodeId v : nbrs) {
      CHECK(v != u);
      CHECK(v < g.node_count());
      seen.insert({u, v});
    }
  }
  for (auto [u, v] : seen) CHECK(seen.count({v, u}) == 1);  // symmetry
  CHECK(g.forward_mask().size() == g.node_count());
}

// Independent edge count for a rows x cols lattice with horizontal edges
// kept only in rows that are multiples of q (q = 0 keeps all).
std::size_t brute_grid_edges(int rows, int cols, int q) {
  std::size_t count = 0;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      if (r + 1 < rows) ++count;
      if (c + 1 < cols && (q == 0 || r % q == 0)) ++count;
    }
  return count;
}

}  // namespace

TEST_CASE("grid generator") {
  SUBCASE("2x2 unit square") {
    Graph g = gen_grid({2, 2, {}});
    CHECK(g.node_count() == 4);
    CHECK(g.edge_count() == 4);
    check_invariants(g);
  }
  SUBCASE("31x31 full grid") {
    Graph g = gen_grid({31, 31, {}});
    CHECK(g.node_count() == 961);
    CHECK(brute_grid_edges(31, 31, 0) == 1860);
    CHECK(g.edge_count() == 1860);
    check_invariants(g);
  }
  SUBCASE("row-pruned grids") {
    CHECK(brute_grid_edges(31, 31, 5) == 1140);
    CHECK(gen_grid({31, 31, 5}).edge_count() == 1140);
    CHECK(brute_grid_edges(31, 31, 15) == 1020);
    CHECK(gen_grid({31, 31, 15}).edge_count() == 1020);
    CHECK(gen_grid({31, 31, 10}).edge_count() ==
          brute_grid_edges(31, 31, 10));
  }
  SUBCASE("period 1 equals no period") {
    Graph a = gen_grid({7, 5, 1});
    Graph b = gen_grid({7, 5, {}});
    REQUIRE(a.node_count() == b.node_count());
    CHECK(a.edge_count() == b.edge_count());
    for (NodeId v = 0; v < a.node_count(); ++v) {
      auto na = a.neighbors(v), nb = b.neighbors(v);
      CHECK(std::equal(na.begin(), na.end(), nb.begin(), nb.end()));
    }
  }
  SUBCASE("forwarding allowed everywhere") {
    Graph g = gen_grid({4, 4, {}});
    for (NodeId v = 0; v < g.node_count(); ++v) CHECK(g.forward_allowed(v));
  }
  SUBCASE("invalid specs") {
    CHECK_THROWS_AS(gen_grid({0, 3, {}}), std::invalid_argument);
    CHECK_THROWS_AS(gen_grid({4, 4, 4}), std::invalid_argument);  // q > rows-1
    CHECK_THROWS_AS(gen_grid({1, 4, 1}), std::invalid_argument);
    CHECK_NOTHROW(gen_grid({4, 4, 3}));
  }
}

TEST_CASE("rgg generator") {
  RggSpec spec{60, 20.0, 20.0, 5.5, 2024};
  Graph g = gen_rgg(spec);
  check_invariants(g);
  CHECK(g.node_count() == 60);
  REQUIRE(g.has_positions());
  for (auto [x, y] : g.positions()) {
    CHECK(x >= 0.0);
    CHECK(x <= 20.0);
    CHECK(y >= 0.0);
    CHECK(y <= 20.0);
  }

  SUBCASE("identical seed gives identical graph") {
    Graph h = gen_rgg(spec);
    REQUIRE(h.node_count() == g.node_count());
    CHECK(h.edge_count() == g.edge_count());
    CHECK(h.positions() == g.positions());
  }
  SUBCASE("different seed moves nodes") {
    RggSpec other = spec;
    other.seed = 2025;
    CHECK(gen_rgg(other).positions() != g.positions());
  }
  SUBCASE("edge rule matches pairwise distances") {
    const auto& pos = g.positions();
    std::size_t expected = 0;
    for (NodeId u = 0; u < g.node_count(); ++u)
      for (NodeId v = u + 1; v < g.node_count(); ++v) {
        double dx = pos[u][0] - pos[v][0], dy = pos[u][1] - pos[v][1];
        if (std::sqrt(dx * dx + dy * dy) <= spec.radius) ++expected;
      }
    CHECK(g.edge_count() == expected);
  }
  SUBCASE("radius covering the diagonal gives a complete graph") {
    Graph full = gen_rgg({12, 3.0, 4.0, 5.0, 7});
    CHECK(full.edge_count() == 12 * 11 / 2);
  }
  SUBCASE("zero radius gives an edgeless graph") {
    CHECK(gen_rgg({12, 3.0, 4.0, 0.0, 7}).edge_count() == 0);
  }
  SUBCASE("invalid specs") {
    CHECK_THROWS_AS(gen_rgg({5, 0.0, 1.0, 1.0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(gen_rgg({5, 1.0, 1.0, -1.0, 1}), std::invalid_argument);
  }
}

TEST_CASE("tree generator") {
  SUBCASE("height 1 binary tree") {
    Graph g = gen_tree({2, 1});
    CHECK(g.node_count() == 3);
    CHECK(g.edge_count() == 2);
    CHECK(g.forward_allowed(0));
    CHECK_FALSE(g.forward_allowed(1));
    CHECK_FALSE(g.forward_allowed(2));
  }
  SUBCASE("node counts") {
    CHECK(gen_tree({2, 10}).node_count() == 2047);
    CHECK(gen_tree({3, 2}).node_count() == 13);
  }
  SUBCASE("exactly the leaves are barred from forwarding") {
    for (auto [d, h] : {std::pair{2, 4}, {3, 3}}) {
      Graph g = gen_tree({d, h});
      check_invariants(g);
      std::size_t leaves = 1;
      for (int l = 0; l < h; ++l) leaves *= d;
      std::size_t barred = 0;
      for (NodeId v = 0; v < g.node_count(); ++v)
        if (!g.forward_allowed(v)) ++barred;
      CHECK(barred == leaves);
      // level-order ids: last `leaves` nodes are the leaves
      for (NodeId v = 0; v < g.node_count() - leaves; ++v)
        CHECK(g.forward_allowed(v));
    }
  }
  SUBCASE("level-order structure") {
    Graph g = gen_tree({2, 2});
    auto n0 = g.neighbors(0);
    CHECK(std::vector<NodeId>(n0.begin(), n0.end()) == std::vector<NodeId>{1, 2});
    auto n1 = g.neighbors(1);
    CHECK(std::vector<NodeId>(n1.begin(), n1.end()) ==
          std::vector<NodeId>{0, 3, 4});
  }
  SUBCASE("invalid specs") {
    CHECK_THROWS_AS(gen_tree({1, 3}), std::invalid_argument);
    CHECK_THROWS_AS(gen_tree({2, 0}), std::invalid_argument);
  }
}

TEST_CASE("largest_component") {
  SUBCASE("connected grid") {
    Graph g = gen_grid({5, 4, {}});
    CHECK(largest_component(g, 7).size == 20);
  }
  SUBCASE("edgeless graph") {
    Graph g = Graph::from_edges(4, {});
    auto res = largest_component(g, 2);
    CHECK(res.size == 1);
    CHECK(res.member == std::vector<std::uint8_t>{0, 0, 1, 0});
  }
  SUBCASE("two disjoint triangles") {
    Graph g = test::make_two_triangles();
    auto res = largest_component(g, 1);
    CHECK(res.size == 3);
    CHECK(res.member == std::vector<std::uint8_t>{1, 1, 1, 0, 0, 0});
    CHECK(largest_component(g, 4).size == 3);
  }
}

TEST_CASE("from_edges validation") {
  CHECK_THROWS_AS(Graph::from_edges(3, {{0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(Graph::from_edges(3, {{0, 1}, {1, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(Graph::from_edges(3, {{0, 3}}), std::invalid_argument);
  CHECK_THROWS_AS(Graph::from_edges(3, {{0, 1}}, {1, 0}), std::invalid_argument);
  CHECK_THROWS_AS(Graph::from_edges(0, {}), std::invalid_argument);
}

TEST_CASE("json round trip") {
  auto roundtrip_equal = [](const Graph& g) {
    Graph h = graph_from_json(to_json(g));
    REQUIRE(h.node_count() == g.node_count());
    CHECK(h.edge_count() == g.edge_count());
    for (NodeId v = 0; v < g.node_count(); ++v) {
      auto a = g.neighbors(v), b = h.neighbors(v);
      CHECK(std::equal(a.begin(), a.end(), b.begin(), b.end()));
      CHECK(g.forward_allowed(v) == h.forward_allowed(v));
    }
    CHECK(h.positions() == g.positions());
    CHECK(h.kind() == g.kind());
    CHECK(h.meta_rows() == g.meta_rows());
    CHECK(h.meta_cols() == g.meta_cols());
  };
  roundtrip_equal(gen_grid({5, 7, 2}));
  roundtrip_equal(gen_rgg({20, 10.0, 10.0, 3.0, 99}));
  roundtrip_equal(gen_tree({2, 3}));
  roundtrip_equal(test::make_two_triangles());
}
