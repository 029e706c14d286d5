#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "pfwd/graph.hpp"

namespace pfwd::test {

inline Graph make_path(NodeId n) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
  return Graph::from_edges(n, std::move(edges));
}

inline Graph make_cycle(NodeId n) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId v = 0; v < n; ++v) edges.emplace_back(v, (v + 1) % n);
  return Graph::from_edges(n, std::move(edges));
}

// Node 0 is the hub.
inline Graph make_star(NodeId n) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId v = 1; v < n; ++v) edges.emplace_back(NodeId{0}, v);
  return Graph::from_edges(n, std::move(edges));
}

inline Graph make_two_triangles() {
  return Graph::from_edges(
      6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
}

// Independent check for binomial_tail: plain term-by-term summation in
// extended precision. Usable up to n ~ 1000.
inline double binomial_tail_direct(int n, double p, int k) {
  if (k <= 0) return 1.0;
  if (k > n) return 0.0;
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return 1.0;
  long double sum = 0.0L;
  for (int i = k; i <= n; ++i) {
    const long double log_term = lgammal(n + 1.0L) - lgammal(i + 1.0L) -
                                 lgammal(n - i + 1.0L) +
                                 i * logl(static_cast<long double>(p)) +
                                 (n - i) * log1pl(-static_cast<long double>(p));
    sum += expl(log_term);
  }
  return static_cast<double>(sum);
}

}  // namespace pfwd::test
