#pragma once

#include <vector>

#include "pfwd/engine.hpp"
#include "pfwd/graph.hpp"

namespace pfwd {

/// Exact per-node probability of receiving a single packet, computed at a
/// fixed forwarding probability p.
struct ReachProfile {
  std::vector<double> q;  // q[v] = P(node v receives a given packet)
  double p = 0.0;
};

/// Exhaustive enumeration of all activation patterns of non-source nodes
/// with forwarding permission (nodes without permission are never active).
/// Exponential in that node count, which must not exceed max_enum_bits.
/// Patterns are chunked across threads with per-thread accumulators merged
/// in thread order.
ReachProfile exact_reach_probabilities(const Graph& g, NodeId source, double p,
                                       int max_enum_bits = 20, int threads = 0);

struct ExactExpectations {
  double receivers = 0.0;      // E[R]
  double transmissions = 0.0;  // E[T]
};

/// Packets travel independently, so a node's reception count is
/// Binomial(n, q_v): E[R] = sum_v P(Bin(n, q_v) >= k) and
/// E[T] = n * (1 + sum over forward-permitted non-source v of p * q_v).
ExactExpectations exact_expectations(const ReachProfile& profile,
                                     const CodingConfig& coding, const Graph& g,
                                     NodeId source);

}  // namespace pfwd
