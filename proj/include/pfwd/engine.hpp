#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "pfwd/graph.hpp"

namespace pfwd {

/// k message packets encoded into n >= k coded packets; a node that receives
/// any k of the n can decode.
struct CodingConfig {
  int k = 1;
  int n = 1;
  double redundancy() const { return static_cast<double>(n - k) / k; }
  void validate() const {
    if (k < 1 || n < k) throw std::invalid_argument("coding requires n >= k >= 1");
  }
};

struct ProtocolParams {
  double p = 0.0;     // per-packet forwarding probability of non-source nodes
  NodeId source = 0;  // transmits all n packets unconditionally
};

struct TrialOutcome {
  int receivers = 0;             // nodes (incl. source) holding >= k packets
  std::int64_t transmissions = 0;  // packet broadcasts across all nodes
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

/// Counter-style generator: a stateless hash of (seed, trial, packet, node)
/// yields one uniform per decision, so trials are reproducible and
/// order-independent regardless of execution order or thread count.
class TrialRng {
 public:
  TrialRng(std::uint64_t seed, std::uint64_t trial)
      : base_(splitmix64(splitmix64(seed) ^ trial)) {}

  /// Uniform in the open interval (0,1), fixed for a given (packet, node).
  double operator()(std::uint32_t packet, NodeId node) const {
    std::uint64_t h =
        splitmix64(base_ ^ (static_cast<std::uint64_t>(packet) << 32 | node));
    return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  std::uint64_t base_;
};

/// Scratch space for repeated reachability sweeps. Visited flags are
/// epoch-stamped so per-packet clears are O(1).
struct ReachWorkspace {
  std::vector<std::uint32_t> stamp;
  std::vector<NodeId> order;  // reached nodes in visit order
  std::uint32_t epoch = 0;

  void begin(std::size_t n) {
    if (stamp.size() != n) {
      stamp.assign(n, 0);
      epoch = 0;
    }
    order.clear();
    if (++epoch == 0) {
      std::fill(stamp.begin(), stamp.end(), 0);
      epoch = 1;
    }
  }
};

/// Breadth-first sweep from `source` through relaying nodes. A node's packet
/// reaches every neighbor of every relaying node it reaches; the source
/// always relays. `relays(v)` is consulted exactly once per reached
/// non-source node. Reached nodes are left in ws.order.
template <class RelayPred>
void reach_into(const Graph& g, NodeId source, RelayPred&& relays,
                ReachWorkspace& ws) {
  ws.begin(g.node_count());
  ws.stamp[source] = ws.epoch;
  ws.order.push_back(source);
  std::size_t head = 0;
  while (head < ws.order.size()) {
    NodeId u = ws.order[head++];
    if (u != source && !relays(u)) continue;
    for (NodeId v : g.neighbors(u)) {
      if (ws.stamp[v] != ws.epoch) {
        ws.stamp[v] = ws.epoch;
        ws.order.push_back(v);
      }
    }
  }
}

/// Set of nodes a single packet reaches when `active` marks the nodes whose
/// forwarding coin came up heads. Intermediate nodes must be both active and
/// forward-permitted; the source's own flag is ignored. Result is sorted and
/// always contains the source and its direct neighbors.
std::vector<NodeId> packet_reach(const Graph& g, NodeId source,
                                 std::span<const std::uint8_t> active);

struct TrialWorkspace {
  ReachWorkspace reach;
  std::vector<std::uint32_t> receive_count;
};

/// One protocol trial: each of the n packets independently percolates from
/// the source through nodes whose uniform u(packet, node) <= p and whose
/// forwarding flag is set. Every such node transmits the packet exactly once
/// (the source always transmits). `uniform(packet, node)` must be a pure
/// function of its arguments.
template <class UniformFn>
TrialOutcome run_trial(const Graph& g, const CodingConfig& coding,
                       const ProtocolParams& proto, UniformFn&& uniform,
                       TrialWorkspace& ws) {
  const NodeId n_nodes = g.node_count();
  ws.receive_count.assign(n_nodes, 0);
  std::int64_t transmissions = 0;
  for (int packet = 0; packet < coding.n; ++packet) {
    int relayed = 0;
    auto relays = [&](NodeId v) {
      if (!g.forward_allowed(v)) return false;
      if (uniform(static_cast<std::uint32_t>(packet), v) <= proto.p) {
        ++relayed;
        return true;
      }
      return false;
    };
    reach_into(g, proto.source, relays, ws.reach);
    transmissions += 1 + relayed;
    for (NodeId v : ws.reach.order) ++ws.receive_count[v];
  }
  TrialOutcome out;
  out.transmissions = transmissions;
  for (NodeId v = 0; v < n_nodes; ++v)
    if (ws.receive_count[v] >= static_cast<std::uint32_t>(coding.k)) ++out.receivers;
  return out;
}

/// Convenience overload that allocates its own workspace.
TrialOutcome run_trial(const Graph& g, const CodingConfig& coding,
                       const ProtocolParams& proto, const TrialRng& rng);

/// Runs the same trial at every probability in ascending `p_list`, reusing
/// one set of uniforms. Activation thresholds u <= p grow with p, so both
/// receiver and transmission counts are non-decreasing across the returned
/// list in every single trial.
template <class UniformFn>
std::vector<TrialOutcome> run_trial_coupled(const Graph& g,
                                            const CodingConfig& coding,
                                            NodeId source,
                                            std::span<const double> p_list,
                                            UniformFn&& uniform,
                                            TrialWorkspace& ws) {
  for (std::size_t i = 1; i < p_list.size(); ++i)
    if (p_list[i] < p_list[i - 1])
      throw std::invalid_argument("p_list must be ascending");
  std::vector<TrialOutcome> out;
  out.reserve(p_list.size());
  for (double p : p_list)
    out.push_back(run_trial(g, coding, ProtocolParams{p, source}, uniform, ws));
  return out;
}

void validate_protocol(const Graph& g, const CodingConfig& coding,
                       const ProtocolParams& proto);

}  // namespace pfwd
