#pragma once

#include <deque>
#include <random>
#include <vector>

#include "pfwd/engine.hpp"
#include "pfwd/graph.hpp"

namespace pfwd::test {

// Serial event-driven reference implementation of the protocol: packets are
// delivered as discrete transmission events, and a node decides whether to
// forward a packet at the moment it first receives it. Distribution-identical
// to the static-activation engine (each node makes one Bernoulli(p) decision
// per packet either way); kept as an independent check of that engine.
inline TrialOutcome run_trial_event_driven(const Graph& g,
                                           const CodingConfig& coding,
                                           const ProtocolParams& proto,
                                           std::mt19937_64& rng) {
  const NodeId n_nodes = g.node_count();
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<int> receive_count(n_nodes, 0);
  TrialOutcome out;

  std::vector<std::uint8_t> got(n_nodes);
  std::deque<NodeId> pending;  // nodes that decided to transmit this packet
  for (int packet = 0; packet < coding.n; ++packet) {
    std::fill(got.begin(), got.end(), 0);
    pending.clear();
    got[proto.source] = 1;
    ++receive_count[proto.source];
    pending.push_back(proto.source);
    while (!pending.empty()) {
      const NodeId u = pending.front();
      pending.pop_front();
      ++out.transmissions;
      for (NodeId v : g.neighbors(u)) {
        if (got[v]) continue;  // repeat receptions are ignored
        got[v] = 1;
        ++receive_count[v];
        if (g.forward_allowed(v) && unif(rng) <= proto.p) pending.push_back(v);
      }
    }
  }
  for (NodeId v = 0; v < n_nodes; ++v)
    if (receive_count[v] >= coding.k) ++out.receivers;
  return out;
}

struct ReferenceEstimate {
  double coverage_mean, coverage_se;
  double load_mean, load_se;
};

inline ReferenceEstimate estimate_event_driven(const Graph& g,
                                               const CodingConfig& coding,
                                               const ProtocolParams& proto,
                                               int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> cov(trials), load(trials);
  for (int t = 0; t < trials; ++t) {
    const TrialOutcome o = run_trial_event_driven(g, coding, proto, rng);
    cov[t] = static_cast<double>(o.receivers) / g.node_count();
    load[t] = static_cast<double>(o.transmissions);
  }
  auto mean_se = [&](const std::vector<double>& xs, double& mean, double& se) {
    mean = 0.0;
    for (double x : xs) mean += x;
    mean /= xs.size();
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    se = xs.size() > 1 ? std::sqrt(ss / (xs.size() - 1)) / std::sqrt(xs.size())
                       : 0.0;
  };
  ReferenceEstimate r{};
  mean_se(cov, r.coverage_mean, r.coverage_se);
  mean_se(load, r.load_mean, r.load_se);
  return r;
}

}  // namespace pfwd::test
