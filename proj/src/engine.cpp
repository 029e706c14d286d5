#include "pfwd/engine.hpp"

#include <algorithm>

namespace pfwd {

void validate_protocol(const Graph& g, const CodingConfig& coding,
                       const ProtocolParams& proto) {
  coding.validate();
  if (!(proto.p >= 0.0 && proto.p <= 1.0))
    throw std::invalid_argument("forwarding probability must lie in [0,1]");
  if (proto.source >= g.node_count())
    throw std::invalid_argument("source node out of range");
}

std::vector<NodeId> packet_reach(const Graph& g, NodeId source,
                                 std::span<const std::uint8_t> active) {
  if (source >= g.node_count()) throw std::invalid_argument("source out of range");
  if (active.size() != g.node_count())
    throw std::invalid_argument("active flags must cover every node");
  ReachWorkspace ws;
  reach_into(g, source,
             [&](NodeId v) { return active[v] != 0 && g.forward_allowed(v); }, ws);
  std::vector<NodeId> reached(ws.order.begin(), ws.order.end());
  std::sort(reached.begin(), reached.end());
  return reached;
}

TrialOutcome run_trial(const Graph& g, const CodingConfig& coding,
                       const ProtocolParams& proto, const TrialRng& rng) {
  validate_protocol(g, coding, proto);
  TrialWorkspace ws;
  return run_trial(g, coding, proto, rng, ws);
}

}  // namespace pfwd
