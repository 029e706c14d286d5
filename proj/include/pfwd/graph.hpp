#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace pfwd {

using NodeId = std::uint32_t;

/// Square/rectangular lattice. When horizontal_row_period is set to q,
/// horizontal edges are kept only in rows whose index is a multiple of q;
/// vertical edges are always present.
struct GridSpec {
  int rows = 1;
  int cols = 1;
  std::optional<int> horizontal_row_period;
};

/// Nodes placed uniformly at random in a width x height rectangle; an edge
/// connects every pair at Euclidean distance <= radius. Fully determined by
/// the seed.
struct RggSpec {
  int node_count = 1;
  double width = 1.0;
  double height = 1.0;
  double radius = 0.0;
  std::uint64_t seed = 0;
};

/// Complete d-ary tree: every node at depth < height has `degree` children.
struct TreeSpec {
  int degree = 2;
  int height = 1;
};

/// Immutable undirected graph with dense ids 0..N-1, stored as a CSR
/// adjacency with sorted neighbor lists. Each node carries a forwarding
/// permission flag consulted by the protocol engine; positions are kept
/// only for geometrically generated graphs.
class Graph {
 public:
  /// Builds a graph from an undirected edge list. Throws std::invalid_argument
  /// on self-loops, duplicate edges, out-of-range endpoints, or a forward
  /// mask / position list of the wrong length. An empty mask means all nodes
  /// may forward.
  static Graph from_edges(NodeId node_count,
                          std::vector<std::pair<NodeId, NodeId>> edges,
                          std::vector<std::uint8_t> forward_mask = {},
                          std::vector<std::array<double, 2>> positions = {});

  NodeId node_count() const { return node_count_; }
  std::size_t edge_count() const { return edge_count_; }

  std::span<const NodeId> neighbors(NodeId v) const {
    return {adjacency_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  std::size_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }

  bool forward_allowed(NodeId v) const { return forward_mask_[v] != 0; }
  std::span<const std::uint8_t> forward_mask() const { return forward_mask_; }

  bool has_positions() const { return !positions_.empty(); }
  const std::vector<std::array<double, 2>>& positions() const { return positions_; }

  /// Generator provenance ("grid", "rgg", "tree", or empty for hand-built
  /// graphs); used to pick sensible default source nodes.
  const std::string& kind() const { return kind_; }
  int meta_rows() const { return meta_rows_; }
  int meta_cols() const { return meta_cols_; }
  void set_kind(std::string kind, int rows = 0, int cols = 0);

 private:
  Graph() = default;

  NodeId node_count_ = 0;
  std::size_t edge_count_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> adjacency_;
  std::vector<std::uint8_t> forward_mask_;
  std::vector<std::array<double, 2>> positions_;
  std::string kind_;
  int meta_rows_ = 0;
  int meta_cols_ = 0;
};

/// Row-major lattice; all nodes may forward.
Graph gen_grid(const GridSpec& spec);

/// Seeded random geometric graph; node positions are retained. Identical
/// seeds give identical graphs. Disconnected outputs are kept as-is.
Graph gen_rgg(const RggSpec& spec);

/// Complete d-ary tree with level-order ids (root 0, children of v are
/// d*v+1 .. d*v+d). Leaves have forwarding disabled.
Graph gen_tree(const TreeSpec& spec);

struct ComponentResult {
  std::size_t size = 0;
  std::vector<std::uint8_t> member;  // 1 if the node shares source's component
};

/// Connected component containing `source` (forwarding flags are ignored).
ComponentResult largest_component(const Graph& g, NodeId source);

/// JSON serialization: {"nodes": N, "edges": [[u,v],...], "forward_mask":
/// [...], "positions": [[x,y],...]?, "kind"?, "rows"?, "cols"?}.
std::string to_json(const Graph& g);
Graph graph_from_json(const std::string& text);

void save_graph(const Graph& g, const std::string& path);
Graph load_graph(const std::string& path);

}  // namespace pfwd
