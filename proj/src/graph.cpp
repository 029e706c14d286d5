#include "pfwd/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace pfwd {
namespace {

// splitmix64 stream; self-contained so layouts are reproducible bit-for-bit
std::uint64_t next_u64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace

Graph Graph::from_edges(NodeId node_count,
                        std::vector<std::pair<NodeId, NodeId>> edges,
                        std::vector<std::uint8_t> forward_mask,
                        std::vector<std::array<double, 2>> positions) {
  if (node_count == 0) throw std::invalid_argument("graph needs at least one node");
  if (forward_mask.empty()) forward_mask.assign(node_count, 1);
  if (forward_mask.size() != node_count)
    throw std::invalid_argument("forward_mask length must equal node count");
  if (!positions.empty() && positions.size() != node_count)
    throw std::invalid_argument("positions length must equal node count");

  for (auto& [u, v] : edges) {
    if (u >= node_count || v >= node_count)
      throw std::invalid_argument("edge endpoint out of range");
    if (u == v) throw std::invalid_argument("self-loops are not allowed");
    if (u > v) std::swap(u, v);
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
    throw std::invalid_argument("duplicate edges are not allowed");

  Graph g;
  g.node_count_ = node_count;
  g.edge_count_ = edges.size();
  g.forward_mask_ = std::move(forward_mask);
  g.positions_ = std::move(positions);

  std::vector<std::size_t> deg(node_count, 0);
  for (const auto& [u, v] : edges) {
    ++deg[u];
    ++deg[v];
  }
  g.offsets_.assign(node_count + 1, 0);
  for (NodeId v = 0; v < node_count; ++v) g.offsets_[v + 1] = g.offsets_[v] + deg[v];
  g.adjacency_.resize(2 * edges.size());
  std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const auto& [u, v] : edges) {
    g.adjacency_[cursor[u]++] = v;
    g.adjacency_[cursor[v]++] = u;
  }
  for (NodeId v = 0; v < node_count; ++v) {
    auto begin = g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v]);
    auto end = g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v + 1]);
    std::sort(begin, end);
  }
  return g;
}

void Graph::set_kind(std::string kind, int rows, int cols) {
  kind_ = std::move(kind);
  meta_rows_ = rows;
  meta_cols_ = cols;
}

Graph gen_grid(const GridSpec& spec) {
  if (spec.rows < 1 || spec.cols < 1)
    throw std::invalid_argument("grid needs rows, cols >= 1");
  if (spec.horizontal_row_period) {
    int q = *spec.horizontal_row_period;
    if (q < 1 || q > spec.rows - 1)
      throw std::invalid_argument("horizontal row period must be in [1, rows-1]");
  }
  const NodeId n = static_cast<NodeId>(spec.rows) * static_cast<NodeId>(spec.cols);
  auto id = [&](int r, int c) {
    return static_cast<NodeId>(r * spec.cols + c);
  };
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (int r = 0; r < spec.rows; ++r) {
    bool keep_horizontal =
        !spec.horizontal_row_period || r % *spec.horizontal_row_period == 0;
    for (int c = 0; c < spec.cols; ++c) {
      if (r + 1 < spec.rows) edges.emplace_back(id(r, c), id(r + 1, c));
      if (keep_horizontal && c + 1 < spec.cols)
        edges.emplace_back(id(r, c), id(r, c + 1));
    }
  }
  Graph g = Graph::from_edges(n, std::move(edges));
  g.set_kind("grid", spec.rows, spec.cols);
  return g;
}

Graph gen_rgg(const RggSpec& spec) {
  if (spec.node_count < 1) throw std::invalid_argument("rgg needs at least one node");
  if (spec.width <= 0.0 || spec.height <= 0.0)
    throw std::invalid_argument("rgg region must have positive extent");
  if (spec.radius < 0.0) throw std::invalid_argument("rgg radius must be >= 0");

  // Positions come from the raw 64-bit stream rather than a distribution
  // object so a seed pins the layout bit-for-bit.
  std::uint64_t state = spec.seed;
  auto next_unit = [&state]() {
    return static_cast<double>(next_u64(state) >> 11) * 0x1.0p-53;
  };
  std::vector<std::array<double, 2>> pos(spec.node_count);
  for (auto& xy : pos) {
    xy[0] = next_unit() * spec.width;
    xy[1] = next_unit() * spec.height;
  }
  std::vector<std::pair<NodeId, NodeId>> edges;
  const double r2 = spec.radius * spec.radius;
  for (NodeId u = 0; u < static_cast<NodeId>(spec.node_count); ++u) {
    for (NodeId v = u + 1; v < static_cast<NodeId>(spec.node_count); ++v) {
      const double dx = pos[u][0] - pos[v][0];
      const double dy = pos[u][1] - pos[v][1];
      if (dx * dx + dy * dy <= r2) edges.emplace_back(u, v);
    }
  }
  Graph g = Graph::from_edges(static_cast<NodeId>(spec.node_count),
                              std::move(edges), {}, std::move(pos));
  g.set_kind("rgg");
  return g;
}

Graph gen_tree(const TreeSpec& spec) {
  if (spec.degree < 2) throw std::invalid_argument("tree degree must be >= 2");
  if (spec.height < 1) throw std::invalid_argument("tree height must be >= 1");

  std::size_t n = 0, level_size = 1;
  for (int l = 0; l <= spec.height; ++l) {
    n += level_size;
    level_size *= static_cast<std::size_t>(spec.degree);
  }
  const std::size_t first_leaf = n - level_size / static_cast<std::size_t>(spec.degree);

  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(n - 1);
  for (NodeId v = 1; v < n; ++v)
    edges.emplace_back(static_cast<NodeId>((v - 1) / spec.degree), v);
  std::vector<std::uint8_t> mask(n, 1);
  for (std::size_t v = first_leaf; v < n; ++v) mask[v] = 0;

  Graph g = Graph::from_edges(static_cast<NodeId>(n), std::move(edges),
                              std::move(mask));
  g.set_kind("tree");
  return g;
}

ComponentResult largest_component(const Graph& g, NodeId source) {
  if (source >= g.node_count()) throw std::invalid_argument("source out of range");
  ComponentResult res;
  res.member.assign(g.node_count(), 0);
  std::vector<NodeId> queue{source};
  res.member[source] = 1;
  while (!queue.empty()) {
    NodeId u = queue.back();
    queue.pop_back();
    ++res.size;
    for (NodeId v : g.neighbors(u)) {
      if (!res.member[v]) {
        res.member[v] = 1;
        queue.push_back(v);
      }
    }
  }
  return res;
}

std::string to_json(const Graph& g) {
  nlohmann::json j;
  j["nodes"] = g.node_count();
  auto edges = nlohmann::json::array();
  for (NodeId u = 0; u < g.node_count(); ++u)
    for (NodeId v : g.neighbors(u))
      if (u < v) edges.push_back({u, v});
  j["edges"] = std::move(edges);
  j["forward_mask"] = std::vector<bool>(g.forward_mask().begin(),
                                        g.forward_mask().end());
  if (g.has_positions()) j["positions"] = g.positions();
  if (!g.kind().empty()) {
    j["kind"] = g.kind();
    if (g.kind() == "grid") {
      j["rows"] = g.meta_rows();
      j["cols"] = g.meta_cols();
    }
  }
  return j.dump();
}

Graph graph_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  const NodeId n = j.at("nodes").get<NodeId>();
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (const auto& e : j.at("edges"))
    edges.emplace_back(e.at(0).get<NodeId>(), e.at(1).get<NodeId>());
  std::vector<std::uint8_t> mask;
  if (j.contains("forward_mask"))
    for (const auto& b : j.at("forward_mask")) mask.push_back(b.get<bool>() ? 1 : 0);
  std::vector<std::array<double, 2>> pos;
  if (j.contains("positions"))
    pos = j.at("positions").get<std::vector<std::array<double, 2>>>();
  Graph g = Graph::from_edges(n, std::move(edges), std::move(mask), std::move(pos));
  if (j.contains("kind"))
    g.set_kind(j.at("kind").get<std::string>(), j.value("rows", 0), j.value("cols", 0));
  return g;
}

void save_graph(const Graph& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << to_json(g) << '\n';
}

Graph load_graph(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open graph file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return graph_from_json(buf.str());
}

}  // namespace pfwd
