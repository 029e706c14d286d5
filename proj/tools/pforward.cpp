// Command-line front end: graph generation, Monte Carlo estimates,
// redundancy sweeps, exact tree analysis, and the row-pruned grid-family
// experiment. All results are written as CSV (header row, LF endings,
// floats with 6 significant digits); identical arguments and seeds produce
// byte-identical output regardless of thread count.

#include <cstdio>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pfwd/estimator.hpp"
#include "pfwd/graph.hpp"
#include "pfwd/oracle.hpp"
#include "pfwd/tree_analytics.hpp"

using namespace pfwd;

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string fmt_opt(const std::optional<double>& v) {
  return v ? fmt(*v) : std::string{};
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::fwrite(content.data(), 1, content.size(), stdout);
    return;
  }
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  std::fwrite(content.data(), 1, content.size(), f);
  std::fclose(f);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return parts;
}

int parse_int(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string("cannot parse ") + what + ": '" + s + "'");
  }
}

double parse_double(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string("cannot parse ") + what + ": '" + s + "'");
  }
}

// Compact generator specs for commands that accept an inline topology:
//   grid:ROWSxCOLS[:q=Q]    e.g. grid:31x31:q=5
//   tree:DEGREE:HEIGHT      e.g. tree:2:10
//   rgg:N:WxH:RADIUS:SEED   e.g. rgg:60:20x20:5.5:42
Graph graph_from_spec(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.empty()) throw std::invalid_argument("empty generator spec");
  const std::string& head = parts[0];
  if (head == "grid") {
    if (parts.size() < 2 || parts.size() > 3)
      throw std::invalid_argument("grid spec is grid:ROWSxCOLS[:q=Q]");
    const auto dims = split(parts[1], 'x');
    if (dims.size() != 2) throw std::invalid_argument("grid dims look like 31x31");
    GridSpec g{parse_int(dims[0], "rows"), parse_int(dims[1], "cols"), {}};
    if (parts.size() == 3) {
      if (parts[2].rfind("q=", 0) != 0)
        throw std::invalid_argument("grid period looks like q=5");
      g.horizontal_row_period = parse_int(parts[2].substr(2), "q");
    }
    return gen_grid(g);
  }
  if (head == "tree") {
    if (parts.size() != 3)
      throw std::invalid_argument("tree spec is tree:DEGREE:HEIGHT");
    return gen_tree({parse_int(parts[1], "degree"), parse_int(parts[2], "height")});
  }
  if (head == "rgg") {
    if (parts.size() != 5)
      throw std::invalid_argument("rgg spec is rgg:N:WxH:RADIUS:SEED");
    const auto dims = split(parts[2], 'x');
    if (dims.size() != 2) throw std::invalid_argument("rgg area looks like 20x20");
    RggSpec r;
    r.node_count = parse_int(parts[1], "node count");
    r.width = parse_double(dims[0], "width");
    r.height = parse_double(dims[1], "height");
    r.radius = parse_double(parts[3], "radius");
    r.seed = static_cast<std::uint64_t>(std::stoull(parts[4]));
    return gen_rgg(r);
  }
  throw std::invalid_argument("unknown generator '" + head + "' (grid|tree|rgg)");
}

struct GraphArgs {
  std::string file;
  std::string gen;

  void attach(CLI::App* cmd) {
    auto* f = cmd->add_option("--graph", file, "graph JSON file");
    auto* g = cmd->add_option("--gen", gen,
                              "inline generator spec (grid:RxC[:q=Q] | "
                              "tree:D:H | rgg:N:WxH:R:SEED)");
    f->excludes(g);
    g->excludes(f);
  }

  Graph resolve() const {
    if (!file.empty()) return load_graph(file);
    if (!gen.empty()) return graph_from_spec(gen);
    throw std::invalid_argument("provide a graph via --graph or --gen");
  }
};

// Default source: grid center, tree root, seeded-random node for RGGs.
NodeId pick_source(const Graph& g, const std::optional<NodeId>& requested,
                   std::uint64_t seed) {
  NodeId src = 0;
  if (requested) {
    src = *requested;
  } else if (g.kind() == "grid" && g.meta_rows() > 0) {
    src = static_cast<NodeId>((g.meta_rows() / 2) * g.meta_cols() +
                              g.meta_cols() / 2);
  } else if (g.kind() == "rgg") {
    src = static_cast<NodeId>(splitmix64(seed ^ 0x736f75726365ull) %
                              g.node_count());
  }
  if (src >= g.node_count()) throw std::invalid_argument("source node out of range");
  return src;
}

// Optional JSON config file holding defaults for experiment flags (keys named
// like the flags: k, rho, delta, trials, p_tol, seed, threads, source, graph,
// gen, out, search, p_step, n, p, height). Explicit CLI flags take precedence.
class ConfigMerge {
 public:
  ConfigMerge(CLI::App* cmd, const std::string& path) : cmd_(cmd) {
    if (path.empty()) return;
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    json_ = nlohmann::json::parse(in);
    if (!json_.is_object())
      throw std::invalid_argument("config file must hold a JSON object");
  }

  bool in_config(const char* key) const { return json_.contains(key); }
  void mark_used(const char* key) { used_.insert(key); }

  bool flag_given(const char* flag) const {
    const CLI::Option* opt = cmd_->get_option_no_throw(flag);
    return opt != nullptr && opt->count() > 0;
  }

  /// true when the value arrived via flag or config
  bool provided(const char* flag, const char* key) const {
    return flag_given(flag) || json_.contains(key);
  }

  template <class T>
  void merge(const char* flag, const char* key, T& value) {
    mark_used(key);
    if (!flag_given(flag) && json_.contains(key))
      value = json_.at(key).get<T>();
  }
  template <class T>
  void merge(const char* flag, const char* key, std::optional<T>& value) {
    mark_used(key);
    if (!flag_given(flag) && json_.contains(key))
      value = json_.at(key).get<T>();
  }
  /// accepts a single number or an array for redundancy lists
  void merge_rho_list(const char* flag, std::vector<double>& value) {
    mark_used("rho");
    if (flag_given(flag) || !json_.contains("rho")) return;
    const auto& rho = json_.at("rho");
    if (rho.is_array())
      value = rho.get<std::vector<double>>();
    else
      value = {rho.get<double>()};
  }

  void reject_unknown_keys() const {
    for (const auto& [key, unused] : json_.items())
      if (!used_.count(key))
        throw std::invalid_argument("unknown config key: " + key);
  }

 private:
  CLI::App* cmd_;
  nlohmann::json json_ = nlohmann::json::object();
  std::set<std::string> used_;
};

void warn_if_underpowered(int trials) {
  if (trials < 2)
    std::fprintf(stderr,
                 "warning: a single trial cannot estimate standard errors; "
                 "results are statistically meaningless\n");
}

std::string sweep_rows_csv(const std::vector<SweepPoint>& rows,
                           const std::string& label) {
  std::string csv;
  for (const auto& row : rows) {
    if (!label.empty()) csv += label + ",";
    csv += fmt(row.rho) + "," + std::to_string(row.n) + "," +
           fmt_opt(row.p_min) + "," + fmt_opt(row.tau) + "," + fmt(row.delta) +
           "," + (row.feasible() ? "true" : "false") + "\n";
  }
  return csv;
}

bool any_feasible(const std::vector<SweepPoint>& rows) {
  for (const auto& row : rows)
    if (row.feasible()) return true;
  return false;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"probabilistic forwarding of MDS-coded packets: simulator and analytics"};
  app.require_subcommand(1);

  // ---- generate ----
  auto* generate = app.add_subcommand("generate", "write a topology as graph JSON");
  generate->require_subcommand(1);
  std::string gen_out = "-";
  GridSpec grid_spec;
  int grid_period = 0;
  auto* gen_grid_cmd = generate->add_subcommand("grid", "rows x cols lattice");
  gen_grid_cmd->add_option("--rows", grid_spec.rows)->required();
  gen_grid_cmd->add_option("--cols", grid_spec.cols)->required();
  gen_grid_cmd->add_option("--row-period", grid_period,
                           "keep horizontal edges only in rows that are multiples of this");
  RggSpec rgg_spec;
  auto* gen_rgg_cmd = generate->add_subcommand("rgg", "random geometric graph");
  gen_rgg_cmd->add_option("--nodes", rgg_spec.node_count)->required();
  gen_rgg_cmd->add_option("--width", rgg_spec.width)->required();
  gen_rgg_cmd->add_option("--height", rgg_spec.height)->required();
  gen_rgg_cmd->add_option("--radius", rgg_spec.radius)->required();
  gen_rgg_cmd->add_option("--seed", rgg_spec.seed, "layout seed");
  TreeSpec tree_spec;
  auto* gen_tree_cmd = generate->add_subcommand("tree", "complete d-ary tree");
  gen_tree_cmd->add_option("--degree", tree_spec.degree)->capture_default_str();
  gen_tree_cmd->add_option("--height", tree_spec.height)->required();
  for (auto* cmd : {gen_grid_cmd, gen_rgg_cmd, gen_tree_cmd})
    cmd->add_option("--out", gen_out, "output path ('-' = stdout)");

  // ---- shared experiment flags ----
  struct {
    GraphArgs graph;
    int k = 1;
    std::vector<double> rho_list;
    std::optional<int> n;
    std::optional<double> rho;
    double p = 0.5;
    double delta = 0.1;
    int trials = 500;
    double p_tol = 0.01;
    std::uint64_t seed = 12345;
    int threads = 0;
    std::optional<NodeId> source;
    std::string search = "bisection";
    double p_step = 0.02;
    std::string out = "-";
    bool per_node = false;
    int max_bits = 20;
    int height = 2;
    std::string config;
  } a;

  auto add_common = [&](CLI::App* cmd, bool with_search) {
    cmd->add_option("--trials", a.trials, "Monte Carlo trials per estimate")
        ->capture_default_str();
    cmd->add_option("--seed", a.seed, "master seed")->capture_default_str();
    cmd->add_option("--threads", a.threads, "worker threads (0 = all cores)");
    cmd->add_option("--source", a.source, "source node id");
    cmd->add_option("--out", a.out, "output path ('-' = stdout)");
    cmd->add_option("--config", a.config,
                    "JSON file with defaults; flags take precedence");
    if (with_search) {
      cmd->add_option("--delta", a.delta, "coverage shortfall target")
          ->capture_default_str();
      cmd->add_option("--p-tol", a.p_tol, "bisection tolerance on p")
          ->capture_default_str();
      cmd->add_option("--search", a.search, "bisection | linear")
          ->check(CLI::IsMember({"bisection", "linear"}));
      cmd->add_option("--p-step", a.p_step, "step of the linear search")
          ->capture_default_str();
    }
  };

  // ---- estimate ----
  auto* est_cmd = app.add_subcommand(
      "estimate", "coverage E[R/N] and load E[T] at a fixed probability");
  a.graph.attach(est_cmd);
  est_cmd->add_option("--k", a.k, "message packets");
  auto* est_n = est_cmd->add_option("--n", a.n, "coded packets");
  auto* est_rho = est_cmd->add_option("--rho", a.rho, "redundancy (n-k)/k");
  est_n->excludes(est_rho);
  est_rho->excludes(est_n);
  est_cmd->add_option("--p", a.p, "forwarding probability");
  add_common(est_cmd, false);

  // ---- sweep ----
  auto* sweep_cmd = app.add_subcommand(
      "sweep", "minimum forwarding probability and load across redundancies");
  a.graph.attach(sweep_cmd);
  sweep_cmd->add_option("--k", a.k, "message packets");
  sweep_cmd->add_option("--rho", a.rho_list, "redundancy values (repeatable)")
      ->delimiter(',');
  add_common(sweep_cmd, true);

  // ---- tree-exact ----
  auto* tree_cmd = app.add_subcommand(
      "tree-exact", "exact vs closed-form minimum p and load on binary trees");
  tree_cmd->add_option("--height", a.height, "tree height (>= 2)");
  tree_cmd->add_option("--k", a.k, "message packets");
  tree_cmd->add_option("--delta", a.delta)->capture_default_str();
  tree_cmd->add_option("--rho", a.rho_list, "redundancy values (repeatable)")
      ->delimiter(',');
  tree_cmd->add_option("--out", a.out, "output path ('-' = stdout)");
  tree_cmd->add_option("--config", a.config,
                       "JSON file with defaults; flags take precedence");

  // ---- grid-family ----
  auto* family_cmd = app.add_subcommand(
      "grid-family", "sweep over the 31x31 grid and its row-pruned variants");
  family_cmd->add_option("--k", a.k, "message packets");
  family_cmd->add_option("--rho", a.rho_list, "redundancy values (repeatable)")
      ->delimiter(',');
  add_common(family_cmd, true);

  // ---- oracle ----
  auto* oracle_cmd = app.add_subcommand(
      "oracle", "exact reach probabilities and expectations on small graphs");
  a.graph.attach(oracle_cmd);
  oracle_cmd->add_option("--p", a.p, "forwarding probability")->required();
  oracle_cmd->add_option("--k", a.k)->capture_default_str();
  auto* orc_n = oracle_cmd->add_option("--n", a.n, "coded packets (default k)");
  auto* orc_rho = oracle_cmd->add_option("--rho", a.rho, "redundancy (n-k)/k");
  orc_n->excludes(orc_rho);
  orc_rho->excludes(orc_n);
  oracle_cmd->add_flag("--per-node", a.per_node, "emit one q row per node");
  oracle_cmd->add_option("--max-bits", a.max_bits,
                         "enumeration size cap (free nodes)")
      ->capture_default_str();
  oracle_cmd->add_option("--source", a.source, "source node id");
  oracle_cmd->add_option("--seed", a.seed)->capture_default_str();
  oracle_cmd->add_option("--out", a.out, "output path ('-' = stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (generate->parsed()) {
      Graph g = [&] {
        if (gen_grid_cmd->parsed()) {
          if (grid_period > 0) grid_spec.horizontal_row_period = grid_period;
          return gen_grid(grid_spec);
        }
        if (gen_rgg_cmd->parsed()) return gen_rgg(rgg_spec);
        return gen_tree(tree_spec);
      }();
      write_output(gen_out, to_json(g) + "\n");
      return 0;
    }

    const auto resolve_n = [&] {
      if (a.n) return *a.n;
      if (a.rho) return coded_packet_count(a.k, *a.rho);
      return a.k;
    };

    const auto merge_graph_source = [&](ConfigMerge& cfg) {
      if (a.graph.file.empty() && a.graph.gen.empty() && cfg.in_config("graph") &&
          cfg.in_config("gen"))
        throw std::invalid_argument("config provides both graph and gen");
      cfg.merge("--graph", "graph", a.graph.file);
      cfg.merge("--gen", "gen", a.graph.gen);
      if (!a.graph.file.empty() && !a.graph.gen.empty()) {
        // a command-line source wins over the config's alternative
        if (cfg.flag_given("--graph")) a.graph.gen.clear();
        if (cfg.flag_given("--gen")) a.graph.file.clear();
      }
    };

    const auto merge_common = [&](ConfigMerge& cfg, bool with_search) {
      cfg.merge("--k", "k", a.k);
      cfg.merge("--trials", "trials", a.trials);
      cfg.merge("--seed", "seed", a.seed);
      cfg.merge("--threads", "threads", a.threads);
      cfg.merge("--source", "source", a.source);
      cfg.merge("--out", "out", a.out);
      if (with_search) {
        cfg.merge("--delta", "delta", a.delta);
        cfg.merge("--p-tol", "p_tol", a.p_tol);
        cfg.merge("--search", "search", a.search);
        cfg.merge("--p-step", "p_step", a.p_step);
        if (a.search != "bisection" && a.search != "linear")
          throw std::invalid_argument("search must be bisection or linear");
      }
      if (!cfg.provided("--k", "k"))
        throw std::invalid_argument("missing --k (flag or config)");
    };

    if (est_cmd->parsed()) {
      ConfigMerge cfg(est_cmd, a.config);
      // the n/rho pair: a command-line choice overrides the config entirely
      cfg.mark_used("n");
      cfg.mark_used("rho");
      if (est_cmd->count("--n") == 0 && est_cmd->count("--rho") == 0) {
        if (cfg.in_config("n") && cfg.in_config("rho"))
          throw std::invalid_argument("config provides both n and rho");
        cfg.merge("--n", "n", a.n);
        cfg.merge("--rho", "rho", a.rho);
      }
      cfg.merge("--p", "p", a.p);
      merge_graph_source(cfg);
      merge_common(cfg, false);
      cfg.reject_unknown_keys();
      if (!cfg.provided("--p", "p"))
        throw std::invalid_argument("missing --p (flag or config)");
      warn_if_underpowered(a.trials);
      const Graph g = a.graph.resolve();
      const CodingConfig coding{a.k, resolve_n()};
      const NodeId source = pick_source(g, a.source, a.seed);
      const auto est = estimate(g, coding, {a.p, source}, a.trials, a.seed,
                                {a.threads});
      std::string csv = "p,k,n,trials,coverage,coverage_se,load,load_se\n";
      csv += fmt(a.p) + "," + std::to_string(coding.k) + "," +
             std::to_string(coding.n) + "," + std::to_string(a.trials) + "," +
             fmt(est.coverage.mean) + "," + fmt(est.coverage.std_error) + "," +
             fmt(est.load.mean) + "," + fmt(est.load.std_error) + "\n";
      write_output(a.out, csv);
      return 0;
    }

    const auto make_search_opts = [&] {
      SearchOptions opts;
      opts.p_tolerance = a.p_tol;
      opts.threads = a.threads;
      opts.mode =
          a.search == "linear" ? SearchMode::linear : SearchMode::bisection;
      opts.linear_step = a.p_step;
      return opts;
    };

    if (sweep_cmd->parsed()) {
      ConfigMerge cfg(sweep_cmd, a.config);
      cfg.merge_rho_list("--rho", a.rho_list);
      merge_graph_source(cfg);
      merge_common(cfg, true);
      cfg.reject_unknown_keys();
      warn_if_underpowered(a.trials);
      const Graph g = a.graph.resolve();
      const NodeId source = pick_source(g, a.source, a.seed);
      const auto rows = sweep_redundancy(g, source, a.k, a.rho_list, a.delta,
                                         a.trials, a.seed, make_search_opts());
      write_output(a.out, "rho,n,p_min,tau,delta,feasible\n" +
                              sweep_rows_csv(rows, ""));
      return rows.empty() || any_feasible(rows) ? 0 : 2;
    }

    if (tree_cmd->parsed()) {
      ConfigMerge cfg(tree_cmd, a.config);
      cfg.merge("--height", "height", a.height);
      cfg.merge("--k", "k", a.k);
      cfg.merge("--delta", "delta", a.delta);
      cfg.merge_rho_list("--rho", a.rho_list);
      cfg.merge("--out", "out", a.out);
      cfg.reject_unknown_keys();
      if (!cfg.provided("--height", "height") || !cfg.provided("--k", "k"))
        throw std::invalid_argument(
            "tree-exact needs --height and --k (flag or config)");
      if (a.height < 2)
        throw std::invalid_argument("tree-exact needs --height >= 2");
      std::string csv = "rho,p_exact,p_closed,tau_exact,tau_closed\n";
      for (double rho : a.rho_list) {
        const int n = coded_packet_count(a.k, rho);
        const TreeAnalysisInput in{a.height, a.k, n, a.delta, 2};
        const double p_exact = tree_min_p_exact(in);
        const double tau_exact = tree_expected_transmissions(in, p_exact);
        const double p_closed = tree_min_p_closedform(a.height, rho);
        std::optional<double> tau_closed;
        try {
          tau_closed = tree_tau_closedform(a.height, a.k, rho);
        } catch (const std::domain_error&) {
          // closed form outside its validity range: leave the cell empty
        }
        csv += fmt(rho) + "," + fmt(p_exact) + "," + fmt(p_closed) + "," +
               fmt(tau_exact) + "," + fmt_opt(tau_closed) + "\n";
      }
      write_output(a.out, csv);
      return 0;
    }

    if (family_cmd->parsed()) {
      ConfigMerge cfg(family_cmd, a.config);
      cfg.merge_rho_list("--rho", a.rho_list);
      merge_common(cfg, true);
      cfg.reject_unknown_keys();
      warn_if_underpowered(a.trials);
      std::string csv = "graph,rho,n,p_min,tau,delta,feasible\n";
      bool feasible_seen = false, any_rows = false;
      for (const auto& [label, period] :
           std::vector<std::pair<std::string, int>>{
               {"G", 0}, {"G5", 5}, {"G10", 10}, {"G15", 15}}) {
        GridSpec spec{31, 31, {}};
        if (period > 0) spec.horizontal_row_period = period;
        const Graph g = gen_grid(spec);
        const NodeId source = pick_source(g, a.source, a.seed);
        const auto rows = sweep_redundancy(g, source, a.k, a.rho_list, a.delta,
                                           a.trials, a.seed, make_search_opts());
        csv += sweep_rows_csv(rows, label);
        feasible_seen = feasible_seen || any_feasible(rows);
        any_rows = any_rows || !rows.empty();
      }
      write_output(a.out, csv);
      return !any_rows || feasible_seen ? 0 : 2;
    }

    if (oracle_cmd->parsed()) {
      const Graph g = a.graph.resolve();
      const NodeId source = pick_source(g, a.source, a.seed);
      const auto profile =
          exact_reach_probabilities(g, source, a.p, a.max_bits, a.threads);
      std::string csv;
      if (a.per_node) {
        csv = "node,q\n";
        for (NodeId v = 0; v < g.node_count(); ++v)
          csv += std::to_string(v) + "," + fmt(profile.q[v]) + "\n";
      } else {
        const CodingConfig coding{a.k, resolve_n()};
        const auto ex = exact_expectations(profile, coding, g, source);
        csv = "p,k,n,expected_receivers,expected_transmissions\n";
        csv += fmt(a.p) + "," + std::to_string(coding.k) + "," +
               std::to_string(coding.n) + "," + fmt(ex.receivers) + "," +
               fmt(ex.transmissions) + "\n";
      }
      write_output(a.out, csv);
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
