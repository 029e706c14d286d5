#include "pfwd/oracle.hpp"

#include <bit>
#include <stdexcept>

#include "pfwd/tree_analytics.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pfwd {

ReachProfile exact_reach_probabilities(const Graph& g, NodeId source, double p,
                                       int max_enum_bits, int threads) {
  if (source >= g.node_count()) throw std::invalid_argument("source out of range");
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("p must lie in [0,1]");

  const NodeId n_nodes = g.node_count();
  std::vector<int> free_index(n_nodes, -1);
  int free_count = 0;
  for (NodeId v = 0; v < n_nodes; ++v)
    if (v != source && g.forward_allowed(v)) free_index[v] = free_count++;
  if (free_count > max_enum_bits)
    throw std::invalid_argument(
        "graph too large for exhaustive enumeration of activation patterns");

  // Pattern weight p^(active) (1-p)^(inactive); long double accumulators so
  // up to 2^20 summands stay well inside the 1e-12 agreement targets.
  std::vector<long double> pw(free_count + 1), qw(free_count + 1);
  pw[0] = qw[0] = 1.0L;
  for (int i = 1; i <= free_count; ++i) {
    pw[i] = pw[i - 1] * static_cast<long double>(p);
    qw[i] = qw[i - 1] * (1.0L - static_cast<long double>(p));
  }

  const std::int64_t total = std::int64_t{1} << free_count;
#ifdef _OPENMP
  const int n_threads =
      threads > 0 ? threads : std::min(omp_get_max_threads(), 8);
#else
  const int n_threads = 1;
  (void)threads;
#endif
  std::vector<std::vector<long double>> partial(
      n_threads, std::vector<long double>(n_nodes, 0.0L));

#ifdef _OPENMP
#pragma omp parallel num_threads(n_threads)
#endif
  {
#ifdef _OPENMP
    const int tid = omp_get_thread_num();
#else
    const int tid = 0;
#endif
    auto& acc = partial[tid];
    ReachWorkspace ws;
#ifdef _OPENMP
#pragma omp for schedule(static)
#endif
    for (std::int64_t bits = 0; bits < total; ++bits) {
      const int active = std::popcount(static_cast<std::uint64_t>(bits));
      const long double weight = pw[active] * qw[free_count - active];
      if (weight == 0.0L) continue;
      reach_into(
          g, source,
          [&](NodeId v) {
            const int fi = free_index[v];
            return fi >= 0 && ((bits >> fi) & 1) != 0;
          },
          ws);
      for (NodeId v : ws.order) acc[v] += weight;
    }
  }

  ReachProfile profile;
  profile.p = p;
  profile.q.resize(n_nodes);
  for (NodeId v = 0; v < n_nodes; ++v) {
    long double q = 0.0L;
    for (int t = 0; t < n_threads; ++t) q += partial[t][v];
    profile.q[v] = static_cast<double>(q);
  }
  return profile;
}

ExactExpectations exact_expectations(const ReachProfile& profile,
                                     const CodingConfig& coding, const Graph& g,
                                     NodeId source) {
  coding.validate();
  if (profile.q.size() != g.node_count())
    throw std::invalid_argument("profile does not match graph");
  ExactExpectations ex;
  double relay_mass = 0.0;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    ex.receivers += binomial_tail(coding.n, profile.q[v], coding.k);
    if (v != source && g.forward_allowed(v)) relay_mass += profile.q[v];
  }
  ex.transmissions = coding.n * (1.0 + profile.p * relay_mass);
  return ex;
}

}  // namespace pfwd
