#include "pfwd/estimator.hpp"

#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pfwd {
namespace {

int resolve_threads(int requested) {
#ifdef _OPENMP
  return requested > 0 ? requested : omp_get_max_threads();
#else
  (void)requested;
  return 1;
#endif
}

Estimate reduce(std::span<const double> samples) {
  Estimate est;
  est.trials = static_cast<int>(samples.size());
  double sum = 0.0;
  for (double x : samples) sum += x;
  est.mean = sum / est.trials;
  if (est.trials > 1) {
    double ss = 0.0;
    for (double x : samples) {
      const double d = x - est.mean;
      ss += d * d;
    }
    est.std_error = std::sqrt(ss / (est.trials - 1)) / std::sqrt(est.trials);
  }
  return est;
}

CoverageLoad reduce_outcomes(std::span<const TrialOutcome> outcomes, NodeId n_nodes) {
  std::vector<double> coverage(outcomes.size()), load(outcomes.size());
  for (std::size_t t = 0; t < outcomes.size(); ++t) {
    coverage[t] = static_cast<double>(outcomes[t].receivers) / n_nodes;
    load[t] = static_cast<double>(outcomes[t].transmissions);
  }
  return {reduce(coverage), reduce(load)};
}

/// Exact coverage of the deterministic endpoints: at p=1 every
/// forward-permitted node relays, at p=0 only the source transmits.
double coverage_at_one(const Graph& g, NodeId source) {
  std::vector<std::uint8_t> all(g.node_count(), 1);
  return static_cast<double>(packet_reach(g, source, all).size()) / g.node_count();
}

double coverage_at_zero(const Graph& g, NodeId source) {
  return (1.0 + g.degree(source)) / g.node_count();
}

}  // namespace

int coded_packet_count(int k, double rho) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (rho < 0.0) throw std::invalid_argument("redundancy must be >= 0");
  return static_cast<int>(std::floor(k * (1.0 + rho) + 0.5));
}

CoverageLoad estimate_serial(const Graph& g, const CodingConfig& coding,
                             const ProtocolParams& proto, int trials,
                             std::uint64_t seed) {
  validate_protocol(g, coding, proto);
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  std::vector<TrialOutcome> outcomes(trials);
  TrialWorkspace ws;
  for (int t = 0; t < trials; ++t)
    outcomes[t] = run_trial(g, coding, proto, TrialRng(seed, t), ws);
  return reduce_outcomes(outcomes, g.node_count());
}

CoverageLoad estimate(const Graph& g, const CodingConfig& coding,
                      const ProtocolParams& proto, int trials,
                      std::uint64_t seed, const EstimatorOptions& opts) {
  validate_protocol(g, coding, proto);
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
#ifdef _OPENMP
  std::vector<TrialOutcome> outcomes(trials);
#pragma omp parallel num_threads(resolve_threads(opts.threads))
  {
    TrialWorkspace ws;
#pragma omp for schedule(static)
    for (int t = 0; t < trials; ++t)
      outcomes[t] = run_trial(g, coding, proto, TrialRng(seed, t), ws);
  }
  return reduce_outcomes(outcomes, g.node_count());
#else
  (void)opts;
  return estimate_serial(g, coding, proto, trials, seed);
#endif
}

MinPResult min_forwarding_probability(const Graph& g, const CodingConfig& coding,
                                      NodeId source, double delta, int trials,
                                      std::uint64_t seed,
                                      const SearchOptions& opts) {
  coding.validate();
  if (source >= g.node_count()) throw std::invalid_argument("source out of range");
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("delta must lie in (0,1)");
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (!(opts.p_tolerance > 0.0))
    throw std::invalid_argument("p tolerance must be positive");
  if (opts.mode == SearchMode::linear && !(opts.linear_step > 0.0))
    throw std::invalid_argument("linear step must be positive");

  const double target = 1.0 - delta;
  MinPResult res;
  if (coverage_at_one(g, source) < target - 1e-12) return res;  // infeasible
  if (coverage_at_zero(g, source) >= target) {
    res.p_min = 0.0;
    return res;
  }

  // Every probe reuses the same seed: common random numbers couple the
  // trials across p values, so the empirical coverage curve is monotone
  // and bisection on it is sound.
  auto coverage_at = [&](double p) {
    ++res.probes;
    return estimate(g, coding, ProtocolParams{p, source}, trials, seed,
                    {opts.threads})
        .coverage.mean;
  };

  if (opts.mode == SearchMode::linear) {
    double passing = 1.0;
    for (double p = 1.0 - opts.linear_step; p > 1e-12; p -= opts.linear_step) {
      if (coverage_at(p) < target) break;
      passing = p;
    }
    res.p_min = passing;
    return res;
  }

  double lo = 0.0, hi = 1.0;
  while (hi - lo > opts.p_tolerance) {
    const double mid = 0.5 * (lo + hi);
    (coverage_at(mid) >= target ? hi : lo) = mid;
  }
  res.p_min = hi;
  return res;
}

std::vector<SweepPoint> sweep_redundancy(const Graph& g, NodeId source, int k,
                                         std::span<const double> rho_list,
                                         double delta, int trials,
                                         std::uint64_t seed,
                                         const SearchOptions& opts) {
  std::vector<SweepPoint> rows;
  rows.reserve(rho_list.size());
  for (double rho : rho_list) {
    SweepPoint pt;
    pt.rho = rho;
    pt.n = coded_packet_count(k, rho);
    pt.delta = delta;
    const CodingConfig coding{k, pt.n};
    const MinPResult found =
        min_forwarding_probability(g, coding, source, delta, trials, seed, opts);
    if (found.p_min) {
      pt.p_min = found.p_min;
      const CoverageLoad at_min =
          estimate(g, coding, ProtocolParams{*found.p_min, source}, trials, seed,
                   {opts.threads});
      pt.tau = at_min.load.mean;
      pt.tau_std_error = at_min.load.std_error;
    }
    rows.push_back(pt);
  }
  return rows;
}

}  // namespace pfwd
