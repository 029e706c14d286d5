#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pfwd/engine.hpp"
#include "pfwd/graph.hpp"

namespace pfwd {

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;  // sample std / sqrt(trials); 0 for a single trial
  int trials = 0;
};

struct CoverageLoad {
  Estimate coverage;  // E[R/N]
  Estimate load;      // E[T]
};

struct EstimatorOptions {
  int threads = 0;  // 0 = all available
};

/// Monte Carlo estimate of coverage E[R/N] and load E[T] over independent
/// trials. Per-trial seeds are derived from `seed` by counter, and outcomes
/// are reduced in trial order, so the result is identical for any thread
/// count. Trials run in parallel when OpenMP is enabled.
CoverageLoad estimate(const Graph& g, const CodingConfig& coding,
                      const ProtocolParams& proto, int trials,
                      std::uint64_t seed, const EstimatorOptions& opts = {});

/// Plain single-threaded reference loop; produces bit-identical results to
/// estimate(). Kept for testing and benchmarking the parallel kernel.
CoverageLoad estimate_serial(const Graph& g, const CodingConfig& coding,
                             const ProtocolParams& proto, int trials,
                             std::uint64_t seed);

enum class SearchMode {
  bisection,  // O(log 1/tol) probes; valid because coverage is monotone in p
  linear,     // descending sweep from p=1 in steps of linear_step
};

struct SearchOptions {
  double p_tolerance = 0.01;
  int threads = 0;
  SearchMode mode = SearchMode::bisection;
  double linear_step = 0.02;  // used by SearchMode::linear only
};

struct MinPResult {
  std::optional<double> p_min;  // empty when the target is unreachable at p=1
  int probes = 0;               // Monte Carlo estimates performed
};

/// Smallest forwarding probability whose estimated coverage reaches 1-delta.
/// All probes share `seed` (common random numbers), which couples the trials
/// across probed p values and keeps the empirical coverage curve monotone.
/// Coverage at the endpoints p=0 and p=1 is computed exactly, so infeasible
/// targets are detected without simulation.
MinPResult min_forwarding_probability(const Graph& g, const CodingConfig& coding,
                                      NodeId source, double delta, int trials,
                                      std::uint64_t seed,
                                      const SearchOptions& opts = {});

struct SweepPoint {
  double rho = 0.0;
  int n = 0;
  std::optional<double> p_min;  // empty = infeasible at this redundancy
  std::optional<double> tau;    // load estimate at p_min
  double tau_std_error = 0.0;
  double delta = 0.0;
  bool feasible() const { return p_min.has_value(); }
};

/// For each redundancy rho: n = round(k(1+rho)), search for the minimum
/// forwarding probability, then estimate the expected transmission count at
/// it. Infeasible redundancies produce a row with empty p_min/tau instead of
/// aborting the sweep. Rows are returned in input order.
std::vector<SweepPoint> sweep_redundancy(const Graph& g, NodeId source, int k,
                                         std::span<const double> rho_list,
                                         double delta, int trials,
                                         std::uint64_t seed,
                                         const SearchOptions& opts = {});

/// n = round(k(1+rho)), rounding half up.
int coded_packet_count(int k, double rho);

}  // namespace pfwd
