// Times the OpenMP trial kernel against the serial reference loop on the
// simulation workloads that dominate the sweeps. Usage:
//   bench_forwarding [trials]

#include <cstdio>
#include <cstdlib>
#include <chrono>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "pfwd/estimator.hpp"
#include "pfwd/graph.hpp"

using namespace pfwd;

namespace {

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

void bench_case(const char* name, const Graph& g, CodingConfig coding,
                ProtocolParams proto, int trials) {
  const double t0 = now_seconds();
  const CoverageLoad serial = estimate_serial(g, coding, proto, trials, 7);
  const double t1 = now_seconds();
  const CoverageLoad parallel = estimate(g, coding, proto, trials, 7);
  const double t2 = now_seconds();

  const bool identical = serial.coverage.mean == parallel.coverage.mean &&
                         serial.load.mean == parallel.load.mean;
  std::printf("%-22s serial %7.3fs   parallel %7.3fs   speedup %4.2fx   %s\n",
              name, t1 - t0, t2 - t1, (t1 - t0) / (t2 - t1),
              identical ? "results identical" : "RESULTS DIFFER");
}

}  // namespace

int main(int argc, char** argv) {
  const int trials = argc > 1 ? std::atoi(argv[1]) : 2000;
#ifdef _OPENMP
  std::printf("threads: %d, trials: %d\n", omp_get_max_threads(), trials);
#else
  std::printf("threads: 1 (OpenMP disabled), trials: %d\n", trials);
#endif
  bench_case("tree H=10, n=30", gen_tree({2, 10}), {20, 30}, {0.8, 0}, trials);
  bench_case("grid 31x31, n=130", gen_grid({31, 31, {}}), {100, 130},
             {0.7, 480}, trials / 10);
  bench_case("rgg 60, n=150", gen_rgg({60, 20.0, 20.0, 5.5, 42}), {100, 150},
             {0.5, 0}, trials);
  return 0;
}
