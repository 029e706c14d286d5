#include "pfwd/tree_analytics.hpp"

#include <cmath>
#include <limits>

namespace pfwd {

double tree_node_count(int degree, int height) {
  double total = 0.0, level = 1.0;
  for (int l = 0; l <= height; ++l) {
    total += level;
    level *= degree;
  }
  return total;
}

double binomial_tail(int n, double p, int k) {
  if (n < 0) throw std::invalid_argument("binomial_tail: n must be >= 0");
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("binomial_tail: p must lie in [0,1]");
  if (k <= 0) return 1.0;
  if (k > n) return 0.0;
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return 1.0;

  // Sum pmf terms over [k, n] relative to the largest one (at the mode,
  // clamped into the range), so no term overflows and the anchor exp()
  // cannot underflow: the modal pmf is at least 1/(n+1).
  int mode = static_cast<int>(std::floor((n + 1) * p));
  mode = std::min(std::max(mode, k), n);
  const double log_anchor = std::lgamma(n + 1.0) - std::lgamma(mode + 1.0) -
                            std::lgamma(n - mode + 1.0) +
                            mode * std::log(p) + (n - mode) * std::log1p(-p);
  const double odds = p / (1.0 - p);
  double sum = 1.0;  // the anchor term itself
  double term = 1.0;
  for (int i = mode + 1; i <= n; ++i) {
    term *= static_cast<double>(n - i + 1) / i * odds;
    sum += term;
    if (term < sum * 1e-18) break;
  }
  term = 1.0;
  for (int i = mode; i > k; --i) {
    term *= static_cast<double>(i) / (n - i + 1) / odds;
    sum += term;
    if (term < sum * 1e-18) break;
  }
  const double tail = std::exp(log_anchor) * sum;
  return std::min(1.0, std::max(0.0, tail));
}

double relative_entropy(double r, double s) {
  if (!(r >= 0.0 && r <= 1.0))
    throw std::invalid_argument("relative_entropy: r must lie in [0,1]");
  if (!(s >= 0.0 && s <= 1.0))
    throw std::invalid_argument("relative_entropy: s must lie in [0,1]");
  const double inf = std::numeric_limits<double>::infinity();
  if (s <= 0.0) return r == 0.0 ? 0.0 : inf;
  if (s >= 1.0) return r == 1.0 ? 0.0 : inf;
  double value = 0.0;
  if (r > 0.0) value += r * std::log(r / s);
  if (r < 1.0) value += (1.0 - r) * std::log((1.0 - r) / (1.0 - s));
  return value;
}

double tree_expected_receivers(const TreeAnalysisInput& input, double p) {
  input.validate();
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("p must lie in [0,1]");
  double total = 1.0, level_nodes = 1.0;
  for (int l = 1; l <= input.height; ++l) {
    level_nodes *= input.degree;
    total += level_nodes * binomial_tail(input.n, std::pow(p, l - 1), input.k);
  }
  return total;
}

double tree_expected_transmissions(const TreeAnalysisInput& input, double p) {
  input.validate();
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("p must lie in [0,1]");
  const double x = input.degree * p;
  if (std::abs(x - 1.0) < 1e-9) return static_cast<double>(input.n) * input.height;
  return input.n * (std::pow(x, input.height) - 1.0) / (x - 1.0);
}

double tree_min_p_exact(const TreeAnalysisInput& input) {
  input.validate();
  const double n_nodes = tree_node_count(input.degree, input.height);
  const double target = 1.0 - input.delta;
  auto coverage = [&](double p) {
    return tree_expected_receivers(input, p) / n_nodes;
  };
  if (coverage(0.0) >= target) return 0.0;
  double lo = 0.0, hi = 1.0;
  while (hi - lo > 1e-9) {
    const double mid = 0.5 * (lo + hi);
    (coverage(mid) >= target ? hi : lo) = mid;
  }
  return hi;
}

double tree_min_p_closedform(int height, double rho) {
  if (height < 2)
    throw std::invalid_argument("closed form needs height >= 2");
  if (rho < 0.0) throw std::invalid_argument("redundancy must be >= 0");
  return std::pow(1.0 / (1.0 + rho), 1.0 / (height - 1));
}

double tree_tau_closedform(int height, int k, double rho) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  const double c = tree_min_p_closedform(height, rho);
  const double denom = 2.0 * c - 1.0;
  if (denom < 1e-12)
    throw std::domain_error("transmission closed form out of range (2p <= 1)");
  return k * (std::ldexp(1.0, height) * c - (1.0 + rho)) / denom;
}

ChernoffTailBounds chernoff_tail_bounds(const TreeAnalysisInput& input,
                                        double p, int level) {
  input.validate();
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("p must lie in [0,1]");
  if (level < 0) throw std::invalid_argument("level must be >= 0");

  const double rate = static_cast<double>(input.k) / input.n;
  const double pl = std::pow(p, level);
  ChernoffTailBounds bounds;
  if (pl == rate) {
    bounds.at_boundary = true;  // Bin(n, p^l) has mean exactly k
    return bounds;
  }
  const double exponent = input.n * relative_entropy(rate, pl);
  if (pl > rate) {
    bounds.lower = std::max(0.0, 1.0 - std::exp(-exponent));
  } else {
    bounds.upper = std::min(1.0, std::exp(-exponent));
  }
  return bounds;
}

}  // namespace pfwd
