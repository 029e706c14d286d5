#pragma once

#include <stdexcept>

namespace pfwd {

/// Parameters for the closed-form analysis of probabilistic forwarding on a
/// complete d-ary tree rooted at the source, with leaves not transmitting.
struct TreeAnalysisInput {
  int height = 1;      // H >= 1
  int k = 1;           // message packets
  int n = 1;           // coded packets, n >= k
  double delta = 0.1;  // coverage shortfall, in (0, 1/2)
  int degree = 2;      // d >= 2

  void validate() const {
    if (height < 1) throw std::invalid_argument("tree height must be >= 1");
    if (k < 1 || n < k) throw std::invalid_argument("coding requires n >= k >= 1");
    if (!(delta > 0.0 && delta < 0.5))
      throw std::invalid_argument("delta must lie in (0, 1/2)");
    if (degree < 2) throw std::invalid_argument("tree degree must be >= 2");
  }
};

/// Number of nodes in a complete d-ary tree of the given height.
double tree_node_count(int degree, int height);

/// Upper tail P(Binomial(n, p) >= k). Log-space accumulation anchored at the
/// distribution mode keeps it stable up to n ~ 1e5.
double binomial_tail(int n, double p, int k);

/// Relative entropy D(r||s) = r ln(r/s) + (1-r) ln((1-r)/(1-s)) in nats,
/// with the continuity conventions 0 ln 0 = 0. For s in {0,1} the value is
/// +infinity unless r matches s.
double relative_entropy(double r, double s);

/// E[R] = 1 + sum_{l=1..H} d^l P(Bin(n, p^{l-1}) >= k): a node at depth l
/// receives a given packet iff the l-1 strict ancestors below the root all
/// forward it.
double tree_expected_receivers(const TreeAnalysisInput& input, double p);

/// E[T] = n ((dp)^H - 1) / (dp - 1); continuous limit n*H at dp = 1.
/// Monotonically increasing in p.
double tree_expected_transmissions(const TreeAnalysisInput& input, double p);

/// Least p with E[R]/N >= 1 - delta, solved by bisection (the coverage is a
/// continuous, monotonically increasing polynomial in p) to 1e-9. Returns 0
/// when the source and its children alone already meet the target.
double tree_min_p_exact(const TreeAnalysisInput& input);

/// Large-k approximation of the minimum forwarding probability on a binary
/// tree: (1/(1+rho))^(1/(H-1)). Requires height >= 2.
double tree_min_p_closedform(int height, double rho);

/// Matching transmission count approximation for a binary tree:
/// k (2^H c - (1+rho)) / (2c - 1) with c = (1/(1+rho))^(1/(H-1)).
/// Throws std::domain_error when the denominator is not positive (the
/// approximation leaves its validity range).
double tree_tau_closedform(int height, int k, double rho);

struct ChernoffTailBounds {
  double lower = 0.0;
  double upper = 1.0;
  bool at_boundary = false;  // p^level equals k/n exactly: mean is exactly k
};

/// Chernoff bounds on P(Bin(n, p^level) >= k) with exponent
/// n * D(k/n || p^level). When p^level > k/n the lower bound
/// 1 - exp(-n D) applies; when p^level < k/n the upper bound exp(-n D)
/// applies. The inapplicable side is the trivial bound.
ChernoffTailBounds chernoff_tail_bounds(const TreeAnalysisInput& input,
                                        double p, int level);

}  // namespace pfwd
