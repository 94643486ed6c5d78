#pragma once

#include <utility>
#include <vector>

namespace expsum {

/// Quadrature parameters for approximating 1/x on [delta,1] by
/// sum_{j=A}^{B} h e^{jh} e^{-x e^{jh}}:
///   N = ceil(1/2 ln(24/eps)),  h = 2*pi / (e^2 (2N+1)^2),
/// with truncation indices A, B widened one step past the closed-form
/// floor/ceil values.
struct ExpSumParams {
  double eps;
  double delta;
  int n_order;   // Euler-Maclaurin order N behind the choice of h
  double h;
  long lower;    // A
  long upper;    // B
  long sparsity; // K = B - A + 1
};

/// The closed-form truncation indices before widening:
/// A = floor(-ln(3/eps)/h), B = ceil(ln((1/delta) ln(3/eps))/h).
std::pair<long, long> truncation_indices(double eps, double delta);

ExpSumParams select_params(double eps, double delta);

/// Nodes t_j = e^{jh} and weights w_j = h e^{jh} for j = A..B.
struct ExpSumQuadrature {
  ExpSumParams params;
  std::vector<double> nodes;
  std::vector<double> weights;
};

ExpSumQuadrature build_quadrature(const ExpSumParams& params);

inline ExpSumQuadrature build_quadrature(double eps, double delta) {
  return build_quadrature(select_params(eps, delta));
}

/// sum_j w_j e^{-t_j x}, compensated summation in ascending-j order.
/// x may lie outside [delta,1]; the error guarantee applies only inside.
double eval_expsum(const ExpSumQuadrature& quad, double x);

struct ErrorCertificate {
  double eps;
  double delta;
  int grid_size;
  double max_rel_error;  // max over the grid of |x * S(x) - 1|
  double argmax_x;
  bool pass;             // max_rel_error <= eps
};

/// Samples |x S(x) - 1| on a log-uniform grid over [delta,1] (both endpoints
/// included).  A smoke test of the guarantee, not a rigorous proof: the bound
/// itself holds for all x by construction.  Deterministic for any thread count.
ErrorCertificate certify(const ExpSumQuadrature& quad, int grid_size, int threads = 1);

/// Probes the infinite-sum identity |x * h sum_{j in Z} e^{jh} e^{-x e^{jh}} - 1|
/// for any x > 0, truncating where both dropped tails are below eps*1e-3/x.
double infinite_sum_error_probe(double eps, double x);

struct TailBounds {
  double lower;  // x^{-1} (1 - e^{-x e^{Ah}})
  double upper;  // x^{-1} e^{-x e^{Bh}}
};

/// Closed-form majorants of the two dropped tails of the infinite sum.
TailBounds tail_bounds(const ExpSumParams& params, double x);

}  // namespace expsum
