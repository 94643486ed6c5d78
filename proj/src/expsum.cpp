#include "expsum/expsum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

namespace expsum {

namespace {

struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double v) {
    const double y = v - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

void check_unit_interval(double v, const char* name) {
  if (!(v > 0.0) || v > 1.0)
    throw std::domain_error(std::string(name) + " must lie in (0,1]");
}

// N and h in extended precision; floor/ceil of the index formulas is
// sensitive to the last few bits (the eps=0.1 lower index sits at -195.99).
struct RawParams {
  int n_order;
  long double h;
};

RawParams raw_params(double eps) {
  const long double le = eps;
  const int n = static_cast<int>(ceill(0.5L * logl(24.0L / le)));
  const long double e2 = expl(2.0L);
  const long double two_pi = 2.0L * 3.141592653589793238462643383279502884L;
  const long double h = two_pi / (e2 * (2 * n + 1) * (2 * n + 1));
  return {n, h};
}

}  // namespace

std::pair<long, long> truncation_indices(double eps, double delta) {
  check_unit_interval(eps, "eps");
  check_unit_interval(delta, "delta");
  const RawParams rp = raw_params(eps);
  const long double log3e = logl(3.0L / static_cast<long double>(eps));
  const long a = static_cast<long>(floorl(-log3e / rp.h));
  const long b = static_cast<long>(ceill(logl(log3e / static_cast<long double>(delta)) / rp.h));
  return {a, b};
}

ExpSumParams select_params(double eps, double delta) {
  const auto [a, b] = truncation_indices(eps, delta);
  const RawParams rp = raw_params(eps);
  ExpSumParams p;
  p.eps = eps;
  p.delta = delta;
  p.n_order = rp.n_order;
  p.h = static_cast<double>(rp.h);
  p.lower = a - 1;  // one widening step on each side
  p.upper = b + 1;
  p.sparsity = p.upper - p.lower + 1;
  return p;
}

ExpSumQuadrature build_quadrature(const ExpSumParams& params) {
  ExpSumQuadrature quad;
  quad.params = params;
  quad.nodes.reserve(params.sparsity);
  quad.weights.reserve(params.sparsity);
  for (long j = params.lower; j <= params.upper; ++j) {
    const double t = std::exp(static_cast<double>(j) * params.h);
    quad.nodes.push_back(t);
    quad.weights.push_back(params.h * t);
  }
  return quad;
}

double eval_expsum(const ExpSumQuadrature& quad, double x) {
  if (!(x > 0)) throw std::domain_error("eval_expsum: x must be positive");
  KahanSum acc;
  for (std::size_t i = 0; i < quad.nodes.size(); ++i)
    acc.add(quad.weights[i] * std::exp(-quad.nodes[i] * x));
  return acc.sum;
}

ErrorCertificate certify(const ExpSumQuadrature& quad, int grid_size, int threads) {
  if (grid_size < 2) throw std::invalid_argument("certify: grid_size must be >= 2");
  if (threads < 1) threads = 1;
  const double delta = quad.params.delta;
  const double log_delta = std::log(delta);
  const int n = grid_size;

  const auto grid_point = [&](int i) {
    if (i == 0) return delta;
    if (i == n - 1) return 1.0;
    return std::exp(log_delta * (1.0 - static_cast<double>(i) / (n - 1)));
  };

  struct ChunkBest {
    double max_err = -1.0;
    int argmax = 0;
  };
  std::vector<ChunkBest> best(threads);
  const auto worker = [&](int tid) {
    ChunkBest local;
    for (int i = tid; i < n; i += threads) {
      const double x = grid_point(i);
      const double err = std::abs(x * eval_expsum(quad, x) - 1.0);
      // strict improvement keeps the earliest argmax, independent of chunking
      if (err > local.max_err || (err == local.max_err && i < local.argmax)) {
        local.max_err = err;
        local.argmax = i;
      }
    }
    best[tid] = local;
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
  }
  ChunkBest global;
  global.argmax = n;
  for (const auto& b : best) {
    if (b.max_err > global.max_err ||
        (b.max_err == global.max_err && b.argmax < global.argmax)) {
      global = b;
    }
  }

  ErrorCertificate cert;
  cert.eps = quad.params.eps;
  cert.delta = delta;
  cert.grid_size = grid_size;
  cert.max_rel_error = global.max_err;
  cert.argmax_x = grid_point(global.argmax);
  cert.pass = global.max_err <= quad.params.eps;
  return cert;
}

double infinite_sum_error_probe(double eps, double x) {
  check_unit_interval(eps, "eps");
  if (!(x > 0)) throw std::domain_error("infinite_sum_error_probe: x must be positive");
  const RawParams rp = raw_params(eps);
  const double h = static_cast<double>(rp.h);
  // Truncate where the closed-form tail majorants drop below eps*1e-3/x:
  //   lower: x^{-1}(1 - e^{-x e^{Ah}}) <= e^{Ah}  =>  e^{Ah} <= 1e-3 eps / x
  //   upper: x^{-1} e^{-x e^{Bh}} <= 1e-3 eps / x  =>  e^{Bh} >= ln(1e3/eps)/x
  const double tail = 1e-3 * eps;
  const long a = static_cast<long>(std::floor(std::log(tail / x) / h)) - 1;
  const long b = static_cast<long>(std::ceil(std::log(std::log(1.0 / tail) / x) / h)) + 1;
  KahanSum acc;
  for (long j = a; j <= b; ++j) {
    const double t = std::exp(static_cast<double>(j) * h);
    acc.add(h * t * std::exp(-t * x));
  }
  return std::abs(x * acc.sum - 1.0);
}

TailBounds tail_bounds(const ExpSumParams& params, double x) {
  if (!(x > 0)) throw std::domain_error("tail_bounds: x must be positive");
  const double t_lo = std::exp(static_cast<double>(params.lower) * params.h);
  const double t_hi = std::exp(static_cast<double>(params.upper) * params.h);
  TailBounds tb;
  tb.lower = -std::expm1(-x * t_lo) / x;
  tb.upper = std::exp(-x * t_hi) / x;
  return tb;
}

}  // namespace expsum
