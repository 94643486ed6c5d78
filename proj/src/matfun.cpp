#include "expsum/matfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>

namespace expsum {

SymmetricMatrix::SymmetricMatrix(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("SymmetricMatrix: matrix not square");
  if (m.rows() < 1 || m.rows() > kMaxDim)
    throw std::length_error("SymmetricMatrix: dimension out of range [1," +
                            std::to_string(kMaxDim) + "]");
  mat_ = 0.5 * (m + m.transpose());
}

SpectralMatrix jacobi_eigh(const SymmetricMatrix& a) {
  const int n = a.dim();
  Eigen::MatrixXd m = a.matrix();
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  const double fro = m.norm();
  const double threshold = 1e-13 * fro;

  bool converged = (n == 1);
  for (int sweep = 0; sweep < 100 && !converged; ++sweep) {
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = m(p, q);
        if (std::abs(apq) <= threshold) continue;
        const double app = m(p, p);
        const double aqq = m(q, q);
        const double theta = (aqq - app) / (2.0 * apq);
        // smaller-magnitude root of t^2 + 2 theta t - 1 = 0
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int i = 0; i < n; ++i) {
          const double mip = m(i, p);
          const double miq = m(i, q);
          m(i, p) = c * mip - s * miq;
          m(i, q) = s * mip + c * miq;
        }
        for (int i = 0; i < n; ++i) {
          const double mpi = m(p, i);
          const double mqi = m(q, i);
          m(p, i) = c * mpi - s * mqi;
          m(q, i) = s * mpi + c * mqi;
        }
        for (int i = 0; i < n; ++i) {
          const double vip = v(i, p);
          const double viq = v(i, q);
          v(i, p) = c * vip - s * viq;
          v(i, q) = s * vip + c * viq;
        }
      }
    }
    double off = 0.0;
    for (int p = 0; p < n - 1; ++p)
      for (int q = p + 1; q < n; ++q) off = std::max(off, std::abs(m(p, q)));
    converged = off <= threshold;
  }
  if (!converged) throw std::runtime_error("jacobi_eigh: no convergence within 100 sweeps");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int i, int j) { return m(i, i) < m(j, j); });
  SpectralMatrix spec;
  spec.eigenvalues.resize(n);
  spec.eigenvectors.resize(n, n);
  for (int i = 0; i < n; ++i) {
    spec.eigenvalues(i) = m(order[i], order[i]);
    spec.eigenvectors.col(i) = v.col(order[i]);
  }
  return spec;
}

Eigen::VectorXd expm_action(const SymmetricMatrix& a, double t,
                            const Eigen::VectorXd& v, double tol, ExpmStats* stats) {
  if (!(t > 0)) throw std::domain_error("expm_action: t must be positive");
  if (!(tol > 0)) throw std::domain_error("expm_action: tol must be positive");
  if (v.size() != a.dim()) throw std::invalid_argument("expm_action: size mismatch");

  const int m = (t <= 1.0) ? 0 : static_cast<int>(std::ceil(std::log2(t)));
  const long reps = 1L << m;
  const double tau = t / static_cast<double>(reps);
  const double term_floor = tol * v.norm() / static_cast<double>(reps);

  Eigen::VectorXd w = v;
  Eigen::VectorXd term(v.size());
  for (long r = 0; r < reps; ++r) {
    term = w;
    long i = 0;
    while (term.norm() > term_floor) {
      if (++i > 10000)
        throw std::runtime_error("expm_action: Taylor series did not converge");
      term = (-tau / static_cast<double>(i)) * (a.matrix() * term);
      w += term;
      if (stats) ++stats->taylor_terms;
    }
    if (w.squaredNorm() == 0.0) break;  // exact zero is a fixed point
  }
  return w;
}

Eigen::VectorXd apply_inverse_expsum(const SymmetricMatrix& a,
                                     const ExpSumQuadrature& quad,
                                     const Eigen::VectorXd& v, double per_term_tol,
                                     int threads, ExpmStats* stats,
                                     const VectorPostprocess& post) {
  if (v.size() != a.dim())
    throw std::invalid_argument("apply_inverse_expsum: size mismatch");
  const std::size_t k = quad.nodes.size();
  if (threads < 1) threads = 1;

  std::vector<Eigen::VectorXd> terms(k);
  std::vector<long> counts(threads, 0);
  std::vector<std::string> errors(threads);
  const auto worker = [&](int tid) {
    ExpmStats local;
    for (std::size_t j = tid; j < k; j += static_cast<std::size_t>(threads)) {
      try {
        Eigen::VectorXd y = expm_action(a, quad.nodes[j], v, per_term_tol, &local);
        if (post) post(y);
        terms[j] = quad.weights[j] * y;
      } catch (const std::exception& e) {
        if (errors[tid].empty())
          errors[tid] = "apply_inverse_expsum: term j=" +
                        std::to_string(quad.params.lower + static_cast<long>(j)) +
                        ": " + e.what();
      }
    }
    counts[tid] = local.taylor_terms;
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors)
    if (!e.empty()) throw std::runtime_error(e);
  if (stats)
    for (long c : counts) stats->taylor_terms += c;

  // deterministic ordered reduction, ascending j
  Eigen::VectorXd result = Eigen::VectorXd::Zero(v.size());
  for (std::size_t j = 0; j < k; ++j) result += terms[j];
  return result;
}

SandwichReport sandwich_check(const SymmetricMatrix& a, const ExpSumQuadrature& quad) {
  const SpectralMatrix spec = jacobi_eigh(a);
  const double delta = quad.params.delta;
  const double slack = 1e-9;
  SandwichReport report;
  report.eps = quad.params.eps;
  report.min_ratio = std::numeric_limits<double>::infinity();
  report.max_ratio = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < spec.eigenvalues.size(); ++i) {
    const double lambda = spec.eigenvalues(i);
    if (lambda < delta * (1.0 - slack) || lambda > 1.0 + slack)
      throw std::domain_error("sandwich_check: eigenvalue " + std::to_string(lambda) +
                              " outside [delta,1]");
    const double ratio = lambda * eval_expsum(quad, lambda);
    report.ratios.push_back(ratio);
    report.min_ratio = std::min(report.min_ratio, ratio);
    report.max_ratio = std::max(report.max_ratio, ratio);
  }
  report.pass = report.min_ratio >= 1.0 - report.eps && report.max_ratio <= 1.0 + report.eps;
  return report;
}

}  // namespace expsum
