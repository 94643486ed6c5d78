#include "expsum/laplacian.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

namespace expsum {

Graph::Graph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
  if (n_ < 2) throw std::invalid_argument("Graph: need at least 2 vertices");
  std::set<std::pair<int, int>> seen;
  for (const auto& e : edges_) {
    if (e.u < 0 || e.u >= n_ || e.v < 0 || e.v >= n_)
      throw std::invalid_argument("Graph: vertex index out of range");
    if (e.u == e.v) throw std::invalid_argument("Graph: self-loop at vertex " +
                                                std::to_string(e.u));
    if (!(e.weight > 0)) throw std::invalid_argument("Graph: non-positive edge weight");
    auto key = std::minmax(e.u, e.v);
    if (!seen.insert(key).second)
      throw std::invalid_argument("Graph: duplicate edge (" + std::to_string(key.first) +
                                  "," + std::to_string(key.second) + ")");
  }
  // connectivity via union-find
  std::vector<int> parent(n_);
  for (int i = 0; i < n_; ++i) parent[i] = i;
  const auto find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  int components = n_;
  for (const auto& e : edges_) {
    const int ru = find(e.u);
    const int rv = find(e.v);
    if (ru != rv) {
      parent[ru] = rv;
      --components;
    }
  }
  if (components != 1) throw std::invalid_argument("Graph: not connected");
}

Graph Graph::path(int n) {
  std::vector<Edge> edges;
  for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, 1.0});
  return Graph(n, std::move(edges));
}

Graph Graph::cycle(int n) {
  if (n < 3) throw std::invalid_argument("Graph::cycle: need n >= 3");
  std::vector<Edge> edges;
  for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, 1.0});
  edges.push_back({n - 1, 0, 1.0});
  return Graph(n, std::move(edges));
}

Graph Graph::grid(int rows, int cols) {
  if (rows < 1 || cols < 1 || rows * cols < 2)
    throw std::invalid_argument("Graph::grid: degenerate dimensions");
  std::vector<Edge> edges;
  const auto id = [cols](int r, int c) { return r * cols + c; };
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) edges.push_back({id(r, c), id(r, c + 1), 1.0});
      if (r + 1 < rows) edges.push_back({id(r, c), id(r + 1, c), 1.0});
    }
  return Graph(rows * cols, std::move(edges));
}

Graph Graph::from_edge_list(std::istream& in) {
  std::vector<Edge> edges;
  int max_vertex = -1;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    Edge e{-1, -1, 1.0};
    if (!(ls >> e.u >> e.v))
      throw std::invalid_argument("edge list: malformed line " + std::to_string(line_no));
    ls >> e.weight;  // optional; defaults to 1
    std::string rest;
    if (ls >> rest)
      throw std::invalid_argument("edge list: trailing tokens on line " +
                                  std::to_string(line_no));
    max_vertex = std::max({max_vertex, e.u, e.v});
    edges.push_back(e);
  }
  return Graph(max_vertex + 1, std::move(edges));
}

Eigen::VectorXd Graph::degrees() const {
  Eigen::VectorXd d = Eigen::VectorXd::Zero(n_);
  for (const auto& e : edges_) {
    d(e.u) += e.weight;
    d(e.v) += e.weight;
  }
  return d;
}

Eigen::MatrixXd Graph::laplacian() const {
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n_, n_);
  for (const auto& e : edges_) {
    l(e.u, e.u) += e.weight;
    l(e.v, e.v) += e.weight;
    l(e.u, e.v) -= e.weight;
    l(e.v, e.u) -= e.weight;
  }
  return l;
}

SymmetricMatrix normalized_laplacian_scaled(const Graph& g) {
  const Eigen::VectorXd d = g.degrees();
  for (int i = 0; i < d.size(); ++i)
    if (!(d(i) > 0))
      throw std::invalid_argument("normalized_laplacian_scaled: vertex " +
                                  std::to_string(i) + " has zero degree");
  const Eigen::VectorXd dinv_sqrt = d.cwiseSqrt().cwiseInverse();
  Eigen::MatrixXd a = 0.5 * dinv_sqrt.asDiagonal() * g.laplacian() * dinv_sqrt.asDiagonal();
  return SymmetricMatrix(a);
}

SolveResult solve_laplacian(const Graph& g, const Eigen::VectorXd& b, double eps,
                            int threads) {
  const int n = g.order();
  if (b.size() != n) throw std::invalid_argument("solve_laplacian: rhs size mismatch");

  const SymmetricMatrix a = normalized_laplacian_scaled(g);
  const Eigen::VectorXd d = g.degrees();
  const Eigen::VectorXd d_sqrt = d.cwiseSqrt();
  const Eigen::VectorXd kernel = d_sqrt / d_sqrt.norm();  // D^{1/2} 1, normalized

  const SpectralMatrix spec = jacobi_eigh(a);
  const double delta = spec.eigenvalues(1) * (1.0 - 1e-8);
  if (!(delta > 0))
    throw std::runtime_error("solve_laplacian: spectral gap not positive");

  // transform rhs and deflate the kernel
  const Eigen::VectorXd c = b.cwiseQuotient(d_sqrt);
  const Eigen::VectorXd c_defl = c - kernel.dot(c) * kernel;

  ExpSumQuadrature quad = build_quadrature(eps, std::min(delta, 1.0));
  double weight_sum = 0.0;
  for (double w : quad.weights) weight_sum += w;
  const double per_term_tol = eps / (10.0 * weight_sum);

  SolveResult out;
  out.report.eps = eps;
  out.report.delta_used = quad.params.delta;
  out.report.sparsity = quad.params.sparsity;
  out.report.matvec_count = 0;
  const Eigen::VectorXd b_proj = d_sqrt.cwiseProduct(c_defl);

  if (c_defl.norm() == 0.0) {
    out.x = Eigen::VectorXd::Zero(n);
    out.report.rel_error_vs_direct = 0.0;
    out.report.residual_norm = 0.0;
    return out;
  }

  const auto deflate = [&kernel](Eigen::VectorXd& v) { v -= kernel.dot(v) * kernel; };
  ExpmStats stats;
  const Eigen::VectorXd y =
      apply_inverse_expsum(a, quad, c_defl, per_term_tol, threads, &stats, deflate);
  out.report.matvec_count = stats.taylor_terms;

  Eigen::VectorXd x = 0.5 * y.cwiseQuotient(d_sqrt);
  x.array() -= x.mean();  // min-norm convention: orthogonal to the all-ones kernel
  out.x = x;

  // oracle: pseudoinverse of L through a dense eigendecomposition
  const SymmetricMatrix lap(g.laplacian());
  const SpectralMatrix lspec = jacobi_eigh(lap);
  const double cutoff = 1e-10 * lspec.eigenvalues.cwiseAbs().maxCoeff();
  Eigen::VectorXd x_oracle = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    if (lspec.eigenvalues(i) <= cutoff) continue;
    const Eigen::VectorXd u = lspec.eigenvectors.col(i);
    x_oracle += u.dot(b_proj) / lspec.eigenvalues(i) * u;
  }

  out.report.rel_error_vs_direct = (x - x_oracle).norm() / x_oracle.norm();
  out.report.residual_norm = (lap.matrix() * x - b_proj).norm() / b_proj.norm();
  return out;
}

}  // namespace expsum
