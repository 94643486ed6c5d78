#pragma once

#include "expsum/matfun.hpp"

#include <iosfwd>
#include <vector>

namespace expsum {

struct Edge {
  int u;
  int v;
  double weight;
};

/// Connected weighted undirected graph; no self-loops or duplicate edges.
class Graph {
 public:
  Graph(int n, std::vector<Edge> edges);

  int order() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }

  static Graph path(int n);
  static Graph cycle(int n);
  static Graph grid(int rows, int cols);
  /// Parses lines `u v [w]`, 0-indexed; throws with the line number on
  /// malformed input.
  static Graph from_edge_list(std::istream& in);

  Eigen::VectorXd degrees() const;
  /// Combinatorial Laplacian L = D - W.
  Eigen::MatrixXd laplacian() const;

 private:
  int n_;
  std::vector<Edge> edges_;
};

/// A = (I - D^{-1/2} W D^{-1/2}) / 2: spectrum in [0,1], simple eigenvalue 0
/// with eigenvector D^{1/2} 1.
SymmetricMatrix normalized_laplacian_scaled(const Graph& g);

struct SolveReport {
  double eps;
  double delta_used;      // lambda_2 of the scaled normalized Laplacian
  long sparsity;          // K from the quadrature
  long matvec_count;      // Taylor terms consumed across all exponential actions
  double rel_error_vs_direct;
  double residual_norm;   // ||L x - b_proj|| / ||b_proj||
};

struct SolveResult {
  Eigen::VectorXd x;
  SolveReport report;
};

/// Solves L x = b (b projected onto Im(L)) using only heat-kernel actions
/// e^{-tA} on the scaled normalized Laplacian, with the kernel deflated by
/// explicit projection after every action.  The report compares against a
/// dense eigendecomposition pseudoinverse oracle.
SolveResult solve_laplacian(const Graph& g, const Eigen::VectorXd& b, double eps,
                            int threads = 1);

}  // namespace expsum
