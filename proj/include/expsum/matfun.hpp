#pragma once

#include "expsum/expsum.hpp"

#include <Eigen/Dense>

#include <functional>

namespace expsum {

/// Dense symmetric matrix, symmetrized at construction.
class SymmetricMatrix {
 public:
  static constexpr int kMaxDim = 512;

  explicit SymmetricMatrix(const Eigen::MatrixXd& m);

  int dim() const { return static_cast<int>(mat_.rows()); }
  const Eigen::MatrixXd& matrix() const { return mat_; }

 private:
  Eigen::MatrixXd mat_;
};

/// Eigendecomposition oracle: eigenvalues ascending, orthonormal columns.
struct SpectralMatrix {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
};

/// Cyclic Jacobi rotations until the largest off-diagonal entry is below
/// 1e-13 * ||A||_F; throws after 100 sweeps without convergence.
SpectralMatrix jacobi_eigh(const SymmetricMatrix& a);

struct ExpmStats {
  long taylor_terms = 0;  // matrix-vector products consumed
};

/// e^{-tA} v by scaling-and-squaring on the action: t is split into 2^m
/// sub-steps of size at most 1 and each sub-step applies a truncated Taylor
/// series of e^{-tau A}.  Accuracy tol * ||v|| for spectra within [0,1].
Eigen::VectorXd expm_action(const SymmetricMatrix& a, double t,
                            const Eigen::VectorXd& v, double tol,
                            ExpmStats* stats = nullptr);

/// Hook applied to the working vector after every exponential action
/// (used for kernel deflation in the Laplacian demo).
using VectorPostprocess = std::function<void(Eigen::VectorXd&)>;

/// sum_j w_j e^{-t_j A} v: the inverse of A applied through exponential
/// actions only.  Terms are combined in ascending-j order regardless of
/// thread count, so output is bit-identical for any `threads`.
Eigen::VectorXd apply_inverse_expsum(const SymmetricMatrix& a,
                                     const ExpSumQuadrature& quad,
                                     const Eigen::VectorXd& v, double per_term_tol,
                                     int threads = 1, ExpmStats* stats = nullptr,
                                     const VectorPostprocess& post = {});

struct SandwichReport {
  double eps;
  std::vector<double> ratios;  // lambda_i * S(lambda_i) per eigenvalue
  double min_ratio;
  double max_ratio;
  bool pass;  // all ratios within [1-eps, 1+eps]
};

/// Verifies the two-sided spectral bound (1-eps) A^{-1} <= S <= (1+eps) A^{-1}
/// eigenvalue-wise; S shares A's eigenvectors, so the scalar ratios decide it.
/// Throws if any eigenvalue lies outside [delta, 1].
SandwichReport sandwich_check(const SymmetricMatrix& a, const ExpSumQuadrature& quad);

}  // namespace expsum
