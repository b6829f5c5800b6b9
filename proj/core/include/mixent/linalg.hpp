#pragma once

#include <Eigen/Dense>
#include <vector>

namespace mixent {

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

struct QrFactors {
  CMat q;  // unitary
  CMat r;  // upper triangular, real nonnegative diagonal
};

struct SortedQrFactors {
  CMat q;
  CMat r;
  // Column permutation: q * r reconstructs h_permuted where
  // h_permuted.col(j) == h.col(perm[j]). Weak columns land at small indices,
  // so the diagonal of r trends increasing (the greedy sort is not exact).
  std::vector<int> perm;
};

/// Householder QR with the diagonal phase absorbed into Q, so diag(R) is real
/// and nonnegative. Throws SingularMatrixError when a residual column norm
/// falls below 1e-12 * ||h||_F.
QrFactors qr_positive(const CMat& h);

/// Same factorization, but at each step the remaining column with the
/// smallest residual norm is eliminated next (greedy sorted QR).
SortedQrFactors sorted_qr(const CMat& h);

/// Applies `perm` to the columns of h: result.col(j) = h.col(perm[j]).
CMat permute_columns(const CMat& h, const std::vector<int>& perm);

/// Hermitian positive-definite matrix with a cached Cholesky factor.
/// Covariances of the form rho*H*H^H + I live here.
class HermitianPd {
 public:
  HermitianPd() : matrix_(0, 0), chol_lower_(0, 0) {}

  /// Throws NumericDomainError when the Cholesky factorization fails.
  explicit HermitianPd(CMat k);

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const CMat& matrix() const { return matrix_; }
  const CMat& chol_lower() const { return chol_lower_; }

  /// ln det(K) = 2 * sum ln L_kk.
  double log_det() const { return log_det_; }

  /// x^H K^{-1} x via a triangular solve; real and nonnegative by
  /// construction (it is ||L^{-1} x||^2).
  double quad_form(const CVec& x) const;

 private:
  CMat matrix_;
  CMat chol_lower_;
  double log_det_ = 0.0;
};

}  // namespace mixent
