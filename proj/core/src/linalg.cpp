#include "mixent/linalg.hpp"

#include <cmath>
#include <complex>
#include <numeric>

#include "mixent/errors.hpp"

namespace mixent {

namespace {

using cx = std::complex<double>;

// Householder QR on a working copy of h, optionally selecting the remaining
// column with the smallest residual norm at each step. Shared by both public
// factorizations.
void householder_qr(const CMat& h, bool sort_columns, CMat& q_out, CMat& r_out,
                    std::vector<int>& perm_out) {
  const Eigen::Index n = h.rows();
  if (h.cols() != n) throw std::invalid_argument("QR expects a square matrix");

  CMat a = h;
  CMat q = CMat::Identity(n, n);
  perm_out.resize(static_cast<std::size_t>(n));
  std::iota(perm_out.begin(), perm_out.end(), 0);

  const double rank_tol = 1e-12 * h.norm();

  for (Eigen::Index k = 0; k < n; ++k) {
    if (sort_columns) {
      Eigen::Index best = k;
      double best_norm = a.col(k).tail(n - k).norm();
      for (Eigen::Index j = k + 1; j < n; ++j) {
        const double nj = a.col(j).tail(n - k).norm();
        if (nj < best_norm) {
          best_norm = nj;
          best = j;
        }
      }
      if (best != k) {
        a.col(k).swap(a.col(best));
        std::swap(perm_out[static_cast<std::size_t>(k)],
                  perm_out[static_cast<std::size_t>(best)]);
      }
    }

    auto x = a.col(k).tail(n - k);
    const double beta = x.norm();
    if (!(beta > rank_tol))
      throw SingularMatrixError("rank-deficient matrix in QR factorization");

    const cx alpha = x(0);
    const cx phase = std::abs(alpha) > 0.0 ? alpha / std::abs(alpha) : cx(1.0, 0.0);

    CVec v = x;
    v(0) += phase * beta;
    const double vnorm = v.norm();
    if (vnorm > 0.0) {
      v /= vnorm;
      a.bottomRightCorner(n - k, n - k) -=
          2.0 * v * (v.adjoint() * a.bottomRightCorner(n - k, n - k));
      q.rightCols(n - k) -= 2.0 * (q.rightCols(n - k) * v) * v.adjoint();
    }
    // The reflection maps x onto -phase*beta*e1; write the exact value and
    // clear the subdiagonal explicitly.
    a(k, k) = -phase * beta;
    a.col(k).tail(n - k - 1).setZero();

    // Absorb the diagonal phase so r_kk = beta >= 0.
    const cx u = std::conj(-phase);
    a.row(k).tail(n - k) *= u;
    q.col(k) *= std::conj(u);
  }

  q_out = std::move(q);
  r_out = std::move(a);
}

}  // namespace

QrFactors qr_positive(const CMat& h) {
  QrFactors f;
  std::vector<int> perm;
  householder_qr(h, /*sort_columns=*/false, f.q, f.r, perm);
  return f;
}

SortedQrFactors sorted_qr(const CMat& h) {
  SortedQrFactors f;
  householder_qr(h, /*sort_columns=*/true, f.q, f.r, f.perm);
  return f;
}

CMat permute_columns(const CMat& h, const std::vector<int>& perm) {
  CMat out(h.rows(), h.cols());
  for (Eigen::Index j = 0; j < h.cols(); ++j)
    out.col(j) = h.col(perm[static_cast<std::size_t>(j)]);
  return out;
}

HermitianPd::HermitianPd(CMat k) : matrix_(std::move(k)) {
  const Eigen::Index n = matrix_.rows();
  if (matrix_.cols() != n)
    throw std::invalid_argument("HermitianPd expects a square matrix");
  if (n == 0) {
    chol_lower_.resize(0, 0);
    return;
  }
  Eigen::LLT<CMat> llt(matrix_);
  if (llt.info() != Eigen::Success)
    throw NumericDomainError("Cholesky factorization failed: matrix not positive definite");
  chol_lower_ = llt.matrixL();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) acc += std::log(chol_lower_(i, i).real());
  log_det_ = 2.0 * acc;
}

double HermitianPd::quad_form(const CVec& x) const {
  if (x.size() != matrix_.rows())
    throw std::invalid_argument("quad_form dimension mismatch");
  if (x.size() == 0) return 0.0;
  const CVec y = chol_lower_.triangularView<Eigen::Lower>().solve(x);
  return y.squaredNorm();
}

}  // namespace mixent
