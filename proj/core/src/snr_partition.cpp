#include "mixent/snr_partition.hpp"

#include <cmath>
#include <stdexcept>

namespace mixent {

ThresholdPair choose_thresholds(std::span<const double> lambda_sq,
                                double delta_gamma,
                                std::optional<double> gamma_c) {
  if (lambda_sq.empty()) throw std::invalid_argument("empty spectrum");
  if (delta_gamma < 0.0) throw std::invalid_argument("delta_gamma must be >= 0");
  const double lo = lambda_sq.front();
  const double hi = lambda_sq.back();
  const double pivot = gamma_c.value_or(0.5 * (lo + hi));
  if (hi == lo) return ThresholdPair{pivot, pivot, true};
  const double span = hi - lo;
  return ThresholdPair{pivot + (lo - pivot) / span * delta_gamma,
                       pivot + (hi - pivot) / span * delta_gamma, false};
}

SnrPartition partition(const ChannelInstance& channel, double gamma_l,
                       double gamma_h, double rho, double rho_ref) {
  if (gamma_l > gamma_h) throw std::invalid_argument("gamma_l must be <= gamma_h");
  if (rho < 0.0) throw std::invalid_argument("rho must be >= 0");
  if (!(rho_ref > 0.0)) throw std::invalid_argument("rho_ref must be > 0");
  const int n = channel.dim();

  SnrPartition p;
  p.rho = rho;
  if (rho > 0.0) {
    p.gamma_l_eff = gamma_l * (rho_ref / rho);
    p.gamma_h_eff = gamma_h * (rho_ref / rho);
  } else {
    // Vanishing SNR: every stream is low-SNR, matching GB(0) = 0.
    p.gamma_l_eff = std::numeric_limits<double>::infinity();
    p.gamma_h_eff = std::numeric_limits<double>::infinity();
  }

  const auto& ls = channel.lambda_sq;
  int n_a = 0;
  while (n_a < n && ls[static_cast<std::size_t>(n_a)] <= p.gamma_l_eff) ++n_a;
  int n_c = 0;
  while (n_c < n - n_a &&
         ls[static_cast<std::size_t>(n - 1 - n_c)] > p.gamma_h_eff)
    ++n_c;
  p.n_a = n_a;
  p.n_c = n_c;
  p.n_b = n - n_a - n_c;

  const CMat& r = channel.r;
  p.a = r.block(0, 0, n_a, n_a);
  p.b_a = r.block(0, n_a, n_a, p.n_b);
  p.c_a = r.block(0, n_a + p.n_b, n_a, n_c);
  p.b = r.block(n_a, n_a, p.n_b, p.n_b);
  p.c_b = r.block(n_a, n_a + p.n_b, p.n_b, n_c);
  p.c = r.block(n_a + p.n_b, n_a + p.n_b, n_c, n_c);
  p.k_a = HermitianPd(rho * p.a * p.a.adjoint() + CMat::Identity(n_a, n_a));
  return p;
}

}  // namespace mixent
