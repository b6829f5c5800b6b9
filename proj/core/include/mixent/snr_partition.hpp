#pragma once

#include <optional>
#include <span>

#include "mixent/channel.hpp"
#include "mixent/linalg.hpp"

namespace mixent {

struct ThresholdPair {
  double gamma_l;
  double gamma_h;
  bool degenerate;  // spectrum collapsed to a point; both thresholds = gamma_c
};

/// Places (gamma_l, gamma_h) of width delta_gamma around the pivot gamma_c,
/// splitting the width proportionally to the pivot's distance from each end
/// of the diagonal spectrum. Defaults gamma_c to the spectrum midpoint.
ThresholdPair choose_thresholds(std::span<const double> lambda_sq,
                                double delta_gamma,
                                std::optional<double> gamma_c = std::nullopt);

/// Contiguous low/medium/high SNR split of the triangular system
///   [v_A]   [A  B_A C_A] [d_A]   [w_A]
///   [v_B] = [0  B   C_B] [d_B] + [w_B]
///   [v_C]   [0  0   C  ] [d_C]   [w_C]
/// driven by lambda_k^2 against the effective thresholds gamma * rho_ref/rho.
struct SnrPartition {
  int n_a = 0, n_b = 0, n_c = 0;
  double gamma_l_eff = 0.0, gamma_h_eff = 0.0;
  double rho = 0.0;
  CMat a, b_a, c_a;  // top block row
  CMat b, c_b;       // middle block row
  CMat c;            // bottom right
  HermitianPd k_a;   // rho A A^H + I

  int dim() const { return n_a + n_b + n_c; }
};

/// The diagonal ordering comes from sorted_qr and may hold local inversions:
/// n_a counts the leading run with lambda^2 <= gamma_l_eff, n_c the trailing
/// run with lambda^2 > gamma_h_eff, and everything between falls into B.
SnrPartition partition(const ChannelInstance& channel, double gamma_l,
                       double gamma_h, double rho, double rho_ref);

}  // namespace mixent
