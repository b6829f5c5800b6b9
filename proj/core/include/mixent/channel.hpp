#pragma once

#include <cstdint>
#include <vector>

#include "mixent/constellation.hpp"
#include "mixent/linalg.hpp"
#include "mixent/rng.hpp"

namespace mixent {

/// Channel matrix with its cached sorted QR factors. Immutable after
/// construction; safe to share across threads.
struct ChannelInstance {
  CMat h;           // as constructed
  CMat h_permuted;  // h with columns reordered by perm; equals q*r numerically
  CMat q;
  CMat r;
  std::vector<int> perm;
  std::vector<double> lambda_sq;  // |r_kk|^2, the per-stream SNR profile

  int dim() const { return static_cast<int>(h.rows()); }

  static ChannelInstance from_matrix(const CMat& h);
};

/// Rescales taps so sum g_l^2 = 1. Throws std::invalid_argument when empty
/// or all zero.
std::vector<double> normalized_taps(std::vector<double> taps);

/// Circulant matrix of the power-normalized taps: first column is the taps
/// zero padded (taps wrap and add when longer than n).
ChannelInstance fir_channel(const std::vector<double>& taps, int n);

/// Frequency- and time-selective channel H = A*G: A = diag(a_i), a_i ~
/// CN(0,1), and G the circulant of taps 2^-l, l = 0..memory.
ChannelInstance selective_channel(int n, int memory, Rng& rng);

/// Input symbols drawn i.u.d. from the constellation, scaled by sqrt(rho).
struct DrawnInput {
  std::vector<std::int32_t> indices;
  CVec symbols;
  double rho;
};

DrawnInput draw_input(const Constellation& constellation, int n, double rho,
                      Rng& rng);

struct Synthesis {
  CVec z;
  CVec noise;
};

/// z = h*d + n with n ~ CN(0, I). Returns the noise too for oracle tests.
Synthesis synthesize(const CMat& h, const CVec& d, Rng& rng);

}  // namespace mixent
