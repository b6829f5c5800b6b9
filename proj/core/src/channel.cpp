#include "mixent/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace mixent {

ChannelInstance ChannelInstance::from_matrix(const CMat& h) {
  ChannelInstance ch;
  ch.h = h;
  SortedQrFactors f = sorted_qr(h);
  ch.q = std::move(f.q);
  ch.r = std::move(f.r);
  ch.perm = std::move(f.perm);
  ch.h_permuted = permute_columns(ch.h, ch.perm);
  ch.lambda_sq.resize(static_cast<std::size_t>(h.rows()));
  for (Eigen::Index k = 0; k < h.rows(); ++k) {
    const double d = ch.r(k, k).real();
    ch.lambda_sq[static_cast<std::size_t>(k)] = d * d;
  }
  return ch;
}

std::vector<double> normalized_taps(std::vector<double> taps) {
  if (taps.empty()) throw std::invalid_argument("empty tap sequence");
  double power = 0.0;
  for (double g : taps) power += g * g;
  if (power <= 0.0) throw std::invalid_argument("all-zero tap sequence");
  const double scale = 1.0 / std::sqrt(power);
  for (double& g : taps) g *= scale;
  return taps;
}

ChannelInstance fir_channel(const std::vector<double>& taps, int n) {
  if (n < 1) throw std::invalid_argument("channel dimension must be >= 1");
  const std::vector<double> g = normalized_taps(taps);

  Eigen::VectorXd first_col = Eigen::VectorXd::Zero(n);
  for (std::size_t l = 0; l < g.size(); ++l)
    first_col[static_cast<Eigen::Index>(l % static_cast<std::size_t>(n))] += g[l];

  CMat h(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) h(i, j) = first_col[((i - j) % n + n) % n];
  return ChannelInstance::from_matrix(h);
}

ChannelInstance selective_channel(int n, int memory, Rng& rng) {
  if (memory < 0 || memory > n - 1)
    throw std::invalid_argument("memory must satisfy 0 <= memory <= n-1");
  std::vector<double> taps(static_cast<std::size_t>(memory) + 1);
  for (int l = 0; l <= memory; ++l) taps[static_cast<std::size_t>(l)] = std::pow(2.0, -l);
  const ChannelInstance g_channel = fir_channel(taps, n);

  CMat h = g_channel.h;
  for (int i = 0; i < n; ++i) h.row(i) *= rng.cnormal();
  return ChannelInstance::from_matrix(h);
}

DrawnInput draw_input(const Constellation& constellation, int n, double rho,
                      Rng& rng) {
  if (rho < 0.0) throw std::invalid_argument("rho must be >= 0");
  DrawnInput d;
  d.rho = rho;
  d.indices.resize(static_cast<std::size_t>(n));
  d.symbols.resize(n);
  const double amp = std::sqrt(rho);
  const auto m = static_cast<std::uint32_t>(constellation.size);
  for (int k = 0; k < n; ++k) {
    const auto idx = static_cast<std::int32_t>(rng.uniform_index(m));
    d.indices[static_cast<std::size_t>(k)] = idx;
    d.symbols(k) = amp * constellation.points[static_cast<std::size_t>(idx)];
  }
  return d;
}

Synthesis synthesize(const CMat& h, const CVec& d, Rng& rng) {
  if (h.cols() != d.size()) throw std::invalid_argument("dimension mismatch in synthesize");
  Synthesis s;
  s.noise.resize(h.rows());
  for (Eigen::Index i = 0; i < h.rows(); ++i) s.noise(i) = rng.cnormal();
  s.z = h * d + s.noise;
  return s;
}

}  // namespace mixent
