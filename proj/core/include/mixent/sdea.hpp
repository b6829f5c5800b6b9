#pragma once

#include <cstdint>
#include <span>

#include "mixent/estimators.hpp"
#include "mixent/snr_partition.hpp"

namespace mixent {

/// Thresholds defined at the reference SNR; partitions at other SNRs use
/// gamma * rho_ref / rho.
struct ThresholdSpec {
  double gamma_l;
  double gamma_h;
  double rho_ref;
};

/// SNR-partitioned density approximation: the drawn high-SNR block enters as
/// a known component, the medium block through a tree search, the low block
/// through a moment-matched Gaussian. This is an approximation, not a bound;
/// the drawn input (genie knowledge) is threaded in explicitly.
class SdeaEvaluator {
 public:
  SdeaEvaluator(const ChannelInstance& channel, const Constellation& constellation,
                double rho, SnrPartition part, SearchSpec spec);

  struct Result {
    double log_pdf;
    std::uint64_t visited;  // B-block tree nodes only
    bool empty_fallback;    // candidate set was empty; anchor singleton used
  };

  /// v = Q^H z and the drawn input's constellation indices (permuted order).
  Result evaluate(const CVec& v, std::span<const std::int32_t> drawn) const;

  const SnrPartition& part() const { return part_; }

 private:
  const ChannelInstance& channel_;
  const Constellation& constellation_;
  double rho_;
  SnrPartition part_;
  SearchSpec spec_;
  std::vector<std::complex<double>> scaled_points_;
};

/// Monte-Carlo SDEA mutual information on the same streams as mc_entropy.
/// The reported MI is clipped at min(GB, SEB); h_bits stays unclipped.
EntropyEstimate sdea_mi(const ChannelInstance& channel,
                        const Constellation& constellation, double rho,
                        const ThresholdSpec& thresholds, const SearchSpec& spec,
                        const McOptions& opts);

}  // namespace mixent
