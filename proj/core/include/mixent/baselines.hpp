#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mixent/estimators.hpp"

namespace mixent {

/// Statistical approximation: max of the genie single-component density f_h
/// and the moment-matched Gaussian f_l with K_z = rho H H^H + I.
class SaEvaluator {
 public:
  SaEvaluator(const ChannelInstance& channel, const Constellation& constellation,
              double rho);

  double log_f_high(const CVec& z, const CVec& d_drawn) const;
  double log_f_low(const CVec& z) const;
  double log_pdf(const CVec& z, const CVec& d_drawn) const;

 private:
  const ChannelInstance& channel_;
  int mc_;
  HermitianPd k_z_;
};

/// Hamming-distance-1 reduction around the Babai anchor, combined with the
/// SA terms: max{f_h, f_m, f_l}.
class Hd1Evaluator {
 public:
  Hd1Evaluator(const ChannelInstance& channel, const Constellation& constellation,
               double rho);

  /// f_m over {anchor} and single-coordinate substitutions
  /// (1 + N_t(M_c - 1) components), summed in shifted-log form.
  double log_f_mid(const CVec& v) const;
  double log_pdf(const CVec& z, const CVec& v, const CVec& d_drawn) const;

  int candidate_count() const;

 private:
  const ChannelInstance& channel_;
  const Constellation& constellation_;
  double rho_;
  SaEvaluator sa_;
};

/// Spec-shaped single-shot wrappers (the evaluators cache K_z across samples).
double sa_log_pdf(const CVec& z, const ChannelInstance& channel,
                  const CVec& d_drawn, double rho, int mc);
double hd1_log_pdf(const CVec& z, const ChannelInstance& channel,
                   const Constellation& constellation, double rho,
                   const CVec& d_drawn);

EntropyEstimate sa_mi(const ChannelInstance& channel,
                      const Constellation& constellation, double rho,
                      const McOptions& opts);
EntropyEstimate hd1_mi(const ChannelInstance& channel,
                       const Constellation& constellation, double rho,
                       const McOptions& opts);

struct BcjrOptions {
  std::uint64_t n = 1000;                 // sequence length, >= 1000
  std::optional<std::uint32_t> state_cap; // Q kept states; nullopt = full trellis
  std::uint64_t seed = 0;
  int report_stages = 0;                  // visited-state count window (N_t)
  std::uint64_t full_state_cap = 1u << 20;
};

struct BcjrResult {
  double mi_bits_per_symbol;          // warm-up prefix discarded
  double log2_p_total;                // log2 p(z^n) from stage 0
  std::uint64_t visited_states_report;// transitions over the first report_stages
  std::uint64_t n_states;             // M_c^L
  std::uint64_t warmup;               // 4L symbols
};

/// Forward sum-product information rate of the FIR sequence model
/// z_k = sum_l g_l d_{k-l} + n_k (zero initial state, log-domain recursion
/// with per-stage normalization). With a state cap the Q largest-metric
/// states survive each stage, giving the reduced-state upper bound on h(z).
BcjrResult bcjr_mi(const std::vector<double>& taps,
                   const Constellation& constellation, double rho,
                   const BcjrOptions& opts);

/// M_c(sum_{k=0..q0} M_c^k + sum_{k=q0+1..nt-1} Q), q0 = max{k : M_c^k < Q}:
/// the reduced-state trellis transition count over the first nt stages.
std::uint64_t bcjr_complexity(std::uint32_t q, int mc, int nt);

}  // namespace mixent
