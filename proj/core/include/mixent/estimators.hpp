#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mixent/channel.hpp"
#include "mixent/constellation.hpp"
#include "mixent/density_bounds.hpp"
#include "mixent/sd_search.hpp"

namespace mixent {

enum class BoundKind { Upper, Lower, LowerPlus, Approx, Exact, Trivial };

const char* to_string(BoundKind kind);

struct BoundValue {
  BoundKind kind;
  double h_bits;       // entropy estimate (bits); NaN where undefined
  double mi_bits;      // total bits per symbol vector
  double stderr_bits;  // standard error of the per-sample mean
};

/// Output of one Monte-Carlo estimator run.
struct EntropyEstimate {
  std::vector<BoundValue> values;
  std::uint64_t n_samples = 0;
  double mean_visited_nodes = 0.0;
  std::uint64_t n_sentinels = 0;   // samples with zero density, excluded
  std::uint64_t n_fallbacks = 0;   // empty-search fallbacks (SDEA)

  const BoundValue* find(BoundKind kind) const;
};

struct McOptions {
  int n_d = 1;
  int n_n = 1;
  std::uint64_t seed = 0;
  unsigned threads = 1;  // 0 = default_thread_count()
};

/// One drawn Monte-Carlo sample, shared by every estimator so that paired
/// comparisons see identical streams.
struct McSample {
  std::uint64_t i;
  std::uint64_t j;
  const DrawnInput& input;  // in the channel's permuted coordinate order
  const CVec& z;
  const CVec& v;  // Q^H z
};

/// Fills log_f[s] (natural log) for each requested value slot; returns the
/// visited-node count of the sample. NaN in a slot marks "undefined".
using SampleEvaluator =
    std::function<std::uint64_t(const McSample&, std::span<double> log_f)>;

/// Generic Monte-Carlo integration driver (the outer d / inner n loops):
/// draws per-trial streams keyed by (seed, i, j), evaluates the sample
/// densities, and reduces with pairwise sums over trial-indexed slots, so
/// results are bitwise identical for any thread count. A sample whose
/// requested densities are all -inf is excluded and counted as a sentinel.
EntropyEstimate run_monte_carlo(const ChannelInstance& channel,
                                const Constellation& constellation, double rho,
                                const McOptions& opts,
                                std::span<const BoundKind> kinds,
                                const SampleEvaluator& evaluate);

/// Per-sample sphere-decoding bounds evaluator: anchors the radius at the
/// Babai point for DFS or runs the K-best search for BFS.
class SdEvaluator {
 public:
  SdEvaluator(const ChannelInstance& channel, const Constellation& constellation,
              double rho, SearchSpec spec);

  struct Result {
    LogDensityTriple density;
    std::uint64_t visited;
  };
  Result evaluate(const CVec& v) const;

  const SearchSpec& spec() const { return spec_; }

 private:
  const ChannelInstance& channel_;
  const Constellation& constellation_;
  double rho_;
  SearchSpec spec_;
};

/// Monte-Carlo SD entropy/MI bounds (DFS: upper/lower/lower+; BFS:
/// upper/lower+).
EntropyEstimate mc_entropy(const ChannelInstance& channel,
                           const Constellation& constellation, double rho,
                           const SearchSpec& spec, const McOptions& opts);

/// Exhaustive-mixture reference estimator on the same streams as mc_entropy.
/// Refuses when M_c^N_t exceeds component_cap.
EntropyEstimate true_entropy_oracle(const ChannelInstance& channel,
                                    const Constellation& constellation,
                                    double rho, const McOptions& opts,
                                    std::uint64_t component_cap = 1u << 20);

/// log2 det(I + rho H H^H), the Gaussian-input bound in bits.
double gaussian_bound_bits(const ChannelInstance& channel, double rho);

/// N_t log2 M_c, the source entropy bound in bits.
double source_entropy_bound_bits(int mc, int nt);

/// N_t log2(pi e): differential entropy of the unit complex Gaussian noise.
double noise_entropy_bits(int nt);

/// SNR where the Gaussian bound crosses the source entropy bound (bisection,
/// relative tolerance 1e-6). Throws NumericDomainError for a zero channel.
double rho_c(const ChannelInstance& channel, const Constellation& constellation);

}  // namespace mixent
