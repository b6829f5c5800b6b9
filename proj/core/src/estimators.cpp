#include "mixent/estimators.hpp"

#include <cmath>
#include <numbers>

#include "mixent/errors.hpp"
#include "mixent/logsum.hpp"
#include "mixent/parallel.hpp"

namespace mixent {

const char* to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::Upper: return "upper";
    case BoundKind::Lower: return "lower";
    case BoundKind::LowerPlus: return "lower_plus";
    case BoundKind::Approx: return "approx";
    case BoundKind::Exact: return "exact";
    case BoundKind::Trivial: return "trivial";
  }
  return "?";
}

const BoundValue* EntropyEstimate::find(BoundKind kind) const {
  for (const BoundValue& v : values)
    if (v.kind == kind) return &v;
  return nullptr;
}

EntropyEstimate run_monte_carlo(const ChannelInstance& channel,
                                const Constellation& constellation, double rho,
                                const McOptions& opts,
                                std::span<const BoundKind> kinds,
                                const SampleEvaluator& evaluate) {
  if (opts.n_d < 1 || opts.n_n < 1)
    throw std::invalid_argument("n_d and n_n must be >= 1");
  const int nt = channel.dim();
  const std::uint64_t n_samples =
      static_cast<std::uint64_t>(opts.n_d) * static_cast<std::uint64_t>(opts.n_n);
  const std::size_t n_kinds = kinds.size();

  // Trial-indexed slots make the reduction independent of scheduling.
  std::vector<std::vector<double>> log_f(n_kinds,
                                         std::vector<double>(n_samples, 0.0));
  std::vector<double> visited(n_samples, 0.0);

  parallel_for(n_samples, opts.threads, [&](std::uint64_t t) {
    const std::uint64_t i = t / static_cast<std::uint64_t>(opts.n_n);
    const std::uint64_t j = t % static_cast<std::uint64_t>(opts.n_n);
    Rng input_rng(opts.seed, stream::kInput, i, 0);
    const DrawnInput input = draw_input(constellation, nt, rho, input_rng);
    Rng noise_rng(opts.seed, stream::kNoise, i, j);
    const Synthesis syn = synthesize(channel.h_permuted, input.symbols, noise_rng);
    const CVec v = channel.q.adjoint() * syn.z;

    std::vector<double> values(n_kinds);
    const McSample sample{i, j, input, syn.z, v};
    visited[t] = static_cast<double>(evaluate(sample, values));
    for (std::size_t s = 0; s < n_kinds; ++s) log_f[s][t] = values[s];
  });

  // A sample is a sentinel when every requested density vanished; it is
  // excluded from all averages so paired orderings stay sample-wise.
  std::vector<std::uint8_t> keep(n_samples, 1);
  std::uint64_t n_sentinels = 0;
  for (std::uint64_t t = 0; t < n_samples; ++t) {
    bool any_finite = false;
    for (std::size_t s = 0; s < n_kinds; ++s)
      if (!std::isnan(log_f[s][t]) && log_f[s][t] != kNegInf) any_finite = true;
    bool any_zero = false;
    for (std::size_t s = 0; s < n_kinds; ++s)
      if (!std::isnan(log_f[s][t]) && log_f[s][t] == kNegInf) any_zero = true;
    if (!any_finite || any_zero) {
      keep[t] = 0;
      ++n_sentinels;
    }
  }

  EntropyEstimate est;
  est.n_samples = n_samples;
  est.n_sentinels = n_sentinels;
  est.mean_visited_nodes =
      pairwise_sum(visited) / static_cast<double>(n_samples);

  const std::uint64_t n_used = n_samples - n_sentinels;
  const double noise_bits = noise_entropy_bits(nt);
  for (std::size_t s = 0; s < n_kinds; ++s) {
    BoundValue bv;
    bv.kind = kinds[s];
    if (n_used == 0) {
      bv.h_bits = bv.mi_bits = bv.stderr_bits =
          std::numeric_limits<double>::quiet_NaN();
      est.values.push_back(bv);
      continue;
    }
    // Per-sample entropy contribution in bits; sentinel slots contribute 0.
    std::vector<double> h_bits(n_samples, 0.0);
    bool defined = true;
    for (std::uint64_t t = 0; t < n_samples && defined; ++t) {
      if (!keep[t]) continue;
      if (std::isnan(log_f[s][t])) defined = false;
      h_bits[t] = -log_f[s][t] / std::numbers::ln2;
    }
    if (!defined) {
      bv.h_bits = bv.mi_bits = bv.stderr_bits =
          std::numeric_limits<double>::quiet_NaN();
      est.values.push_back(bv);
      continue;
    }
    const double mean = pairwise_sum(h_bits) / static_cast<double>(n_used);
    std::vector<double> sq(n_samples, 0.0);
    for (std::uint64_t t = 0; t < n_samples; ++t) {
      if (!keep[t]) continue;
      const double d = h_bits[t] - mean;
      sq[t] = d * d;
    }
    const double var =
        n_used > 1 ? pairwise_sum(sq) / static_cast<double>(n_used - 1) : 0.0;
    bv.h_bits = mean;
    bv.mi_bits = mean - noise_bits;
    bv.stderr_bits = std::sqrt(var / static_cast<double>(n_used));
    est.values.push_back(bv);
  }
  return est;
}

SdEvaluator::SdEvaluator(const ChannelInstance& channel,
                         const Constellation& constellation, double rho,
                         SearchSpec spec)
    : channel_(channel), constellation_(constellation), rho_(rho), spec_(spec) {}

SdEvaluator::Result SdEvaluator::evaluate(const CVec& v) const {
  CandidateSet cs;
  if (spec_.mode == SearchMode::Dfs) {
    double zeta_sq = std::numeric_limits<double>::infinity();
    if (std::isfinite(spec_.alpha)) {
      const auto anchor = babai_anchor_tri(channel_.r, v, constellation_, rho_);
      zeta_sq = sphere_radius_sq(spec_.alpha, v, channel_.r, anchor,
                                 constellation_, rho_);
      if (!(zeta_sq > 0.0)) zeta_sq = std::numeric_limits<double>::min();
    }
    cs = dfs_search(v, channel_.r, zeta_sq, constellation_, rho_);
  } else {
    cs = bfs_search(v, channel_.r, spec_.k, constellation_, rho_);
  }
  return Result{log_density_bounds(cs, constellation_.size, channel_.dim()),
                cs.visited_nodes};
}

EntropyEstimate mc_entropy(const ChannelInstance& channel,
                           const Constellation& constellation, double rho,
                           const SearchSpec& spec, const McOptions& opts) {
  const SdEvaluator evaluator(channel, constellation, rho, spec);
  std::vector<BoundKind> kinds;
  if (spec.mode == SearchMode::Dfs)
    kinds = {BoundKind::Upper, BoundKind::Lower, BoundKind::LowerPlus};
  else
    kinds = {BoundKind::Upper, BoundKind::LowerPlus};

  return run_monte_carlo(
      channel, constellation, rho, opts, kinds,
      [&](const McSample& s, std::span<double> log_f) {
        const auto r = evaluator.evaluate(s.v);
        log_f[0] = r.density.lower;  // underline f -> upper entropy bound
        if (spec.mode == SearchMode::Dfs) {
          log_f[1] = r.density.upper_tail;    // overline f -> lower bound
          log_f[2] = r.density.upper_pruned;  // overline f+ -> enhanced lower
        } else {
          log_f[1] = r.density.upper_pruned;
        }
        return r.visited;
      });
}

EntropyEstimate true_entropy_oracle(const ChannelInstance& channel,
                                    const Constellation& constellation,
                                    double rho, const McOptions& opts,
                                    std::uint64_t component_cap) {
  const int nt = channel.dim();
  const auto mc = static_cast<std::uint64_t>(constellation.size);
  std::uint64_t components = 1;
  bool overflow = false;
  for (int i = 0; i < nt; ++i) {
    if (components > component_cap / mc) {
      overflow = true;
      break;
    }
    components *= mc;
  }
  if (overflow || components > component_cap) {
    const double approx = std::pow(static_cast<double>(constellation.size), nt);
    throw SizeCapError("true_entropy_oracle: M_c^N_t = " +
                       std::to_string(approx) + " exceeds cap " +
                       std::to_string(component_cap));
  }

  const SdEvaluator evaluator(
      channel, constellation, rho,
      SearchSpec::dfs(std::numeric_limits<double>::infinity()));
  const BoundKind kinds[] = {BoundKind::Exact};
  return run_monte_carlo(channel, constellation, rho, opts, kinds,
                         [&](const McSample& s, std::span<double> log_f) {
                           const auto r = evaluator.evaluate(s.v);
                           log_f[0] = r.density.lower;
                           return r.visited;
                         });
}

double gaussian_bound_bits(const ChannelInstance& channel, double rho) {
  if (rho < 0.0) throw std::invalid_argument("rho must be >= 0");
  const int n = channel.dim();
  const CMat k = rho * channel.h * channel.h.adjoint() +
                 CMat::Identity(n, n);
  return HermitianPd(k).log_det() / std::numbers::ln2;
}

double source_entropy_bound_bits(int mc, int nt) {
  return static_cast<double>(nt) * std::log2(static_cast<double>(mc));
}

double noise_entropy_bits(int nt) {
  return static_cast<double>(nt) * std::log2(std::numbers::pi * std::numbers::e);
}

double rho_c(const ChannelInstance& channel, const Constellation& constellation) {
  const double target = source_entropy_bound_bits(constellation.size, channel.dim());
  double hi = 1.0;
  while (gaussian_bound_bits(channel, hi) < target) {
    hi *= 2.0;
    if (hi > 1e300)
      throw NumericDomainError("rho_c: Gaussian bound never reaches the SEB");
  }
  double lo = 0.0;
  // GB is strictly increasing in rho, so the root is unique.
  while (hi - lo > 1e-6 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (gaussian_bound_bits(channel, mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace mixent
