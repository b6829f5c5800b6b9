#include "mixent/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>

#include "mixent/density_bounds.hpp"
#include "mixent/errors.hpp"
#include "mixent/logsum.hpp"

namespace mixent {

namespace {
using cx = std::complex<double>;
}

SaEvaluator::SaEvaluator(const ChannelInstance& channel,
                         const Constellation& constellation, double rho)
    : channel_(channel),
      mc_(constellation.size),
      k_z_(rho * channel.h * channel.h.adjoint() +
           CMat::Identity(channel.dim(), channel.dim())) {}

double SaEvaluator::log_f_high(const CVec& z, const CVec& d_drawn) const {
  return log_norm_const(channel_.dim(), mc_) -
         (z - channel_.h_permuted * d_drawn).squaredNorm();
}

double SaEvaluator::log_f_low(const CVec& z) const {
  return -static_cast<double>(channel_.dim()) * std::log(std::numbers::pi) -
         k_z_.log_det() - k_z_.quad_form(z);
}

double SaEvaluator::log_pdf(const CVec& z, const CVec& d_drawn) const {
  return std::max(log_f_high(z, d_drawn), log_f_low(z));
}

Hd1Evaluator::Hd1Evaluator(const ChannelInstance& channel,
                           const Constellation& constellation, double rho)
    : channel_(channel),
      constellation_(constellation),
      rho_(rho),
      sa_(channel, constellation, rho) {}

int Hd1Evaluator::candidate_count() const {
  return 1 + channel_.dim() * (constellation_.size - 1);
}

double Hd1Evaluator::log_f_mid(const CVec& v) const {
  const int n = channel_.dim();
  const int mc = constellation_.size;
  const double amp = std::sqrt(rho_);
  const auto anchor = babai_anchor_tri(channel_.r, v, constellation_, rho_);

  CVec d0(n);
  for (int i = 0; i < n; ++i)
    d0(i) = amp * constellation_.points[static_cast<std::size_t>(anchor[static_cast<std::size_t>(i)])];
  const CVec base_residual = v - channel_.r.triangularView<Eigen::Upper>() * d0;

  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(candidate_count()));
  terms.push_back(-base_residual.squaredNorm());
  // Single-coordinate substitutions shift the residual along one column of R.
  for (int i = 0; i < n; ++i) {
    const cx anchor_sym = d0(i);
    for (int m = 0; m < mc; ++m) {
      if (m == anchor[static_cast<std::size_t>(i)]) continue;
      const cx delta = amp * constellation_.points[static_cast<std::size_t>(m)] - anchor_sym;
      double dist = 0.0;
      for (int row = 0; row <= i; ++row)
        dist += std::norm(base_residual(row) - channel_.r(row, i) * delta);
      for (int row = i + 1; row < n; ++row) dist += std::norm(base_residual(row));
      terms.push_back(-dist);
    }
  }
  return log_sum_exp(terms) + log_norm_const(n, mc);
}

double Hd1Evaluator::log_pdf(const CVec& z, const CVec& v, const CVec& d_drawn) const {
  return std::max({sa_.log_f_high(z, d_drawn), log_f_mid(v), sa_.log_f_low(z)});
}

double sa_log_pdf(const CVec& z, const ChannelInstance& channel,
                  const CVec& d_drawn, double rho, int mc) {
  Constellation dummy;
  dummy.size = mc;  // only the prior weight is needed here
  SaEvaluator eval(channel, dummy, rho);
  return eval.log_pdf(z, d_drawn);
}

double hd1_log_pdf(const CVec& z, const ChannelInstance& channel,
                   const Constellation& constellation, double rho,
                   const CVec& d_drawn) {
  Hd1Evaluator eval(channel, constellation, rho);
  const CVec v = channel.q.adjoint() * z;
  return eval.log_pdf(z, v, d_drawn);
}

EntropyEstimate sa_mi(const ChannelInstance& channel,
                      const Constellation& constellation, double rho,
                      const McOptions& opts) {
  const SaEvaluator evaluator(channel, constellation, rho);
  const BoundKind kinds[] = {BoundKind::Approx};
  return run_monte_carlo(channel, constellation, rho, opts, kinds,
                         [&](const McSample& s, std::span<double> log_f) {
                           log_f[0] = evaluator.log_pdf(s.z, s.input.symbols);
                           return std::uint64_t{2};  // f_h and f_l
                         });
}

EntropyEstimate hd1_mi(const ChannelInstance& channel,
                       const Constellation& constellation, double rho,
                       const McOptions& opts) {
  const Hd1Evaluator evaluator(channel, constellation, rho);
  const auto components = static_cast<std::uint64_t>(evaluator.candidate_count());
  const BoundKind kinds[] = {BoundKind::Approx};
  return run_monte_carlo(channel, constellation, rho, opts, kinds,
                         [&](const McSample& s, std::span<double> log_f) {
                           log_f[0] = evaluator.log_pdf(s.z, s.v, s.input.symbols);
                           return components;
                         });
}

namespace {

struct TrellisDraw {
  std::vector<std::int32_t> symbols;
  std::vector<cx> outputs;  // z_k
};

TrellisDraw draw_sequence(const std::vector<double>& g,
                          const Constellation& constellation, double rho,
                          std::uint64_t n, std::uint64_t seed) {
  TrellisDraw d;
  const int L = static_cast<int>(g.size()) - 1;
  const double amp = std::sqrt(rho);
  Rng in_rng(seed, stream::kBcjrInput, 0, 0);
  Rng noise_rng(seed, stream::kBcjrNoise, 0, 0);
  d.symbols.resize(n);
  d.outputs.resize(n);
  const auto mc = static_cast<std::uint32_t>(constellation.size);
  for (std::uint64_t k = 0; k < n; ++k)
    d.symbols[k] = static_cast<std::int32_t>(in_rng.uniform_index(mc));
  for (std::uint64_t k = 0; k < n; ++k) {
    cx mean = 0.0;
    for (int l = 0; l <= L; ++l) {
      const std::int64_t t = static_cast<std::int64_t>(k) - l;
      if (t < 0) continue;  // zero initial state
      mean += g[static_cast<std::size_t>(l)] * amp *
              constellation.points[static_cast<std::size_t>(d.symbols[static_cast<std::size_t>(t)])];
    }
    d.outputs[k] = mean + noise_rng.cnormal();
  }
  return d;
}

}  // namespace

BcjrResult bcjr_mi(const std::vector<double>& taps,
                   const Constellation& constellation, double rho,
                   const BcjrOptions& opts) {
  const std::vector<double> g = normalized_taps(taps);
  const int L = static_cast<int>(g.size()) - 1;
  const int mc = constellation.size;
  if ((mc & (mc - 1)) != 0)
    throw std::invalid_argument("bcjr_mi expects a power-of-two constellation");
  if (opts.n < 1000) throw std::invalid_argument("bcjr_mi requires n >= 1000");

  const int mc_bits = std::countr_zero(static_cast<unsigned>(mc));
  if (L * mc_bits > 62)
    throw SizeCapError("bcjr_mi: M_c^L state space needs " +
                       std::to_string(L * mc_bits) + " bits");
  const std::uint64_t n_states = std::uint64_t(1) << (L * mc_bits);
  const bool reduced =
      opts.state_cap.has_value() && *opts.state_cap < n_states;
  if (!reduced && n_states > opts.full_state_cap)
    throw SizeCapError("bcjr_mi: full trellis has " + std::to_string(n_states) +
                       " states, cap " + std::to_string(opts.full_state_cap));

  const std::uint64_t warmup = static_cast<std::uint64_t>(4 * L);
  if (opts.n <= warmup + 1)
    throw std::invalid_argument("bcjr_mi: sequence shorter than warm-up");

  const double amp = std::sqrt(rho);
  std::vector<cx> pts(constellation.points.size());
  for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = amp * constellation.points[i];

  const TrellisDraw seq = draw_sequence(g, constellation, rho, opts.n, opts.seed);

  const std::uint64_t digit_mask = static_cast<std::uint64_t>(mc) - 1;
  const std::uint64_t key_mask =
      L == 0 ? 0 : (n_states >> mc_bits) - 1;  // drop the oldest digit
  const double log_trans_const =
      -std::log(static_cast<double>(mc)) - std::log(std::numbers::pi);

  // State tail = sum_{l=1..L} g_l d_{k-l}; digit l-1 of the key holds the
  // symbol index of d_{k-l}. For stages k <= L the dead taps are masked.
  auto state_tail = [&](std::uint64_t key, std::uint64_t stage) {
    cx tail = 0.0;
    const int live = static_cast<int>(
        std::min<std::uint64_t>(static_cast<std::uint64_t>(L), stage - 1));
    for (int l = 1; l <= live; ++l) {
      const std::uint64_t digit = (key >> ((l - 1) * mc_bits)) & digit_mask;
      tail += g[static_cast<std::size_t>(l)] * pts[static_cast<std::size_t>(digit)];
    }
    return tail;
  };

  // Active states as key-sorted (key, metric) pairs so the per-stage scan
  // order is reproducible. Metrics are kept max-shifted; the shifts accumulate
  // in log_norm. A dense metric array serves as the successor scatter target
  // when the state space fits, a hash map otherwise.
  std::vector<std::pair<std::uint64_t, double>> active{{0, 0.0}};
  double log_norm = 0.0;
  double log_p_warm = 0.0;
  double log_p_final = 0.0;
  std::uint64_t visited = 0;

  const bool dense = n_states <= opts.full_state_cap;
  std::vector<cx> tail_cache;
  if (dense && L > 0) {
    tail_cache.resize(n_states);
    for (std::uint64_t key = 0; key < n_states; ++key)
      tail_cache[key] = state_tail(key, static_cast<std::uint64_t>(L) + 1);
  }

  std::vector<double> dense_next(dense ? n_states : 0, kNegInf);
  std::vector<std::uint64_t> touched;
  std::unordered_map<std::uint64_t, double> sparse_next;

  for (std::uint64_t stage = 1; stage <= opts.n; ++stage) {
    const cx z_k = seq.outputs[stage - 1];
    if (opts.report_stages > 0 &&
        stage <= static_cast<std::uint64_t>(opts.report_stages))
      visited += static_cast<std::uint64_t>(mc) * active.size();

    touched.clear();
    sparse_next.clear();
    for (const auto& [key, metric] : active) {
      const cx tail = (dense && stage > static_cast<std::uint64_t>(L))
                          ? tail_cache.empty() ? cx{0.0} : tail_cache[key]
                          : state_tail(key, stage);
      const std::uint64_t shifted = (key & key_mask) << mc_bits;
      for (int m = 0; m < mc; ++m) {
        const double trans =
            log_trans_const - std::norm(z_k - (g[0] * pts[static_cast<std::size_t>(m)] + tail));
        const double value = metric + trans;
        const std::uint64_t next_key =
            L == 0 ? 0 : shifted | static_cast<std::uint64_t>(m);
        if (dense) {
          if (dense_next[next_key] == kNegInf) {
            dense_next[next_key] = value;
            touched.push_back(next_key);
          } else {
            dense_next[next_key] = log_add_exp(dense_next[next_key], value);
          }
        } else {
          auto [it, inserted] = sparse_next.try_emplace(next_key, value);
          if (!inserted) it->second = log_add_exp(it->second, value);
        }
      }
    }

    active.clear();
    if (dense) {
      std::sort(touched.begin(), touched.end());
      for (std::uint64_t key : touched) {
        active.emplace_back(key, dense_next[key]);
        dense_next[key] = kNegInf;
      }
    } else {
      active.assign(sparse_next.begin(), sparse_next.end());
      std::sort(active.begin(), active.end());
    }

    double stage_max = kNegInf;
    for (const auto& [key, metric] : active) stage_max = std::max(stage_max, metric);
    for (auto& [key, metric] : active) metric -= stage_max;
    log_norm += stage_max;

    double sum = 0.0;
    for (const auto& [key, metric] : active) sum += std::exp(metric);
    const double log_p_stage = log_norm + std::log(sum);
    if (stage == warmup) log_p_warm = log_p_stage;
    if (stage == opts.n) log_p_final = log_p_stage;

    if (reduced && active.size() > *opts.state_cap) {
      // Keep the Q largest metrics, state id breaking ties.
      std::sort(active.begin(), active.end(),
                [](const auto& a, const auto& b) {
                  if (a.second != b.second) return a.second > b.second;
                  return a.first < b.first;
                });
      active.resize(*opts.state_cap);
      std::sort(active.begin(), active.end());
    }
  }

  BcjrResult res;
  res.n_states = n_states;
  res.warmup = warmup;
  res.visited_states_report = visited;
  res.log2_p_total = log_p_final / std::numbers::ln2;
  const double rate_bits =
      (log_p_final - log_p_warm) /
      (static_cast<double>(opts.n - warmup) * std::numbers::ln2);
  res.mi_bits_per_symbol = -rate_bits - std::log2(std::numbers::pi * std::numbers::e);
  return res;
}

std::uint64_t bcjr_complexity(std::uint32_t q, int mc, int nt) {
  std::uint64_t total = 0;
  std::uint64_t pow = 1;  // mc^k, k = 0..nt-1
  bool saturated = false;
  for (int k = 0; k < nt; ++k) {
    total += static_cast<std::uint64_t>(mc) *
             (saturated ? q : std::min<std::uint64_t>(pow, q));
    if (!saturated) {
      if (pow > (std::uint64_t(1) << 62) / static_cast<std::uint64_t>(mc))
        saturated = true;
      else
        pow *= static_cast<std::uint64_t>(mc);
    }
  }
  return total;
}

}  // namespace mixent
