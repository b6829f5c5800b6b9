#include "mixent/density_bounds.hpp"

#include <numbers>

#include "mixent/logsum.hpp"

namespace mixent {

namespace {

// ln(mc^nt - count), exact in integers at desk scale, log1p fallback above.
double log_remaining_count(std::uint64_t count, int mc, int nt) {
  const double log_total = static_cast<double>(nt) * std::log(static_cast<double>(mc));
  if (log_total < 62.0 * std::numbers::ln2) {
    std::uint64_t total = 1;
    for (int i = 0; i < nt; ++i) total *= static_cast<std::uint64_t>(mc);
    if (count >= total) return kNegInf;
    return std::log(static_cast<double>(total - count));
  }
  if (count == 0) return log_total;
  const double ratio = std::exp(std::log(static_cast<double>(count)) - log_total);
  if (ratio >= 1.0) return kNegInf;
  return log_total + std::log1p(-ratio);
}

}  // namespace

double log_norm_const(int n_symbols, int mc) {
  return -static_cast<double>(n_symbols) *
         std::log(std::numbers::pi * static_cast<double>(mc));
}

double log_found_sum(const CandidateSet& cs) {
  std::vector<double> terms(cs.candidates.size());
  for (std::size_t i = 0; i < terms.size(); ++i)
    terms[i] = -cs.candidates[i].distance;
  return log_sum_exp(terms);
}

LogDensityTriple log_density_bounds(const CandidateSet& cs, int mc, int nt) {
  const double norm = log_norm_const(nt, mc);
  const double found = log_found_sum(cs);

  LogDensityTriple t;
  t.lower = found + norm;
  t.upper_pruned = log_add_exp(found, cs.log_pruned_mass) + norm;
  if (cs.mode == SearchMode::Dfs && std::isfinite(cs.radius_sq)) {
    const double log_tail_term =
        log_remaining_count(cs.candidates.size(), mc, nt) - cs.radius_sq;
    t.upper_tail = log_add_exp(found, log_tail_term) + norm;
  } else if (cs.mode == SearchMode::Dfs) {
    // Unbounded radius: the tail term vanishes and all three coincide with
    // the exact density.
    t.upper_tail = t.upper_pruned;
  } else {
    t.upper_tail = std::numeric_limits<double>::quiet_NaN();
  }
  return t;
}

}  // namespace mixent
