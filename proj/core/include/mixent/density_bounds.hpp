#pragma once

#include <cmath>

#include "mixent/sd_search.hpp"

namespace mixent {

/// Natural-log density bounds assembled from one candidate set.
/// lower is ln of the found-components sum (underline f); upper_pruned adds
/// the pruned-mass accumulator (overline f+); upper_tail replaces the pruned
/// mass by the worst-case count * exp(-zeta^2) term (overline f, DFS only,
/// NaN otherwise). Conversion to bits happens at reporting.
struct LogDensityTriple {
  double lower;
  double upper_tail;
  double upper_pruned;

  bool has_tail() const { return !std::isnan(upper_tail); }
};

/// -n * ln(pi * mc), the normalization shared by every mixture-density sum.
double log_norm_const(int n_symbols, int mc);

/// ln sum exp(-distance) over the stored candidate order (max shifted).
/// Shared kernel: every density path must sum through here so that paired
/// evaluations agree bit for bit.
double log_found_sum(const CandidateSet& cs);

LogDensityTriple log_density_bounds(const CandidateSet& cs, int mc, int nt);

}  // namespace mixent
