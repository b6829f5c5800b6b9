#pragma once

#include <cmath>
#include <limits>
#include <span>

namespace mixent {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// log(exp(a) + exp(b)) without leaving the log domain.
inline double log_add_exp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = a > b ? a : b;
  const double lo = a > b ? b : a;
  return hi + std::log1p(std::exp(lo - hi));
}

/// Streaming max-shifted log-sum-exp accumulator. Terms enter as logs; the
/// running value is max + log(sum of shifted exponentials), so arbitrarily
/// small terms contribute exact zeros instead of underflowing the total.
class LogSumAccumulator {
 public:
  void add(double log_term) {
    if (log_term == kNegInf) return;
    if (log_term <= max_) {
      sum_ += std::exp(log_term - max_);
    } else {
      sum_ = sum_ * std::exp(max_ - log_term) + 1.0;
      max_ = log_term;
    }
  }

  bool empty() const { return max_ == kNegInf; }

  double value() const { return empty() ? kNegInf : max_ + std::log(sum_); }

 private:
  double max_ = kNegInf;
  double sum_ = 0.0;
};

/// One-shot log-sum-exp over terms already in the log domain, summed in the
/// given order after a single max shift. Used for density assembly where two
/// call sites must agree bit for bit.
inline double log_sum_exp(std::span<const double> log_terms) {
  double max = kNegInf;
  for (double t : log_terms) max = t > max ? t : max;
  if (max == kNegInf) return kNegInf;
  double sum = 0.0;
  for (double t : log_terms) sum += std::exp(t - max);
  return max + std::log(sum);
}

/// Pairwise-tree summation keyed by index: deterministic for a fixed array
/// regardless of thread count, and better conditioned than a running sum.
inline double pairwise_sum(std::span<const double> xs) {
  if (xs.size() <= 8) {
    double sum = 0.0;
    for (double x : xs) sum += x;
    return sum;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

}  // namespace mixent
