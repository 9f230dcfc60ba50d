#pragma once

#include <cmath>
#include <cstdint>
#include <span>

#include "granular/errors.hpp"

namespace granular {

/// One-pass mean/variance (Welford) with the pairwise merge of Chan et al.
class RunningStats {
 public:
  void push(double x) {
    ++n_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (x - mean_);
  }

  void merge(const RunningStats& o) {
    if (o.n_ == 0) return;
    if (n_ == 0) {
      *this = o;
      return;
    }
    const double na = static_cast<double>(n_);
    const double nb = static_cast<double>(o.n_);
    const double n = na + nb;
    const double delta = o.mean_ - mean_;
    mean_ += delta * (nb / n);
    m2_ += o.m2_ + delta * delta * (na * nb / n);
    n_ += o.n_;
  }

  std::uint64_t count() const { return n_; }
  double mean() const { return mean_; }
  /// Sample variance (n - 1 denominator).
  double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
  double stddev() const { return std::sqrt(variance()); }

 private:
  std::uint64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct SampleStats {
  double mean;
  double std;
  double stderr_of_std;  // large-sample approximation std / sqrt(2(n-1))
};

inline SampleStats summarize(const RunningStats& acc) {
  if (acc.count() < 2) throw DomainError("estimate_stats: at least 2 samples required");
  const double s = acc.stddev();
  return {acc.mean(), s, s / std::sqrt(2.0 * static_cast<double>(acc.count() - 1))};
}

inline SampleStats estimate_stats(std::span<const double> samples) {
  if (samples.size() < 2) throw DomainError("estimate_stats: at least 2 samples required");
  RunningStats acc;
  for (double x : samples) acc.push(x);
  return summarize(acc);
}

}  // namespace granular
