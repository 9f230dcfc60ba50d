#pragma once

/**
 * @file poisson.hpp
 * @brief Poisson variate generation with platform-independent algorithms.
 *
 * std::poisson_distribution is implementation-defined, so draws would differ
 * between standard libraries. These samplers use only the generator's raw
 * 64-bit output and basic libm functions:
 *   - lambda <= 30: inversion by sequential search;
 *   - 30 < lambda <= 1e9: transformed rejection with squeeze (PTRS, Hormann 1993);
 *   - normal approximation round(max(0, N(lambda, sqrt(lambda)))) for lambda >= 1e3.
 */

#include <cmath>
#include <concepts>
#include <cstdint>
#include <random>
#include <string>

#include "granular/errors.hpp"

namespace granular {

template <class G>
concept Rng64 = std::uniform_random_bit_generator<G> &&
                std::same_as<typename G::result_type, std::uint64_t> && (G::min() == 0) &&
                (G::max() == UINT64_MAX);

inline constexpr double kExactSamplerCap = 1e9;
inline constexpr double kInversionLimit = 30.0;
inline constexpr double kNormalSamplerFloor = 1e3;

template <Rng64 G>
double uniform01(G& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

/// Inverse standard normal CDF, Wichura's AS241 (PPND16), |error| ~ 1e-16.
inline double normal_quantile(double p) {
  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((2509.0809287301226727 * r + 33430.575583588128105) * r + 67265.770927008700853) * r +
                45921.953931549871457) * r + 13731.693765509461125) * r + 1971.5909503065514427) * r +
             133.14166789178437745) * r + 3.387132872796366608) /
           (((((((5226.495278852545925 * r + 28729.085735721942674) * r + 39307.89580009271061) * r +
                21213.794301586595867) * r + 5394.1960214247511077) * r + 687.1870074920579083) * r +
             42.313330701600911252) * r + 1.0);
  }
  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double x;
  if (r <= 5.0) {
    r -= 1.6;
    x = (((((((7.7454501427834140764e-4 * r + 0.0227238449892691845833) * r + 0.24178072517745061177) * r +
             1.27045825245236838258) * r + 3.64784832476320460504) * r + 5.7694972214606914055) * r +
          4.6303378461565452959) * r + 1.42343711074968357734) /
        (((((((1.05075007164441684324e-9 * r + 5.475938084995344946e-4) * r + 0.0151986665636164571966) * r +
             0.14810397642748007459) * r + 0.68976733498510000455) * r + 1.6763848301838038494) * r +
          2.05319162663775882187) * r + 1.0);
  } else {
    r -= 5.0;
    x = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r + 0.0012426609473880784386) * r +
             0.026532189526576123093) * r + 0.29656057182850489123) * r + 1.7848265399172913358) * r +
          5.4637849111641143699) * r + 6.6579046435011037772) /
        (((((((2.04426310338993978564e-15 * r + 1.4215117583164458887e-7) * r + 1.8463183175100546818e-5) * r +
             7.868691311456132591e-4) * r + 0.0148753612908506148525) * r + 0.13692988092273580531) * r +
          0.59983220655588793769) * r + 1.0);
  }
  return q < 0.0 ? -x : x;
}

/// Standard normal variate by inversion of one uniform. Inversion keeps the
/// draw a monotone function of the stream's first uniform, the same variate
/// that drives the rejection sampler's transform, so the two samplers stay
/// comparable under common seeds.
template <Rng64 G>
double standard_normal(G& g) {
  double u = uniform01(g);
  while (u == 0.0) u = uniform01(g);
  return normal_quantile(u);
}

namespace detail {

template <Rng64 G>
std::int64_t poisson_inversion(double lambda, G& g) {
  const double u = uniform01(g);
  double p = std::exp(-lambda);
  double cdf = p;
  std::int64_t k = 0;
  // cdf can stall just below 1 from rounding; the tail beyond k = 200 has
  // probability < 1e-100 for lambda <= 30.
  while (u > cdf && k < 200) {
    ++k;
    p *= lambda / static_cast<double>(k);
    cdf += p;
  }
  return k;
}

template <Rng64 G>
std::int64_t poisson_ptrs(double lambda, G& g) {
  const double slam = std::sqrt(lambda);
  const double loglam = std::log(lambda);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = uniform01(g) - 0.5;
    const double v = uniform01(g);
    const double us = 0.5 - std::abs(u);
    const double k = std::floor((2.0 * a / us + b) * u + lambda + 0.43);
    if (us >= 0.07 && v <= vr) return static_cast<std::int64_t>(k);
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
        -lambda + k * loglam - std::lgamma(k + 1.0)) {
      return static_cast<std::int64_t>(k);
    }
  }
}

}  // namespace detail

/// Exact Poisson(lambda) draw.
template <Rng64 G>
std::int64_t sample_poisson(double lambda, G& g) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw DomainError("sample_poisson: lambda must be finite and >= 0, got " +
                      std::to_string(lambda));
  }
  if (lambda > kExactSamplerCap) {
    throw GuardError("sample_poisson: lambda " + std::to_string(lambda) +
                     " exceeds exact sampler cap 1e9");
  }
  if (lambda == 0.0) return 0;
  if (lambda <= kInversionLimit) return detail::poisson_inversion(lambda, g);
  return detail::poisson_ptrs(lambda, g);
}

/// Normal approximation, valid for lambda >= 1e3.
template <Rng64 G>
std::int64_t sample_poisson_normal(double lambda, G& g) {
  if (!(lambda >= kNormalSamplerFloor) || !std::isfinite(lambda)) {
    throw DomainError("sample_poisson_normal: lambda must be >= 1e3, got " +
                      std::to_string(lambda));
  }
  const double x = lambda + std::sqrt(lambda) * standard_normal(g);
  return static_cast<std::int64_t>(std::llround(std::max(0.0, x)));
}

}  // namespace granular
