#pragma once

/**
 * @file montecarlo.hpp
 * @brief Seeded simulation of grid-quantized displacements.
 *
 * Independent mode: a displacement with mean d is realized as N cells of
 * size grid, N ~ Poisson(d / grid).
 *
 * Coupled mode: a particle (mass m) and an object (mass M = R m) obey
 * m d + M D = 0 in every trial. The object's displacement is the sampled
 * quantity, D = -N' grid_object with N' ~ Poisson(|D| / grid_object) and
 * |D| = d / R, and the particle's displacement follows from the constraint,
 * d = -R D. The object's relative spread is therefore carried over to the
 * particle unchanged and its absolute spread is amplified by R.
 *
 * Trial i always draws from substream (seed, i). Trials are grouped in fixed
 * blocks whose accumulators are merged in a fixed tree order, so results are
 * bit-identical for any number of workers.
 */

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <json.hpp>

#include "granular/errors.hpp"
#include "granular/poisson.hpp"
#include "granular/random.hpp"
#include "granular/stats.hpp"

namespace granular {

enum class SimMode { independent, coupled };
enum class Sampler { exact, normal_approx, auto_select };

inline constexpr double kAutoNormalSwitch = 1e6;
inline constexpr double kNormalSamplerCap = 9007199254740992.0;  // 2^53
inline constexpr std::uint64_t kTrialBlock = 4096;

inline std::string_view to_string(SimMode m) {
  return m == SimMode::independent ? "independent" : "coupled";
}

inline std::string_view to_string(Sampler s) {
  switch (s) {
    case Sampler::exact: return "exact";
    case Sampler::normal_approx: return "normal_approx";
    case Sampler::auto_select: return "auto";
  }
  return "auto";
}

struct ExperimentSpec {
  SimMode mode = SimMode::independent;
  double d_mean = 1.0;         // particle mean displacement
  double grid_particle = 1.0;  // l_eff(m)
  double grid_object = 1.0;    // l_eff(M), coupled only
  double mass_ratio = 1.0;     // M / m, coupled only
  std::uint64_t trials = 1000;
  std::uint64_t seed = 0;
  Sampler sampler = Sampler::auto_select;
  bool snap_particle = false;  // coupled only: quantize derived d to grid_particle
};

struct RunOptions {
  unsigned workers = 1;  // 0 = hardware concurrency
};

struct SimResult {
  SimMode mode = SimMode::independent;
  std::string sampler;  // exact | normal_approx | analytic
  std::uint64_t trials = 0;
  double lambda = 0.0;
  double empirical_mean = std::numeric_limits<double>::quiet_NaN();
  double empirical_std = std::numeric_limits<double>::quiet_NaN();
  double predicted_std = 0.0;
  double rel_deviation = std::numeric_limits<double>::quiet_NaN();
  double dipole_residual_max = 0.0;
  // Magnitude statistics of the object's displacement (coupled mode).
  double object_mean = std::numeric_limits<double>::quiet_NaN();
  double object_std = std::numeric_limits<double>::quiet_NaN();
  bool analytic_only = false;
  std::vector<std::string> warnings;
};

/// Mean of the sampled Poisson process for this spec.
inline double sampled_lambda(const ExperimentSpec& spec) {
  return spec.mode == SimMode::independent ? spec.d_mean / spec.grid_particle
                                           : (spec.d_mean / spec.mass_ratio) / spec.grid_object;
}

/// Analytic spread of the particle displacement.
inline double predicted_std(const ExperimentSpec& spec) {
  return spec.mode == SimMode::independent
             ? std::sqrt(spec.grid_particle * spec.d_mean)
             : std::sqrt(spec.mass_ratio * spec.grid_object * spec.d_mean);
}

namespace detail {

inline void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string("ExperimentSpec: ") + name + " must be finite and > 0");
  }
}

struct BlockResult {
  RunningStats particle;
  RunningStats object;
  double residual_max = 0.0;

  void merge(const BlockResult& o) {
    particle.merge(o.particle);
    object.merge(o.object);
    residual_max = std::max(residual_max, o.residual_max);
  }
};

inline BlockResult merge_tree(const std::vector<BlockResult>& blocks, std::size_t lo,
                              std::size_t hi) {
  if (hi - lo == 1) return blocks[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  BlockResult left = merge_tree(blocks, lo, mid);
  left.merge(merge_tree(blocks, mid, hi));
  return left;
}

}  // namespace detail

/// Draws one cell count for the resolved sampler.
template <Rng64 G>
std::int64_t draw_count(double lambda, Sampler resolved, G& g) {
  return resolved == Sampler::normal_approx ? sample_poisson_normal(lambda, g)
                                            : sample_poisson(lambda, g);
}

inline SimResult simulate(const ExperimentSpec& spec, const RunOptions& options = {}) {
  detail::require_positive(spec.d_mean, "d_mean");
  detail::require_positive(spec.grid_particle, "grid_particle");
  if (spec.mode == SimMode::coupled) {
    detail::require_positive(spec.grid_object, "grid_object");
    detail::require_positive(spec.mass_ratio, "mass_ratio");
  }
  if (spec.trials < 1) throw DomainError("ExperimentSpec: trials must be >= 1");

  SimResult result;
  result.mode = spec.mode;
  result.trials = spec.trials;
  result.lambda = sampled_lambda(spec);
  result.predicted_std = predicted_std(spec);
  detail::require_positive(result.lambda, "lambda (mean / grid)");
  if (spec.mode == SimMode::coupled && spec.mass_ratio <= 1.0) {
    result.warnings.emplace_back("mass_ratio <= 1: no amplification");
  }

  Sampler resolved = spec.sampler;
  switch (spec.sampler) {
    case Sampler::exact:
      if (result.lambda > kExactSamplerCap) {
        throw GuardError("exact sampler refuses lambda = " + std::to_string(result.lambda) +
                         " > 1e9");
      }
      break;
    case Sampler::normal_approx:
      if (result.lambda < kNormalSamplerFloor) {
        throw GuardError("normal_approx sampler requires lambda >= 1e3, got " +
                         std::to_string(result.lambda));
      }
      if (result.lambda > kNormalSamplerCap) {
        throw GuardError("normal_approx sampler refuses lambda = " +
                         std::to_string(result.lambda) + " > 2^53");
      }
      break;
    case Sampler::auto_select:
      if (result.lambda > kExactSamplerCap) {
        result.analytic_only = true;
        result.sampler = "analytic";
        result.warnings.emplace_back("lambda exceeds sampler cap; analytic prediction only");
        return result;
      }
      resolved = result.lambda > kAutoNormalSwitch ? Sampler::normal_approx : Sampler::exact;
      break;
  }
  result.sampler = std::string(to_string(resolved));

  const std::uint64_t n_blocks = (spec.trials + kTrialBlock - 1) / kTrialBlock;
  std::vector<detail::BlockResult> blocks(n_blocks);
  const double lambda = result.lambda;

  auto run_block = [&](std::uint64_t b) {
    detail::BlockResult acc;
    const std::uint64_t first = b * kTrialBlock;
    const std::uint64_t last = std::min(spec.trials, first + kTrialBlock);
    for (std::uint64_t trial = first; trial < last; ++trial) {
      Xoshiro256 rng(spec.seed, trial);
      const double cells = static_cast<double>(draw_count(lambda, resolved, rng));
      if (spec.mode == SimMode::independent) {
        acc.particle.push(cells * spec.grid_particle);
        continue;
      }
      const double big_d = -(cells * spec.grid_object);
      double d = -spec.mass_ratio * big_d;
      if (spec.snap_particle) d = std::round(d / spec.grid_particle) * spec.grid_particle;
      // Masses in units of m: m d + M D with m = 1, M = mass_ratio.
      acc.residual_max = std::max(acc.residual_max, std::abs(d + spec.mass_ratio * big_d));
      acc.particle.push(d);
      acc.object.push(-big_d);
    }
    blocks[b] = acc;
  };

  unsigned workers = options.workers == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                          : options.workers;
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, n_blocks));
  if (workers <= 1) {
    for (std::uint64_t b = 0; b < n_blocks; ++b) run_block(b);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    {
      std::vector<std::jthread> pool;
      pool.reserve(workers);
      for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          try {
            for (std::uint64_t b = next++; b < n_blocks; b = next++) run_block(b);
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
    }
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  const detail::BlockResult total = detail::merge_tree(blocks, 0, blocks.size());
  result.empirical_mean = total.particle.mean();
  if (total.particle.count() >= 2) {
    result.empirical_std = total.particle.stddev();
    result.rel_deviation = std::abs(result.empirical_std / result.predicted_std - 1.0);
  }
  if (spec.mode == SimMode::coupled) {
    result.dipole_residual_max = total.residual_max;
    result.object_mean = total.object.mean();
    if (total.object.count() >= 2) result.object_std = total.object.stddev();
  }
  return result;
}

inline SimResult simulate_independent(ExperimentSpec spec, const RunOptions& options = {}) {
  if (spec.mode != SimMode::independent) {
    throw DomainError("simulate_independent: spec.mode must be independent");
  }
  return simulate(spec, options);
}

inline SimResult simulate_coupled(ExperimentSpec spec, const RunOptions& options = {}) {
  if (spec.mode != SimMode::coupled) {
    throw DomainError("simulate_coupled: spec.mode must be coupled");
  }
  return simulate(spec, options);
}

namespace detail {
inline nlohmann::ordered_json number_or_null(double v) {
  return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
}
}  // namespace detail

/// Field order is fixed; NaN (not simulated) is written as null.
inline nlohmann::ordered_json to_json(const SimResult& r) {
  nlohmann::ordered_json j;
  j["mode"] = std::string(to_string(r.mode));
  j["sampler"] = r.sampler;
  j["trials"] = r.trials;
  j["lambda"] = r.lambda;
  j["empirical_mean"] = detail::number_or_null(r.empirical_mean);
  j["empirical_std"] = detail::number_or_null(r.empirical_std);
  j["predicted_std"] = r.predicted_std;
  j["rel_deviation"] = detail::number_or_null(r.rel_deviation);
  j["dipole_residual_max"] = r.dipole_residual_max;
  j["object_mean"] = detail::number_or_null(r.object_mean);
  j["object_std"] = detail::number_or_null(r.object_std);
  j["analytic_only"] = r.analytic_only;
  j["warnings"] = r.warnings;
  return j;
}

}  // namespace granular
