#pragma once

/**
 * @file bounds.hpp
 * @brief Closed-form detectability thresholds for Poisson displacements on
 *        a discrete grid, for an isolated mass and for a light particle
 *        coupled to a heavy object by mass-dipole conservation.
 *
 * Every "much greater than" condition is returned as its bare right-hand
 * side; safety margins belong to the caller. Piecewise formulas switch at
 * the Planck mass with m == m_P on the light branch.
 */

#include "granular/discreteness_model.hpp"

namespace granular {

/// Standard deviation sqrt(grid * d) of a displacement d made of
/// Poisson(d / grid) cells.
inline LogQuantity poisson_std(const LogQuantity& d, const LogQuantity& grid) {
  d.require_unit(Unit::meter(), "poisson_std(d)");
  grid.require_unit(Unit::meter(), "poisson_std(grid)");
  return (grid * d).sqrt();
}

struct AccuracyThresholds {
  double n_max;
  LogQuantity d_max;
  LogQuantity delta_d_max;
};

/// Given relative accuracy a = delta_d / d: N < 1/a^2, d < l_P/a^2,
/// delta_d < l_P/a.
inline AccuracyThresholds accuracy_fixed_thresholds(
    double a, const PhysicalConstants& c = PhysicalConstants::standard()) {
  if (!(a > 0.0 && a < 1.0)) {
    throw DomainError("accuracy_fixed_thresholds: accuracy must lie in (0, 1), got " +
                      std::to_string(a));
  }
  const auto acc = LogQuantity::scalar(a);
  return {1.0 / (a * a), c.l_P / acc.pow(2.0), c.l_P / acc};
}

/// Smallest displacement whose Poisson spread exceeds a fixed precision.
inline LogQuantity precision_fixed_min_displacement(const LogQuantity& delta_d,
                                                    const LogQuantity& grid) {
  delta_d.require_unit(Unit::meter(), "precision_fixed_min_displacement(delta_d)");
  grid.require_unit(Unit::meter(), "precision_fixed_min_displacement(grid)");
  return delta_d.pow(2.0) / grid;
}

/// Gray region: displacements below max{lambda_C(m), l_P} are unmeasurable.
inline LogQuantity displacement_floor(const DiscretenessModel& model, const LogQuantity& m) {
  return max(compton(m, model.constants()), model.constants().l_P);
}

inline bool on_light_branch(const DiscretenessModel& model, const LogQuantity& m) {
  return m <= model.constants().m_P;
}

inline LogQuantity min_displacement_independent(const DiscretenessModel& model,
                                                const LogQuantity& m) {
  const auto& c = model.constants();
  const auto scale = on_light_branch(model, m) ? compton(m, c) : c.l_P;
  return scale.pow(2.0) / model.l_eff(m);
}

inline LogQuantity worst_accuracy_independent(const DiscretenessModel& model,
                                              const LogQuantity& m) {
  const auto& c = model.constants();
  const auto scale = on_light_branch(model, m) ? compton(m, c) : c.l_P;
  return model.l_eff(m) / scale;
}

/// Spread transferred to the particle: sqrt(M l_eff(M) d / m).
inline LogQuantity coupled_delta_d(const DiscretenessModel& model, const LogQuantity& m,
                                   const LogQuantity& big_m, const LogQuantity& d) {
  m.require_unit(Unit::gev(), "coupled_delta_d(m)");
  d.require_unit(Unit::meter(), "coupled_delta_d(d)");
  return (big_m * model.l_eff(big_m) * d / m).sqrt();
}

inline LogQuantity min_displacement_coupled(const DiscretenessModel& model, const LogQuantity& m,
                                            const LogQuantity& big_m) {
  const auto& c = model.constants();
  const auto mass_factor = big_m < c.m_P ? c.m_P / big_m : big_m / c.m_P;
  return mass_factor * (c.l_P / model.l_eff(big_m)) * compton(m, c);
}

/// Key-condition ratio M l_eff(M) / (m l_eff(m)).
inline LogQuantity amplification_ratio(const DiscretenessModel& model, const LogQuantity& m,
                                       const LogQuantity& big_m) {
  m.require_unit(Unit::gev(), "amplification_ratio(m)");
  big_m.require_unit(Unit::gev(), "amplification_ratio(M)");
  return (big_m * model.l_eff(big_m)) / (m * model.l_eff(m));
}

struct IndependentBounds {
  LogQuantity mass;
  LogQuantity min_displacement;
  LogQuantity worst_accuracy;
  LogQuantity floor;
};

inline IndependentBounds independent_bounds(const DiscretenessModel& model, const LogQuantity& m) {
  return {m, min_displacement_independent(model, m), worst_accuracy_independent(model, m),
          displacement_floor(model, m)};
}

struct CoupledBounds {
  LogQuantity m;
  LogQuantity big_m;
  LogQuantity min_displacement;
  LogQuantity amplification;
  LogQuantity floor;  // lambda_C(m)

  LogQuantity delta_d_at(const DiscretenessModel& model, const LogQuantity& d) const {
    return coupled_delta_d(model, m, big_m, d);
  }
};

inline CoupledBounds coupled_bounds(const DiscretenessModel& model, const LogQuantity& m,
                                    const LogQuantity& big_m) {
  return {m, big_m, min_displacement_coupled(model, m, big_m),
          amplification_ratio(model, m, big_m), compton(m, model.constants())};
}

}  // namespace granular
