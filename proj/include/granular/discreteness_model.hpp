#pragma once

#include <string>

#include "granular/constants.hpp"

namespace granular {

/**
 * Power-law degrees-of-freedom model.
 *
 * Objects up to the threshold mass mu carry a single spatial degree of
 * freedom; above it f = (m/mu)^alpha. The center-of-mass grid spacing is
 * l_eff = l_P / f^beta, i.e. l_P (mu/m)^(alpha*beta) for m > mu.
 */
class DiscretenessModel {
 public:
  DiscretenessModel() : DiscretenessModel(LogQuantity::gev(1.0), 1.0, 0.5) {}

  DiscretenessModel(LogQuantity mu, double alpha, double beta,
                    const PhysicalConstants& constants = PhysicalConstants::standard())
      : mu_(mu), alpha_(alpha), beta_(beta), constants_(constants) {
    mu_.require_unit(Unit::gev(), "DiscretenessModel(mu)");
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
      throw DomainError("DiscretenessModel: alpha must be > 0, got " + std::to_string(alpha));
    }
    // beta = 0 is admitted as the degenerate no-suppression model.
    if (!(beta >= 0.0) || !std::isfinite(beta)) {
      throw DomainError("DiscretenessModel: beta must be >= 0, got " + std::to_string(beta));
    }
  }

  const LogQuantity& mu() const { return mu_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  const PhysicalConstants& constants() const { return constants_; }

  /// f(m) = max{1, (m/mu)^alpha}, dimensionless.
  LogQuantity dof(const LogQuantity& m) const {
    m.require_unit(Unit::gev(), "dof");
    if (m <= mu_) return LogQuantity::scalar(1.0);
    return (m / mu_).pow(alpha_);
  }

  LogQuantity l_eff(const LogQuantity& m) const {
    m.require_unit(Unit::gev(), "l_eff");
    if (m <= mu_ || beta_ == 0.0) return constants_.l_P;
    return constants_.l_P * (mu_ / m).pow(alpha_ * beta_);
  }

  /// Effective number of cells d / l_eff(m).
  LogQuantity n_eff(const LogQuantity& m, const LogQuantity& d) const {
    d.require_unit(Unit::meter(), "n_eff");
    return d / l_eff(m);
  }

 private:
  LogQuantity mu_;
  double alpha_;
  double beta_;
  PhysicalConstants constants_;
};

}  // namespace granular
