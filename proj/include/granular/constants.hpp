#pragma once

#include "granular/log_quantity.hpp"

namespace granular {

/// CODATA 2018 values used throughout. The Planck mass is derived as
/// hbar*c / l_P so that m_P * l_P == hbar*c holds exactly in log space.
namespace codata {
inline constexpr double planck_length_m = 1.616255e-35;
inline constexpr double planck_time_s = 5.391247e-44;
inline constexpr double hbar_c_gev_m = 1.973270e-16;
inline constexpr double planck_mass_gev = 1.220890e19;  // reference only
inline constexpr double electron_mass_gev = 5.10999e-4;
}  // namespace codata

struct PhysicalConstants {
  LogQuantity l_P = LogQuantity::meters(codata::planck_length_m);
  double tau_P = codata::planck_time_s;  // seconds; informational
  LogQuantity hbar_c = LogQuantity::from_linear(codata::hbar_c_gev_m, Unit::gev_meter());
  LogQuantity m_P = hbar_c / l_P;

  static const PhysicalConstants& standard() {
    static const PhysicalConstants c{};
    return c;
  }
};

/// Reduced Compton wavelength hbar*c / m.
inline LogQuantity compton(const LogQuantity& mass,
                           const PhysicalConstants& c = PhysicalConstants::standard()) {
  mass.require_unit(Unit::gev(), "compton");
  return c.hbar_c / mass;
}

inline LogQuantity electron_mass() { return LogQuantity::gev(codata::electron_mass_gev); }

}  // namespace granular
