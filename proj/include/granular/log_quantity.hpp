#pragma once

/**
 * @file log_quantity.hpp
 * @brief Strictly positive physical quantities stored as log10 magnitudes.
 *
 * Lengths between the Planck scale and astronomical distances span roughly
 * 80 decades, and intermediate products (l_P^2, M * l_eff) leave the range
 * of a double. LogQuantity keeps the base-10 logarithm of the magnitude and
 * a unit expressed as integer powers of meter and GeV, so products,
 * quotients and powers are additions and scalings of the log.
 */

#include <cmath>
#include <compare>
#include <cstdint>
#include <string>

#include "granular/errors.hpp"

namespace granular {

/// Unit as meter^length * GeV^energy.
struct Unit {
  int length = 0;
  int energy = 0;

  static constexpr Unit meter() { return {1, 0}; }
  static constexpr Unit gev() { return {0, 1}; }
  static constexpr Unit dimensionless() { return {0, 0}; }
  static constexpr Unit gev_meter() { return {1, 1}; }

  constexpr bool operator==(const Unit&) const = default;

  constexpr Unit operator*(Unit o) const { return {length + o.length, energy + o.energy}; }
  constexpr Unit operator/(Unit o) const { return {length - o.length, energy - o.energy}; }

  std::string name() const {
    if (*this == dimensionless()) return "dimensionless";
    if (*this == meter()) return "meter";
    if (*this == gev()) return "GeV";
    std::string out;
    auto term = [&out](const char* sym, int e) {
      if (e == 0) return;
      if (!out.empty()) out += "*";
      out += sym;
      if (e != 1) out += "^" + std::to_string(e);
    };
    term("GeV", energy);
    term("m", length);
    return out;
  }
};

class LogQuantity {
 public:
  /// |log10| limit for conversion back to a linear double.
  static constexpr double kLinearLimit = 300.0;

  LogQuantity() = default;

  static LogQuantity from_log10(double log10_value, Unit unit = Unit::dimensionless()) {
    if (!std::isfinite(log10_value)) {
      throw DomainError("LogQuantity: log10 value must be finite");
    }
    return LogQuantity(log10_value, unit);
  }

  static LogQuantity from_linear(double value, Unit unit = Unit::dimensionless()) {
    if (!(value > 0.0) || !std::isfinite(value)) {
      throw DomainError("LogQuantity: magnitude must be finite and strictly positive, got " +
                        std::to_string(value));
    }
    return LogQuantity(std::log10(value), unit);
  }

  static LogQuantity meters(double v) { return from_linear(v, Unit::meter()); }
  static LogQuantity gev(double v) { return from_linear(v, Unit::gev()); }
  static LogQuantity scalar(double v) { return from_linear(v, Unit::dimensionless()); }

  double log10() const { return log10_; }
  Unit unit() const { return unit_; }

  double to_linear() const {
    if (std::abs(log10_) > kLinearLimit) {
      throw RangeError("LogQuantity: |log10| = " + std::to_string(std::abs(log10_)) +
                       " exceeds linear conversion limit");
    }
    return std::pow(10.0, log10_);
  }

  /// Linear value in the given unit; throws UnitError on mismatch.
  double in(Unit expected) const {
    require_unit(expected, "in");
    return to_linear();
  }

  LogQuantity operator*(const LogQuantity& o) const {
    return LogQuantity(log10_ + o.log10_, unit_ * o.unit_);
  }
  LogQuantity operator/(const LogQuantity& o) const {
    return LogQuantity(log10_ - o.log10_, unit_ / o.unit_);
  }

  /// Real power. The resulting unit exponents must be integral.
  LogQuantity pow(double p) const {
    const double le = unit_.length * p;
    const double ee = unit_.energy * p;
    if (std::abs(le - std::round(le)) > 1e-12 || std::abs(ee - std::round(ee)) > 1e-12) {
      throw UnitError("LogQuantity::pow: fractional power of unit " + unit_.name());
    }
    return LogQuantity(log10_ * p, Unit{static_cast<int>(std::lround(le)),
                                        static_cast<int>(std::lround(ee))});
  }

  LogQuantity sqrt() const { return pow(0.5); }

  /// Sum of two same-unit quantities, evaluated as log-sum-exp.
  LogQuantity operator+(const LogQuantity& o) const {
    require_unit(o.unit_, "operator+");
    const double hi = std::max(log10_, o.log10_);
    const double lo = std::min(log10_, o.log10_);
    return LogQuantity(hi + std::log10(1.0 + std::pow(10.0, lo - hi)), unit_);
  }

  std::partial_ordering operator<=>(const LogQuantity& o) const {
    require_unit(o.unit_, "comparison");
    return log10_ <=> o.log10_;
  }
  bool operator==(const LogQuantity& o) const {
    return unit_ == o.unit_ && log10_ == o.log10_;
  }

  void require_unit(Unit expected, const char* where) const {
    if (!(unit_ == expected)) {
      throw UnitError(std::string("LogQuantity::") + where + ": unit " + unit_.name() +
                      " where " + expected.name() + " expected");
    }
  }

 private:
  LogQuantity(double l, Unit u) : log10_(l), unit_(u) {}

  double log10_ = 0.0;
  Unit unit_{};
};

inline LogQuantity max(const LogQuantity& a, const LogQuantity& b) { return a < b ? b : a; }
inline LogQuantity min(const LogQuantity& a, const LogQuantity& b) { return b < a ? b : a; }

}  // namespace granular
