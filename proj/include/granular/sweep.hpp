#pragma once

/**
 * @file sweep.hpp
 * @brief Bound curves over logarithmic mass grids, with CSV/JSON emission.
 *
 * Masses and values are stored as log10. CSV rows carry
 *   figure_id,mu_gev,alpha,beta,mass_gev,value,unit,floor
 * where mu_gev, mass_gev, value and floor are log10 magnitudes printed with
 * 12 significant digits; floor is empty for figures without a gray region.
 */

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "granular/bounds.hpp"

namespace granular {

enum class FigureId { fig1a, fig1b, fig1c, fig1d, fig4 };

inline std::string_view to_string(FigureId id) {
  switch (id) {
    case FigureId::fig1a: return "fig1a";
    case FigureId::fig1b: return "fig1b";
    case FigureId::fig1c: return "fig1c";
    case FigureId::fig1d: return "fig1d";
    case FigureId::fig4: return "fig4";
  }
  return "fig1a";
}

/// Accepts "1a" as well as "fig1a".
inline std::optional<FigureId> parse_figure_id(std::string_view s) {
  if (s.substr(0, 3) == "fig") s.remove_prefix(3);
  if (s == "1a") return FigureId::fig1a;
  if (s == "1b") return FigureId::fig1b;
  if (s == "1c") return FigureId::fig1c;
  if (s == "1d") return FigureId::fig1d;
  if (s == "4") return FigureId::fig4;
  return std::nullopt;
}

struct MassGrid {
  double log10_min = -6.0;
  double log10_max = 25.0;
  std::size_t points = 400;
  std::vector<LogQuantity> landmarks;  // merged into the grid when present
};

struct CurveExtra {
  LogQuantity precision = LogQuantity::meters(1e-15);  // fig1c, fig1d
  LogQuantity probe_mass = electron_mass();            // fig4
};

struct CurvePoint {
  double log10_mass;
  double log10_value;
  std::string unit;  // "meter" | "dimensionless"
};

struct FloorPoint {
  double log10_mass;
  double log10_floor;
};

struct CurveSeries {
  FigureId figure_id = FigureId::fig1a;
  LogQuantity mu = LogQuantity::gev(1.0);
  double alpha = 1.0;
  double beta = 0.5;
  std::vector<CurvePoint> points;
  std::optional<std::vector<FloorPoint>> floor;
};

/// Strictly increasing masses in GeV.
inline std::vector<LogQuantity> mass_grid(const MassGrid& grid) {
  if (grid.points == 0) throw DomainError("mass grid: at least one point required");
  if (!(grid.log10_max >= grid.log10_min)) throw DomainError("mass grid: max < min");
  std::vector<double> logs;
  logs.reserve(grid.points + grid.landmarks.size());
  if (grid.points == 1) {
    logs.push_back(grid.log10_min);
  } else {
    const double step = (grid.log10_max - grid.log10_min) / static_cast<double>(grid.points - 1);
    for (std::size_t i = 0; i < grid.points; ++i) {
      logs.push_back(i + 1 == grid.points ? grid.log10_max
                                          : grid.log10_min + step * static_cast<double>(i));
    }
  }
  for (const auto& lm : grid.landmarks) {
    lm.require_unit(Unit::gev(), "mass grid landmark");
    logs.push_back(lm.log10());
  }
  std::sort(logs.begin(), logs.end());
  logs.erase(std::unique(logs.begin(), logs.end(),
                         [](double a, double b) { return std::abs(a - b) < 1e-12; }),
             logs.end());
  std::vector<LogQuantity> out;
  out.reserve(logs.size());
  for (double l : logs) out.push_back(LogQuantity::from_log10(l, Unit::gev()));
  return out;
}

/// Value of one figure's curve at mass m (M for fig4).
inline LogQuantity curve_value(FigureId id, const DiscretenessModel& model, const LogQuantity& m,
                               const CurveExtra& extra = {}) {
  switch (id) {
    case FigureId::fig1a: return min_displacement_independent(model, m);
    case FigureId::fig1b: return worst_accuracy_independent(model, m);
    case FigureId::fig1c: return precision_fixed_min_displacement(extra.precision, model.l_eff(m));
    case FigureId::fig1d:
      // delta_d / d_min with d_min = delta_d^2 / l_eff
      return extra.precision / precision_fixed_min_displacement(extra.precision, model.l_eff(m));
    case FigureId::fig4: return min_displacement_coupled(model, extra.probe_mass, m);
  }
  throw DomainError("curve_value: unknown figure id");
}

inline std::optional<LogQuantity> curve_floor(FigureId id, const DiscretenessModel& model,
                                              const LogQuantity& m, const CurveExtra& extra = {}) {
  switch (id) {
    case FigureId::fig1a:
    case FigureId::fig1c: return displacement_floor(model, m);
    case FigureId::fig4: return compton(extra.probe_mass, model.constants());
    default: return std::nullopt;
  }
}

inline CurveSeries generate_curve(FigureId id, const DiscretenessModel& model,
                                  const MassGrid& grid, const CurveExtra& extra = {}) {
  CurveSeries s;
  s.figure_id = id;
  s.mu = model.mu();
  s.alpha = model.alpha();
  s.beta = model.beta();
  const auto masses = mass_grid(grid);
  s.points.reserve(masses.size());
  std::vector<FloorPoint> floor;
  for (const auto& m : masses) {
    const auto v = curve_value(id, model, m, extra);
    s.points.push_back({m.log10(), v.log10(), v.unit().name()});
    if (auto f = curve_floor(id, model, m, extra)) floor.push_back({m.log10(), f->log10()});
  }
  if (curve_floor(id, model, masses.front(), extra)) s.floor = std::move(floor);
  return s;
}

// ---------------------------------------------------------------------------
// Serialization

inline constexpr std::string_view kCsvHeader = "figure_id,mu_gev,alpha,beta,mass_gev,value,unit,floor";

inline std::string format_g12(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline void emit_csv(const CurveSeries& s, std::ostream& out) {
  out << kCsvHeader << '\n';
  const std::string prefix = std::string(to_string(s.figure_id)) + ',' + format_g12(s.mu.log10()) +
                             ',' + format_g12(s.alpha) + ',' + format_g12(s.beta) + ',';
  for (std::size_t i = 0; i < s.points.size(); ++i) {
    const auto& p = s.points[i];
    out << prefix << format_g12(p.log10_mass) << ',' << format_g12(p.log10_value) << ','
        << p.unit << ',';
    if (s.floor) out << format_g12((*s.floor)[i].log10_floor);
    out << '\n';
  }
}

inline nlohmann::ordered_json to_json(const CurveSeries& s) {
  nlohmann::ordered_json j;
  j["figure_id"] = std::string(to_string(s.figure_id));
  j["mu_gev"] = s.mu.log10();
  j["alpha"] = s.alpha;
  j["beta"] = s.beta;
  auto pts = nlohmann::ordered_json::array();
  for (const auto& p : s.points) {
    pts.push_back({{"mass_gev", p.log10_mass}, {"value", p.log10_value}, {"unit", p.unit}});
  }
  j["points"] = std::move(pts);
  if (s.floor) {
    auto fl = nlohmann::ordered_json::array();
    for (const auto& f : *s.floor) fl.push_back({{"mass_gev", f.log10_mass}, {"floor_value", f.log10_floor}});
    j["floor"] = std::move(fl);
  } else {
    j["floor"] = nullptr;
  }
  return j;
}

enum class SeriesFormat { csv, json };

inline void emit_series(const CurveSeries& s, SeriesFormat format, std::ostream& sink) {
  if (format == SeriesFormat::csv) {
    emit_csv(s, sink);
  } else {
    sink << to_json(s).dump(2) << '\n';
  }
  if (!sink) throw std::runtime_error("emit_series: write to sink failed");
}

inline CurveSeries series_from_json(const nlohmann::ordered_json& j) {
  CurveSeries s;
  const auto id = parse_figure_id(j.at("figure_id").get<std::string>());
  if (!id) throw DomainError("series_from_json: bad figure_id");
  s.figure_id = *id;
  s.mu = LogQuantity::from_log10(j.at("mu_gev").get<double>(), Unit::gev());
  s.alpha = j.at("alpha").get<double>();
  s.beta = j.at("beta").get<double>();
  for (const auto& p : j.at("points")) {
    s.points.push_back({p.at("mass_gev").get<double>(), p.at("value").get<double>(),
                        p.at("unit").get<std::string>()});
  }
  if (!j.at("floor").is_null()) {
    std::vector<FloorPoint> fl;
    for (const auto& f : j.at("floor")) {
      fl.push_back({f.at("mass_gev").get<double>(), f.at("floor_value").get<double>()});
    }
    s.floor = std::move(fl);
  }
  return s;
}

/// Parses CSV written by emit_csv. A header-only input yields an empty
/// default series.
inline CurveSeries parse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw DomainError("parse_csv: missing or unexpected header");
  }
  CurveSeries s;
  std::vector<FloorPoint> floor;
  bool any_floor = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string col;
    while (std::getline(ss, col, ',')) cols.push_back(col);
    if (cols.size() == 7 && line.back() == ',') cols.emplace_back();
    if (cols.size() != 8) throw DomainError("parse_csv: expected 8 columns: " + line);
    const auto id = parse_figure_id(cols[0]);
    if (!id) throw DomainError("parse_csv: bad figure_id " + cols[0]);
    s.figure_id = *id;
    s.mu = LogQuantity::from_log10(std::stod(cols[1]), Unit::gev());
    s.alpha = std::stod(cols[2]);
    s.beta = std::stod(cols[3]);
    const double mass = std::stod(cols[4]);
    s.points.push_back({mass, std::stod(cols[5]), cols[6]});
    if (!cols[7].empty()) {
      any_floor = true;
      floor.push_back({mass, std::stod(cols[7])});
    }
  }
  if (any_floor) {
    if (floor.size() != s.points.size()) throw DomainError("parse_csv: partial floor column");
    s.floor = std::move(floor);
  }
  return s;
}

}  // namespace granular
