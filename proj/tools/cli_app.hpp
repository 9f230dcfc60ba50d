#pragma once

// Command-line front end: `bounds`, `simulate` and `figure` subcommands.
//
// Exit status: 0 success, 2 usage error, 3 domain/guard/output error.
// A JSON config file (--config FILE) may supply any long flag by name
// without the leading dashes; flags given on the command line win.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "granular/bounds.hpp"
#include "granular/montecarlo.hpp"
#include "granular/sweep.hpp"

namespace granular::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDomain = 3;
inline constexpr const char* kOutDirEnv = "GRANULAR_OUT_DIR";

namespace detail {

using ojson = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OutputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline bool has_flag(const std::vector<std::string>& args, const std::string& flag) {
  for (const auto& a : args) {
    if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
  }
  return false;
}

// Removes --config FILE from args and appends any flags the file supplies.
inline void apply_config(std::vector<std::string>& args) {
  std::optional<std::string> path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config requires a file argument");
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                 args.begin() + static_cast<std::ptrdiff_t>(i + 2));
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (!path) return;
  std::ifstream in(*path);
  if (!in) throw UsageError("cannot read config file " + *path);
  nlohmann::json cfg;
  try {
    in >> cfg;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("config file " + *path + ": " + e.what());
  }
  if (!cfg.is_object()) throw UsageError("config file must hold a JSON object");
  for (const auto& [key, value] : cfg.items()) {
    const std::string flag = "--" + key;
    if (has_flag(args, flag)) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back(flag);
    } else if (value.is_string()) {
      args.push_back(flag);
      args.push_back(value.get<std::string>());
    } else if (value.is_array()) {
      std::string joined;
      for (const auto& v : value) {
        if (!joined.empty()) joined += ',';
        joined += v.is_string() ? v.get<std::string>() : v.dump();
      }
      args.push_back(flag);
      args.push_back(joined);
    } else {
      args.push_back(flag);
      args.push_back(value.dump());
    }
  }
}

inline std::string fmt6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct ModelArgs {
  double mu_gev = 1.0;
  double alpha = 1.0;
  double beta = 0.5;

  void add_to(CLI::App& app) {
    app.add_option("--mu", mu_gev, "threshold mass mu [GeV]")->check(CLI::PositiveNumber);
    app.add_option("--alpha", alpha, "degrees-of-freedom exponent")->check(CLI::PositiveNumber);
    app.add_option("--beta", beta, "grid-suppression exponent")->check(CLI::NonNegativeNumber);
  }

  DiscretenessModel build() const { return {LogQuantity::gev(mu_gev), alpha, beta}; }
};

inline ojson model_json(const DiscretenessModel& model) {
  return {{"mu_gev", model.mu().to_linear()}, {"alpha", model.alpha()}, {"beta", model.beta()}};
}

struct BoundsArgs {
  ModelArgs model;
  double mass = 0.0;
  std::optional<double> big_mass;
  std::optional<double> displacement;
  std::optional<double> sigma_m;
  double margin = 1.0;
  std::string format = "text";
};

struct Verdict {
  std::string name;
  double value;
  double threshold;
  bool pass;
};

inline Verdict make_verdict(std::string name, const LogQuantity& value,
                            const LogQuantity& threshold, double margin) {
  const bool pass = value >= threshold * LogQuantity::scalar(margin);
  return {std::move(name), value.to_linear(), threshold.to_linear() * margin, pass};
}

inline int run_bounds(const BoundsArgs& a, std::ostream& out) {
  const auto model = a.model.build();
  const auto& c = model.constants();
  const auto m = LogQuantity::gev(a.mass);

  ojson report;
  std::vector<Verdict> verdicts;
  report["model"] = model_json(model);
  report["margin"] = a.margin;

  std::optional<LogQuantity> sigma;
  if (a.sigma_m) sigma = LogQuantity::meters(*a.sigma_m);

  if (!a.big_mass) {
    const auto b = independent_bounds(model, m);
    report["kind"] = "independent";
    report["mass_gev"] = m.to_linear();
    report["compton_m"] = compton(m, c).to_linear();
    report["l_eff_m"] = model.l_eff(m).to_linear();
    report["dof"] = model.dof(m).to_linear();
    report["min_displacement_m"] = b.min_displacement.to_linear();
    report["worst_accuracy"] = b.worst_accuracy.to_linear();
    report["floor_m"] = b.floor.to_linear();
    if (a.displacement) {
      const auto d = LogQuantity::meters(*a.displacement);
      const auto spread = poisson_std(d, model.l_eff(m));
      report["displacement_m"] = d.to_linear();
      report["delta_d_m"] = spread.to_linear();
      verdicts.push_back(make_verdict("displacement_bound", d, b.min_displacement, a.margin));
      auto floor = b.floor;
      if (sigma) floor = max(floor, *sigma);
      verdicts.push_back(make_verdict("variance_floor", spread, floor, a.margin));
    }
  } else {
    const auto big_m = LogQuantity::gev(*a.big_mass);
    const auto b = coupled_bounds(model, m, big_m);
    report["kind"] = "coupled";
    report["mass_gev"] = m.to_linear();
    report["big_mass_gev"] = big_m.to_linear();
    report["compton_m"] = b.floor.to_linear();
    report["l_eff_m"] = model.l_eff(m).to_linear();
    report["l_eff_big_m"] = model.l_eff(big_m).to_linear();
    report["min_displacement_m"] = b.min_displacement.to_linear();
    report["independent_min_displacement_m"] = min_displacement_independent(model, m).to_linear();
    report["amplification"] = b.amplification.to_linear();
    report["floor_m"] = b.floor.to_linear();
    if (a.displacement) {
      const auto d = LogQuantity::meters(*a.displacement);
      const auto spread = b.delta_d_at(model, d);
      const auto object_spread = spread * m / big_m;
      report["displacement_m"] = d.to_linear();
      report["delta_d_m"] = spread.to_linear();
      report["object_delta_d_m"] = object_spread.to_linear();
      verdicts.push_back(make_verdict("displacement_bound", d, b.min_displacement, a.margin));
      auto floor = b.floor;
      if (sigma) floor = max(floor, *sigma);
      verdicts.push_back(make_verdict("transferred_variance", spread, floor, a.margin));
      verdicts.push_back(make_verdict("object_variance", object_spread, c.l_P, a.margin));
    }
  }
  if (sigma) report["sigma_m"] = sigma->to_linear();

  bool all_pass = true;
  auto vj = ojson::array();
  for (const auto& v : verdicts) {
    all_pass = all_pass && v.pass;
    vj.push_back({{"check", v.name},
                  {"value", v.value},
                  {"threshold", v.threshold},
                  {"result", v.pass ? "PASS" : "FAIL"}});
  }
  if (!verdicts.empty()) {
    report["verdicts"] = std::move(vj);
    report["verdict"] = all_pass ? "PASS" : "FAIL";
  }

  if (a.format == "json") {
    out << report.dump(2) << '\n';
    return kExitOk;
  }
  for (const auto& [key, value] : report.items()) {
    if (key == "verdicts" || key == "model") continue;
    out << key << ": "
        << (value.is_number_float() ? fmt6(value.get<double>())
            : value.is_string()     ? value.get<std::string>()
                                    : value.dump())
        << '\n';
  }
  out << "model: mu=" << fmt6(model.mu().to_linear()) << " GeV alpha=" << fmt6(model.alpha())
      << " beta=" << fmt6(model.beta()) << '\n';
  for (const auto& v : verdicts) {
    out << "verdict " << v.name << ": " << (v.pass ? "PASS" : "FAIL") << " (" << fmt6(v.value)
        << " vs " << fmt6(v.threshold) << ")\n";
  }
  return kExitOk;
}

struct SimulateArgs {
  std::string mode = "independent";
  double d_mean = 0.0;
  double grid = 1.0;
  std::optional<double> grid_object;
  double mass_ratio = 1.0;
  std::uint64_t trials = 1000;
  std::uint64_t seed = 0;
  std::string sampler = "auto";
  bool snap_particle = false;
  unsigned workers = 1;
  std::string out_path;
};

inline ExperimentSpec to_spec(const SimulateArgs& a) {
  ExperimentSpec s;
  s.mode = a.mode == "coupled" ? SimMode::coupled : SimMode::independent;
  s.d_mean = a.d_mean;
  s.grid_particle = a.grid;
  s.grid_object = a.grid_object.value_or(a.grid);
  s.mass_ratio = a.mass_ratio;
  s.trials = a.trials;
  s.seed = a.seed;
  s.sampler = a.sampler == "exact"           ? Sampler::exact
              : a.sampler == "normal_approx" ? Sampler::normal_approx
                                             : Sampler::auto_select;
  s.snap_particle = a.snap_particle;
  return s;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw OutputError("cannot open " + path + " for writing");
  f << content;
  if (!f) throw OutputError("write to " + path + " failed");
}

inline int run_simulate(const SimulateArgs& a, std::ostream& out) {
  const auto result = simulate(to_spec(a), RunOptions{a.workers});
  const std::string text = to_json(result).dump(2) + "\n";
  if (!a.out_path.empty()) write_file(a.out_path, text);
  out << text;
  return kExitOk;
}

struct FigureArgs {
  ModelArgs model;
  std::string id;
  std::vector<double> mu_list{1e-3, 1.0, 1e3, 1e6};
  double precision = 1e-15;
  double probe_mass = codata::electron_mass_gev;
  std::size_t grid_points = 400;
  double mass_min = 1e-6;
  double mass_max = 1e25;
  bool no_landmarks = false;
  std::string out_dir;
  std::string format = "csv";
};

inline bool is_accuracy_curve(FigureId id) {
  return id == FigureId::fig1b || id == FigureId::fig1d;
}

inline int run_figure(const FigureArgs& a, std::ostream& out) {
  const auto id = parse_figure_id(a.id);
  if (!id) throw UsageError("invalid --id " + a.id);
  std::string dir = a.out_dir;
  if (dir.empty()) {
    const char* env = std::getenv(kOutDirEnv);
    dir = env ? env : ".";
  }
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw OutputError("cannot create output directory " + dir + ": " + ec.message());

  CurveExtra extra;
  extra.precision = LogQuantity::meters(a.precision);
  extra.probe_mass = LogQuantity::gev(a.probe_mass);
  const auto fmt = a.format == "json" ? SeriesFormat::json : SeriesFormat::csv;
  const bool accuracy = is_accuracy_curve(*id);

  out << "figure  mu_gev        value@mu      value@m_P     " << (accuracy ? "max" : "min")
      << "_at_mass    " << (accuracy ? "max" : "min") << "_value     file\n";
  for (double mu : a.mu_list) {
    if (!(mu > 0.0)) throw UsageError("--mu-list entries must be > 0");
    const DiscretenessModel model(LogQuantity::gev(mu), a.model.alpha, a.model.beta);
    MassGrid grid;
    grid.log10_min = std::log10(a.mass_min);
    grid.log10_max = std::log10(a.mass_max);
    grid.points = a.grid_points;
    if (!a.no_landmarks) grid.landmarks = {model.mu(), model.constants().m_P};
    const auto series = generate_curve(*id, model, grid, extra);

    const std::string name = std::string(to_string(*id)) + "_mu" + format_g12(mu) + "GeV." +
                             (fmt == SeriesFormat::json ? "json" : "csv");
    const std::string path = (std::filesystem::path(dir) / name).string();
    std::ostringstream buf;
    emit_series(series, fmt, buf);
    write_file(path, buf.str());

    const auto at_mu = curve_value(*id, model, model.mu(), extra);
    const auto at_mp = curve_value(*id, model, model.constants().m_P, extra);
    const auto ext = accuracy ? std::max_element(series.points.begin(), series.points.end(),
                                                 [](const auto& x, const auto& y) {
                                                   return x.log10_value < y.log10_value;
                                                 })
                              : std::min_element(series.points.begin(), series.points.end(),
                                                 [](const auto& x, const auto& y) {
                                                   return x.log10_value < y.log10_value;
                                                 });
    char line[256];
    std::snprintf(line, sizeof line, "%-7s %-13.6g %-13.6g %-13.6g %-15.6g %-14.6g ",
                  std::string(to_string(*id)).c_str(), mu, std::pow(10.0, at_mu.log10()),
                  std::pow(10.0, at_mp.log10()), std::pow(10.0, ext->log10_mass),
                  std::pow(10.0, ext->log10_value));
    out << line << path << '\n';
  }
  return kExitOk;
}

inline void print_error(std::ostream& err, const char* kind, const std::string& message) {
  err << ojson{{"error", kind}, {"message", message}}.dump() << '\n';
}

}  // namespace detail

/// Runs one subcommand. args excludes the program name.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  using namespace detail;
  CLI::App app{"Poisson displacements on a discrete grid: bounds, simulation, curves",
               "granular"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "granular 0.1.0");

  BoundsArgs bounds;
  auto* cmd_bounds = app.add_subcommand("bounds", "detectability thresholds for a mass or mass pair");
  bounds.model.add_to(*cmd_bounds);
  cmd_bounds->add_option("--mass", bounds.mass, "particle mass m [GeV]")
      ->required()
      ->check(CLI::PositiveNumber);
  cmd_bounds->add_option("--big-mass", bounds.big_mass, "object mass M [GeV] (coupled bounds)")
      ->check(CLI::PositiveNumber);
  cmd_bounds->add_option("--displacement", bounds.displacement, "particle displacement d [m]")
      ->check(CLI::PositiveNumber);
  cmd_bounds->add_option("--sigma-m", bounds.sigma_m, "state uncertainty floor sigma_m [m]")
      ->check(CLI::PositiveNumber);
  cmd_bounds->add_option("--margin", bounds.margin, "safety factor on every threshold")
      ->check(CLI::Range(1.0, std::numeric_limits<double>::max()));
  cmd_bounds->add_option("--format", bounds.format)->check(CLI::IsMember({"text", "json"}));

  SimulateArgs sim;
  auto* cmd_sim = app.add_subcommand("simulate", "Monte Carlo verification of the spread law");
  cmd_sim->add_option("--mode", sim.mode)->check(CLI::IsMember({"independent", "coupled"}));
  cmd_sim->add_option("--d-mean", sim.d_mean, "mean particle displacement")
      ->required()
      ->check(CLI::PositiveNumber);
  cmd_sim->add_option("--grid", sim.grid, "particle grid l_eff(m)")->check(CLI::PositiveNumber);
  cmd_sim->add_option("--grid-object", sim.grid_object, "object grid l_eff(M); defaults to --grid")
      ->check(CLI::PositiveNumber);
  cmd_sim->add_option("--mass-ratio", sim.mass_ratio, "M / m")->check(CLI::PositiveNumber);
  cmd_sim->add_option("--trials", sim.trials)->check(CLI::Range(std::uint64_t{1}, UINT64_MAX));
  cmd_sim->add_option("--seed", sim.seed);
  cmd_sim->add_option("--sampler", sim.sampler)
      ->check(CLI::IsMember({"exact", "normal_approx", "auto"}));
  cmd_sim->add_flag("--snap-particle", sim.snap_particle,
                    "quantize the derived particle displacement to --grid");
  cmd_sim->add_option("--workers", sim.workers, "worker threads (0 = all cores)");
  cmd_sim->add_option("--out", sim.out_path, "also write the JSON result to this file");

  FigureArgs fig;
  auto* cmd_fig = app.add_subcommand("figure", "bound curves over a mass grid");
  fig.model.add_to(*cmd_fig);
  cmd_fig->add_option("--id", fig.id, "1a, 1b, 1c, 1d or 4")
      ->required()
      ->check(CLI::IsMember({"1a", "1b", "1c", "1d", "4", "fig1a", "fig1b", "fig1c", "fig1d",
                             "fig4"}));
  cmd_fig->add_option("--mu-list", fig.mu_list, "threshold masses [GeV]")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  cmd_fig->add_option("--precision", fig.precision, "fixed precision delta_d for 1c/1d [m]")
      ->check(CLI::PositiveNumber);
  cmd_fig->add_option("--probe-mass", fig.probe_mass, "particle mass for figure 4 [GeV]")
      ->check(CLI::PositiveNumber);
  cmd_fig->add_option("--grid-points", fig.grid_points)->check(CLI::Range(1, 1000000));
  cmd_fig->add_option("--mass-min", fig.mass_min, "[GeV]")->check(CLI::PositiveNumber);
  cmd_fig->add_option("--mass-max", fig.mass_max, "[GeV]")->check(CLI::PositiveNumber);
  cmd_fig->add_flag("--no-landmarks", fig.no_landmarks, "do not insert mu and m_P into the grid");
  cmd_fig->add_option("--out", fig.out_dir, std::string("output directory (default $") +
                                                kOutDirEnv + " or .)");
  cmd_fig->add_option("--format", fig.format)->check(CLI::IsMember({"csv", "json"}));

  try {
    apply_config(args);
    std::vector<const char*> argv{"granular"};
    for (const auto& a : args) argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << "granular 0.1.0\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*cmd_bounds) return run_bounds(bounds, out);
    if (*cmd_sim) return run_simulate(sim, out);
    if (*cmd_fig) return run_figure(fig, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const GuardError& e) {
    print_error(err, "guard", e.what());
    return kExitDomain;
  } catch (const std::domain_error& e) {
    print_error(err, "domain", e.what());
    return kExitDomain;
  } catch (const std::range_error& e) {
    print_error(err, "range", e.what());
    return kExitDomain;
  } catch (const OutputError& e) {
    print_error(err, "output", e.what());
    return kExitDomain;
  }
  return kExitUsage;
}

}  // namespace granular::cli
