// Acceptance suite: one PASS/FAIL line per criterion; nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "granular/bounds.hpp"
#include "granular/montecarlo.hpp"
#include "granular/sweep.hpp"

using namespace granular;

namespace {

const auto& kC = PhysicalConstants::standard();
const DiscretenessModel kModel(LogQuantity::gev(1.0), 1.0, 0.5);

struct Outcome {
  bool pass;
  std::string detail;
};

bool within_factor(double value, double target, double factor) {
  return value >= target / factor && value <= target * factor;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

Outcome accuracy_fixed() {
  const auto t = accuracy_fixed_thresholds(1e-10);
  const double d = t.d_max.to_linear();
  const double dd = t.delta_d_max.to_linear();
  return {within_factor(d, 1e-15, 10.0) && within_factor(dd, 1e-25, 10.0),
          fmt("d_max=%.4g m (1e-15), delta_d_max=%.4g m (1e-25), factor 10", d, dd)};
}

Outcome precision_fixed() {
  const double d = precision_fixed_min_displacement(LogQuantity::meters(1e-12), kC.l_P).to_linear();
  return {within_factor(d, 1e11, 10.0), fmt("d_min=%.4g m (1e11), factor 10", d)};
}

Outcome fig1c_landmarks() {
  const CurveExtra extra;  // delta_d = 1e-15 m
  const double at_mu = curve_value(FigureId::fig1c, kModel, kModel.mu(), extra).to_linear();
  const double at_mp = curve_value(FigureId::fig1c, kModel, kC.m_P, extra).to_linear();
  // "a few hundred kilometers" read as 3e5 m.
  return {within_factor(at_mu, 3e5, 10.0) && within_factor(at_mp, 1e15, 10.0),
          fmt("m=mu: %.4g m (3e5), m=m_P: %.4g m (1e15), factor 10", at_mu, at_mp)};
}

Outcome fig4_headline() {
  const double v = min_displacement_coupled(kModel, electron_mass(), kC.m_P).to_linear();
  const auto s = generate_curve(FigureId::fig4, kModel, MassGrid{-6.0, 25.0, 400, {kC.m_P}});
  const auto best = std::min_element(s.points.begin(), s.points.end(), [](auto& a, auto& b) {
    return a.log10_value < b.log10_value;
  });
  const bool min_at_mp = best->log10_mass == kC.m_P.log10();
  return {within_factor(v, 1e-2, 10.0) && min_at_mp,
          fmt("d_min=%.4g m (1e-2), curve minimum at log10 M=%.6f (m_P %.6f)", v, best->log10_mass,
              kC.m_P.log10())};
}

Outcome key_condition_identity() {
  std::mt19937_64 gen(20240601);
  std::uniform_real_distribution<double> u(-6.0, kC.m_P.log10());
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto m = LogQuantity::from_log10(u(gen), Unit::gev());
    auto big = LogQuantity::from_log10(u(gen), Unit::gev());
    if (!(big < kC.m_P)) big = LogQuantity::from_log10(kC.m_P.log10() - 1e-9, Unit::gev());
    const double lhs =
        (min_displacement_independent(kModel, m) / min_displacement_coupled(kModel, m, big)).log10();
    const double rhs = amplification_ratio(kModel, m, big).log10();
    worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
  }
  return {worst <= 1e-12, fmt("max relative log10 mismatch %.3g over 1000 pairs (<= 1e-12)", worst)};
}

Outcome worst_accuracy_peak() {
  const auto masses = mass_grid(MassGrid{});
  std::size_t nearest = 0;
  for (std::size_t i = 1; i < masses.size(); ++i) {
    if (std::abs(masses[i].log10() - kC.m_P.log10()) < std::abs(masses[nearest].log10() - kC.m_P.log10())) {
      nearest = i;
    }
  }
  bool ok = true;
  std::string detail = "argmax index per mu:";
  for (double mu : {1e-3, 1.0, 1e3, 1e6}) {
    const DiscretenessModel model(LogQuantity::gev(mu), 1.0, 0.5);
    const auto s = generate_curve(FigureId::fig1b, model, MassGrid{});
    const auto best = std::max_element(s.points.begin(), s.points.end(), [](auto& a, auto& b) {
      return a.log10_value < b.log10_value;
    });
    const auto idx = static_cast<std::size_t>(best - s.points.begin());
    ok = ok && idx == nearest;
    detail += " " + std::to_string(idx);
  }
  return {ok, detail + " (nearest m_P: " + std::to_string(nearest) + ")"};
}

ExperimentSpec independent_spec() {
  ExperimentSpec s;
  s.mode = SimMode::independent;
  s.d_mean = 1e4;
  s.grid_particle = 1.0;
  s.trials = 100000;
  s.seed = 42;
  return s;
}

ExperimentSpec coupled_spec() {
  ExperimentSpec s;
  s.mode = SimMode::coupled;
  s.d_mean = 1e10;
  s.grid_object = 1.0;
  s.mass_ratio = 1e6;
  s.trials = 100000;
  s.seed = 42;
  return s;
}

template <class F>
double seconds(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome independent_mc() {
  SimResult r;
  const double t = seconds([&] { r = simulate(independent_spec()); });
  return {r.rel_deviation < 0.01 && t < 5.0 && r.predicted_std == 100.0,
          fmt("std=%.5g vs 100, rel_dev=%.3g (< 0.01), %.2f s (< 5 s)", r.empirical_std,
              r.rel_deviation, t)};
}

Outcome coupled_mc() {
  SimResult r;
  const double t = seconds([&] { r = simulate(coupled_spec()); });
  return {r.rel_deviation < 0.02 && r.dipole_residual_max == 0.0 && t < 5.0 && r.predicted_std == 1e8,
          fmt("std=%.5g vs 1e8, rel_dev=%.3g (< 0.02), residual=%g, %.2f s", r.empirical_std,
              r.rel_deviation, r.dipole_residual_max, t)};
}

Outcome sampler_fidelity() {
  bool ok = true;
  double worst_z = 0.0;
  const double t = seconds([&] {
    const int n = 1000000;
    const double lambda = 4.0;
    Xoshiro256 rng(4);
    std::vector<int> counts(13, 0);
    for (int i = 0; i < n; ++i) {
      const auto k = sample_poisson(lambda, rng);
      if (k <= 12) ++counts[k];
    }
    for (int k = 0; k <= 12; ++k) {
      const double p = std::exp(-lambda + k * std::log(lambda) - std::lgamma(k + 1.0));
      const double z = std::abs(counts[k] - n * p) / std::sqrt(n * p * (1 - p));
      worst_z = std::max(worst_z, z);
    }
    ok = worst_z <= 5.0;
  });
  auto exact = independent_spec();
  exact.d_mean = 1e6;
  exact.sampler = Sampler::exact;
  auto approx = exact;
  approx.sampler = Sampler::normal_approx;  // common seed 42
  SimResult a, b;
  const double t2 = seconds([&] {
    a = simulate(exact);
    b = simulate(approx);
  });
  const double dm = std::abs(a.empirical_mean / b.empirical_mean - 1.0);
  const double ds = std::abs(a.empirical_std / b.empirical_std - 1.0);
  ok = ok && dm < 2e-3 && ds < 2e-3 && t + t2 < 30.0;
  return {ok, fmt("pmf max z=%.2f (<= 5); exact vs normal: mean %.2g, std %.2g (< 0.002); %.2f s",
                  worst_z, dm, ds, t + t2)};
}

Outcome determinism() {
  bool ok = true;
  for (const auto& spec : {independent_spec(), coupled_spec()}) {
    const auto ref = to_json(simulate(spec, {1})).dump();
    ok = ok && to_json(simulate(spec, {1})).dump() == ref;
    for (unsigned w : {2u, 4u, 7u, 0u}) ok = ok && to_json(simulate(spec, {w})).dump() == ref;
  }
  return {ok, "criteria 7-8 JSON identical across repeats and workers {1,2,4,7,all}"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"1 accuracy-fixed thresholds", accuracy_fixed},
      {"2 precision-fixed minimum displacement", precision_fixed},
      {"3 fig1c landmarks", fig1c_landmarks},
      {"4 fig4 headline and minimum at m_P", fig4_headline},
      {"5 key-condition identity", key_condition_identity},
      {"6 worst-accuracy peak at m_P", worst_accuracy_peak},
      {"7 independent Monte Carlo", independent_mc},
      {"8 coupled Monte Carlo", coupled_mc},
      {"9 sampler fidelity", sampler_fidelity},
      {"10 determinism", determinism},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("[%s] %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
