#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "casikit/constants.hpp"
#include "casikit/numerics/rng.hpp"
#include "casikit/screening.hpp"
#include "casikit/simkit.hpp"

using namespace casikit;
using namespace casikit::simkit;
using std::numbers::pi;

namespace {

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    g[static_cast<std::size_t>(i)] = lo * std::pow(hi / lo, i / (n - 1.0));
  return g;
}

std::vector<double> lin_grid(double lo, double hi, int n) {
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    g[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1.0);
  return g;
}

ExperimentConfig base_config() {
  ExperimentConfig c;
  c.R = 1e-4;
  c.T = 0.0;
  c.plate_model = permittivity::perfect_conductor();
  c.sphere_model = permittivity::perfect_conductor();
  c.contact = {2e-3, -5e-3};
  c.v1 = 0.03;
  c.v_rms = 0.01;
  c.d0 = 1.5e-7;
  c.z_grid = log_grid(1e-6, 2e-5, 12);
  c.v_sweep = lin_grid(-0.25, 0.25, 11);
  c.sigma_f = 0.0;
  c.seed = 42;
  return c;
}

}  // namespace

TEST_CASE("dataset generation is deterministic and sorted") {
  auto cfg = base_config();
  cfg.sigma_f = 1e-14;
  const auto d1 = simulate_dataset(cfg);
  const auto d2 = simulate_dataset(cfg);
  REQUIRE(d1.records.size() == 12 * 11);
  CHECK(d1.config_hash == d2.config_hash);
  for (std::size_t i = 0; i < d1.records.size(); ++i) {
    CHECK(d1.records[i].f == d2.records[i].f);  // bit-identical
    if (i > 0) {
      const auto& a = d1.records[i - 1];
      const auto& b = d1.records[i];
      CHECK((a.z < b.z || (a.z == b.z && a.v < b.v)));
    }
  }
  // different seed, different noise, same hash inputs except seed
  auto cfg2 = cfg;
  cfg2.seed = 43;
  const auto d3 = simulate_dataset(cfg2);
  CHECK(d3.records[0].f != d1.records[0].f);
}

TEST_CASE("noise-free composition matches the closed-form model") {
  auto cfg = base_config();
  cfg.contact = {0.0, 0.0};
  cfg.v1 = 0.0;
  cfg.v_rms = 0.0;
  const auto ds = simulate_dataset(cfg);
  for (const auto& r : ds.records) {
    const double d = r.z + cfg.d0;
    const double f_el = pi * constants::eps0 * cfg.R * r.v * r.v / d;
    const double f_cas =
        pi * pi * pi * constants::hbar * constants::c * cfg.R / (360.0 * d * d * d);
    // engine quadrature tolerance dominates the comparison
    CHECK(r.f == doctest::Approx(f_el + f_cas).epsilon(1e-4));
  }
}

TEST_CASE("noise spread matches sigma_F") {
  auto cfg = base_config();
  cfg.z_grid = log_grid(1e-6, 2e-5, 6);
  cfg.v_sweep = lin_grid(-0.25, 0.25, 11);
  cfg.sigma_f = 1e-13;
  const auto noisy = simulate_dataset(cfg);
  auto quiet = cfg;
  quiet.sigma_f = 0.0;
  const auto clean = simulate_dataset(quiet);
  double s2 = 0.0;
  for (std::size_t i = 0; i < noisy.records.size(); ++i) {
    const double r = noisy.records[i].f - clean.records[i].f;
    s2 += r * r;
  }
  const double rms = std::sqrt(s2 / static_cast<double>(noisy.records.size()));
  CHECK(rms == doctest::Approx(cfg.sigma_f).epsilon(0.12));
}

TEST_CASE("config validation") {
  auto cfg = base_config();
  cfg.z_grid = {1e-6, -2e-7};
  CHECK_THROWS_AS(simulate_dataset(cfg), ConfigError);
  cfg = base_config();
  cfg.v_sweep = {0.1, 0.2, 0.3, 0.4, 0.5};  // no negative values
  CHECK_THROWS_AS(simulate_dataset(cfg), ConfigError);
  cfg = base_config();
  cfg.v_sweep = {-0.1, 0.1, 0.2};  // too few
  CHECK_THROWS_AS(simulate_dataset(cfg), ConfigError);
  cfg = base_config();
  cfg.patch_spec = patches::top_hat(0.01, 1e-6);
  CHECK_THROWS_AS(simulate_dataset(cfg), ConfigError);  // v_rms must be zero with patches
  cfg.v_rms = 0.0;
  CHECK_NOTHROW(simulate_dataset(cfg));
}

TEST_CASE("voltage parabola fit") {
  // exact parabola recovers to 1e-12
  std::vector<Record> sweep;
  const double alpha = 2.5e-9, vm = -0.031, f0 = 4e-13;
  for (double v : lin_grid(-0.3, 0.3, 9))
    sweep.push_back({1e-6, v, alpha * (v - vm) * (v - vm) + f0, 0.0});
  const auto fit = fit_voltage_parabola(sweep);
  CHECK(fit.alpha == doctest::Approx(alpha).epsilon(1e-12));
  CHECK(fit.v_m == doctest::Approx(vm).epsilon(1e-12));
  CHECK(fit.f0 == doctest::Approx(f0).epsilon(1e-9));

  // symmetric data has no asymmetry
  std::vector<Record> sym;
  for (double v : lin_grid(-0.3, 0.3, 9)) sym.push_back({1e-6, v, alpha * v * v, 0.0});
  CHECK(fit_voltage_parabola(sym).v_m == doctest::Approx(0.0).scale(1.0));

  // degenerate sweeps
  std::vector<Record> bad;
  for (double v : {0.1, 0.2, 0.3, 0.4, 0.5}) bad.push_back({1e-6, v, v * v, 0.0});
  CHECK_THROWS_AS(fit_voltage_parabola(bad), FitError);  // one sign only
  std::vector<Record> dup;
  for (int i = 0; i < 8; ++i) dup.push_back({1e-6, 0.1, 1.0, 0.0});
  CHECK_THROWS_AS(fit_voltage_parabola(dup), FitError);
}

TEST_CASE("voltage parabola coverage: reported sigma is honest") {
  // 1000 seeded trials; |vm_est - vm| < 1.96 sigma_est in >= 93%
  const double alpha = 2.5e-9, vm = -0.031, f0 = 4e-13, sigma = 2e-14;
  const auto vs = lin_grid(-0.3, 0.3, 11);
  int covered = 0;
  for (int t = 0; t < 1000; ++t) {
    std::vector<Record> sweep;
    for (std::size_t j = 0; j < vs.size(); ++j) {
      const double v = vs[j];
      const double noise = sigma * numerics::gaussian_at(
                                       555, static_cast<std::uint64_t>(t) * vs.size() + j);
      sweep.push_back({1e-6, v, alpha * (v - vm) * (v - vm) + f0 + noise, sigma});
    }
    const auto fit = fit_voltage_parabola(sweep);
    if (std::abs(fit.v_m - vm) <= 1.96 * fit.vm_sigma) ++covered;
  }
  CHECK(covered >= 930);
}

TEST_CASE("distance calibration") {
  const double R = 1e-4, d0 = 1.5e-7;
  std::vector<AlphaSample> samples;
  for (double z : log_grid(1e-6, 2e-5, 8))
    samples.push_back({z, pi * constants::eps0 * R / (z + d0), 0.0});
  const auto cal = calibrate_distance(samples, R);
  CHECK(cal.d0 == doctest::Approx(d0).epsilon(1e-10));
  // the slope pins pi eps0 R to 0.1%
  CHECK(cal.pi_eps0_r == doctest::Approx(pi * constants::eps0 * R).epsilon(1e-3));

  // invariance: shifting z while reducing d0 keeps the recovered geometry
  std::vector<AlphaSample> shifted;
  const double c = 5e-7;
  for (const auto& s : samples) shifted.push_back({s.z + c, s.alpha, 0.0});
  CHECK(calibrate_distance(shifted, R).d0 == doctest::Approx(d0 - c).epsilon(1e-8));

  std::vector<AlphaSample> bad{{1e-6, -1.0, 0.0}, {2e-6, 1.0, 0.0}, {3e-6, 1.0, 0.0}};
  CHECK_THROWS_AS(calibrate_distance(bad, R), DomainError);
  std::vector<AlphaSample> few(samples.begin(), samples.begin() + 2);
  CHECK_THROWS_AS(calibrate_distance(few, R), InsufficientDataError);
}

TEST_CASE("distance calibration sees the screening bias") {
  // alpha generated from the screened energy instead of the bare capacitor:
  // the fitted offset absorbs ~3 lambda/eps
  const double R = 1e-4, d0 = 0.0, lambda = 0.68e-6, eps = 16.0;
  std::vector<AlphaSample> samples;
  for (double z : log_grid(5e-6, 1e-4, 10)) {
    const double d = z + d0;
    // F = 2 pi R E(d) = alpha V^2 with E the screened energy at V = 1
    const double alpha = 2.0 * pi * R * screening::screened_energy_per_area(1.0, d, lambda, eps);
    samples.push_back({z, alpha, 0.0});
  }
  const auto cal = calibrate_distance(samples, R);
  CHECK(cal.d0 == doctest::Approx(-3.0 * lambda / eps).epsilon(0.05));
}

TEST_CASE("zero-noise analysis round trip is exact") {
  auto cfg = base_config();
  const auto ds = simulate_dataset(cfg);
  AnalysisOptions opt;
  opt.casimir = CasimirModelKind::IdealMirror;
  const auto res = run_analysis(ds, cfg.R, cfg.T, cfg.plate_model, cfg.sphere_model, opt);
  // generation uses the Lifshitz engine; the ideal-mirror subtraction differs
  // only by the engine quadrature tolerance, far below parameter scale
  CHECK(res.d0_est == doctest::Approx(cfg.d0).epsilon(1e-4));
  CHECK(res.log_fit.a == doctest::Approx(cfg.contact.a).epsilon(1e-3));
  CHECK(res.log_fit.b == doctest::Approx(cfg.contact.b).epsilon(1e-3));
  CHECK(res.residual_fit.v1 == doctest::Approx(cfg.v1).epsilon(1e-3));
  CHECK(res.residual_fit.v_rms == doctest::Approx(cfg.v_rms).epsilon(1e-3));
  REQUIRE(res.goodness.size() == 4);
  CHECK(res.goodness[0].stage == "parabola");
  CHECK(res.goodness[1].stage == "distance");
  CHECK(res.goodness[2].stage == "log_fit");
  CHECK(res.goodness[3].stage == "residual");
}

TEST_CASE("record order does not change fit outputs") {
  auto cfg = base_config();
  cfg.sigma_f = 5e-15;
  auto ds = simulate_dataset(cfg);
  AnalysisOptions opt;
  opt.casimir = CasimirModelKind::IdealMirror;
  const auto r1 = run_analysis(ds, cfg.R, cfg.T, cfg.plate_model, cfg.sphere_model, opt);
  auto shuffled = ds;
  std::mt19937 rng(7);
  std::shuffle(shuffled.records.begin(), shuffled.records.end(), rng);
  const auto r2 = run_analysis(shuffled, cfg.R, cfg.T, cfg.plate_model, cfg.sphere_model, opt);
  CHECK(r1.d0_est == r2.d0_est);
  CHECK(r1.residual_fit.v1 == r2.residual_fit.v1);
  CHECK(r1.residual_fit.v_rms == r2.residual_fit.v_rms);
}

TEST_CASE("estimator spread scales linearly with sigma_F") {
  auto cfg = base_config();
  cfg.z_grid = log_grid(1e-6, 2e-5, 8);
  cfg.v_sweep = lin_grid(-0.25, 0.25, 7);
  AnalysisOptions opt;
  opt.casimir = CasimirModelKind::IdealMirror;
  auto spread_at = [&](double sigma) {
    double s2 = 0.0;
    const int trials = 40;
    for (int t = 0; t < trials; ++t) {
      auto c = cfg;
      c.sigma_f = sigma;
      c.seed = 9000 + static_cast<std::uint64_t>(t);
      const auto res = run_analysis(simulate_dataset(c), c.R, c.T, c.plate_model,
                                    c.sphere_model, opt);
      const double err = res.residual_fit.v1 - cfg.v1;
      s2 += err * err;
    }
    return std::sqrt(s2 / 40.0);
  };
  const double lo = spread_at(2e-15);
  const double hi = spread_at(2e-14);
  CHECK(hi / lo == doctest::Approx(10.0).epsilon(0.35));
}

TEST_CASE("permuting z labels: d0 shift invariance through the full pipeline") {
  auto cfg = base_config();
  const auto r1 = run_analysis(simulate_dataset(cfg), cfg.R, cfg.T, cfg.plate_model,
                               cfg.sphere_model, {CasimirModelKind::IdealMirror, {}, {}});
  auto cfg2 = cfg;
  const double shift = 3e-7;
  for (auto& z : cfg2.z_grid) z += shift;
  cfg2.d0 -= shift;
  const auto r2 = run_analysis(simulate_dataset(cfg2), cfg2.R, cfg2.T, cfg2.plate_model,
                               cfg2.sphere_model, {CasimirModelKind::IdealMirror, {}, {}});
  CHECK(r2.d0_est == doctest::Approx(r1.d0_est - shift).epsilon(1e-6));
}
