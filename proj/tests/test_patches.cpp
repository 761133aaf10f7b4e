#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "casikit/constants.hpp"
#include "casikit/numerics/fit.hpp"
#include "casikit/patches.hpp"

using namespace casikit;
using namespace casikit::patches;
using std::numbers::pi;

TEST_CASE("spectrum evaluation") {
  const auto th = top_hat(0.01, 1e-6);
  // lambda k -> 0 tends to V0^2 lambda^2 / 2
  CHECK(spectrum_eval(th, 1e-3) == doctest::Approx(0.5 * 1e-4 * 1e-12).epsilon(1e-6));
  // first zero of J1 at lambda k = 3.8317...
  CHECK(std::abs(spectrum_eval(th, 3.8317059702075123e6)) < 1e-28);
  // V0 = 0 spectra vanish identically
  CHECK(spectrum_eval(top_hat(0.0, 1e-6), 1e6) == 0.0);
  CHECK(spectrum_eval(single_mode(0.0, 1e6), 1e6) == 0.0);
  // single mode is a point mass
  CHECK(spectrum_eval(single_mode(0.01, 1e6), 2e6) == 0.0);
  CHECK(std::isinf(spectrum_eval(single_mode(0.01, 1e6), 1e6)));
  // tabulated range error
  const auto tab = tabulated_spectrum({{1e5, 1e-16}, {1e6, 5e-17}, {1e7, 0.0}});
  CHECK(spectrum_eval(tab, 5e5) > 0.0);
  CHECK_THROWS_AS(spectrum_eval(tab, 1e4), RangeError);
}

TEST_CASE("single-mode energy per area") {
  const double v0 = 0.01, k = 1e6;
  // kd -> inf: the distance-dependent part dies
  CHECK(single_mode_energy_per_area(v0, k, 50.0 / k) < 1e-10 * constants::eps0 * k * v0 * v0);
  // kd -> 0 reproduces the 1/d regime: E -> eps0 V0^2/(4d)
  const double d_small = 1e-4 / k;
  CHECK(single_mode_energy_per_area(v0, k, d_small) ==
        doctest::Approx(constants::eps0 * v0 * v0 / (4.0 * d_small)).epsilon(1e-3));
  // kd = 1: coth(1) - 1 = 0.31303...
  CHECK(single_mode_energy_per_area(v0, k, 1.0 / k) ==
        doctest::Approx(0.31303529 * constants::eps0 * k * v0 * v0 / 4.0).epsilon(1e-7));
}

TEST_CASE("patch force: top-hat short-distance limit") {
  const double v0 = 0.05, lambda = 1e-6, R = 1e-4;
  const double d = 0.005 * lambda;
  const double f = patch_force_sphere_plane(top_hat(v0, lambda), R, d, 1e-10);
  CHECK(f * d / (pi * constants::eps0 * R * v0 * v0) == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("patch force: top-hat falls as 1/d^3 between 2 and 20 lambda") {
  const double v0 = 0.05, lambda = 1e-6, R = 1e-4;
  std::vector<double> ds, fs;
  for (int i = 0; i <= 10; ++i) {
    const double d = 2e-6 * std::pow(10.0, i / 10.0);
    ds.push_back(d);
    fs.push_back(patch_force_sphere_plane(top_hat(v0, lambda), R, d, 1e-10));
  }
  CHECK(numerics::loglog_slope(ds, fs) == doctest::Approx(-3.0).epsilon(0.1));
}

TEST_CASE("patch force properties") {
  const auto th = top_hat(0.05, 1e-6);
  const double R = 1e-4;
  // zero amplitude -> zero force
  CHECK(patch_force_sphere_plane(top_hat(0.0, 1e-6), R, 1e-7) == 0.0);
  // positive, strictly decreasing in d
  double prev = 1e300;
  for (double d : {1e-8, 1e-7, 1e-6, 1e-5}) {
    const double f = patch_force_sphere_plane(th, R, d);
    CHECK(f > 0.0);
    CHECK(f < prev);
    prev = f;
  }
  // linear in R and in V0^2
  const double f1 = patch_force_sphere_plane(th, R, 1e-6);
  CHECK(patch_force_sphere_plane(th, 2.0 * R, 1e-6) == doctest::Approx(2.0 * f1).epsilon(1e-10));
  CHECK(patch_force_sphere_plane(top_hat(0.1, 1e-6), R, 1e-6) ==
        doctest::Approx(4.0 * f1).epsilon(1e-10));
}

TEST_CASE("single mode through the spectral route matches the closed form") {
  // point mass v0_rms^2 at k equals 2 pi R E_single(sqrt(2) v0_rms)
  const double v0_rms = 0.02, k = 2e6, R = 1e-4;
  for (double d : {5e-8, 5e-7, 2e-6}) {
    const double via_spectrum = patch_force_sphere_plane(single_mode(v0_rms, k), R, d);
    const double via_energy =
        2.0 * pi * R * single_mode_energy_per_area(std::sqrt(2.0) * v0_rms, k, d);
    CHECK(via_spectrum == doctest::Approx(via_energy).epsilon(1e-12));
  }
}

TEST_CASE("tabulated spectrum: narrow triangle matches the point-mass limit") {
  // a triangle of half-width w << k0 carries mass m = h w and acts like a
  // point mass at k0: F -> pi eps0 R k0^2 (coth(k0 d) - 1) m + O((w/k0)^2)
  const double k0 = 2e6, w = k0 / 200.0, h = 1e-16, R = 1e-4, d = 0.4e-6;
  std::vector<std::pair<double, double>> samples;
  const int n = 400;
  for (int i = 0; i <= n; ++i) {
    const double k = k0 - w + 2.0 * w * i / n;
    samples.emplace_back(k, h * (1.0 - std::abs(k - k0) / w));
  }
  const double f_tab = patch_force_sphere_plane(tabulated_spectrum(samples), R, d, 1e-10);
  const double mass = h * w;
  const double e = std::exp(-2.0 * k0 * d);
  const double f_point =
      pi * constants::eps0 * R * k0 * k0 * (2.0 * e / (1.0 - e)) * mass;
  CHECK(f_tab == doctest::Approx(f_point).epsilon(1e-3));
}

TEST_CASE("spectrum validation") {
  CHECK_THROWS_AS(top_hat(-0.1, 1e-6), DomainError);
  CHECK_THROWS_AS(top_hat(0.1, 0.0), DomainError);
  CHECK_THROWS_AS(single_mode(0.1, -1.0), DomainError);
  CHECK_THROWS_AS(tabulated_spectrum({{1e5, 1.0}}), InsufficientDataError);
  CHECK_THROWS_AS(tabulated_spectrum({{1e5, 1.0}, {1e4, 1.0}}), FormatError);
  CHECK_THROWS_AS(tabulated_spectrum({{1e5, 1.0}, {1e6, -1.0}}), FormatError);
  CHECK_THROWS_AS(patch_force_sphere_plane(top_hat(0.1, 1e-6), 0.0, 1e-6), DomainError);
}
