#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "casikit/errors.hpp"
#include "casikit/numerics/bessel.hpp"
#include "casikit/numerics/fit.hpp"
#include "casikit/numerics/ode.hpp"
#include "casikit/numerics/quadrature.hpp"
#include "casikit/numerics/rng.hpp"

using namespace casikit;
using namespace casikit::numerics;
using std::numbers::pi;

namespace {

// independent J1 oracle: trapezoid on the integral representation
// J1(x) = (1/pi) Int_0^pi cos(theta - x sin theta) dtheta; the rule is
// spectrally accurate for this periodic-smooth integrand once N >> x
double j1_oracle(double x) {
  const int n = 4000;
  double s = 0.5 * (std::cos(0.0 - x * std::sin(0.0)) + std::cos(n * pi / n - x * std::sin(pi)));
  for (int i = 1; i < n; ++i) {
    const double t = pi * i / n;
    s += std::cos(t - x * std::sin(t));
  }
  return s / n;
}

}  // namespace

TEST_CASE("adaptive quadrature on analytic integrals") {
  QuadOptions q;
  q.rel_tol = 1e-12;
  CHECK(integrate_adaptive([](double x) { return std::exp(-x); }, 0.0, 40.0, q) ==
        doctest::Approx(1.0).epsilon(1e-11));
  CHECK(integrate_adaptive([](double x) { return std::sin(x); }, 0.0, pi, q) ==
        doctest::Approx(2.0).epsilon(1e-11));
  // mildly oscillatory
  CHECK(integrate_adaptive([](double x) { return std::cos(10.0 * x); }, 0.0, 1.0, q) ==
        doctest::Approx(std::sin(10.0) / 10.0).epsilon(1e-10));
}

TEST_CASE("exponential tail integration") {
  TailOptions t;
  t.rel_tol = 1e-10;
  // Int_0^inf d/dy (-(y+1)e^-y) = Int y e^-y = 1
  CHECK(integrate_exp_tail([](double y) { return y * std::exp(-y); }, 0.0, 1.0, t) ==
        doctest::Approx(1.0).epsilon(1e-9));
  // Int_0^inf y^3 e^-y/(1-e^-y) dy = Gamma(4) zeta(4) = 6 pi^4/90
  const double expect = 6.0 * std::pow(pi, 4) / 90.0;
  auto f = [](double y) {
    const double e = std::exp(-y);
    return y * y * y * e / (1.0 - e);
  };
  CHECK(integrate_exp_tail(f, 0.0, 1.0, t) == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("bessel j1 against the integral representation") {
  // dense sweep through both branches, including the 8.0 split point
  for (double x = 0.05; x < 60.0; x += 0.37) {
    const double ref = j1_oracle(x);
    CHECK(bessel_j1(x) == doctest::Approx(ref).epsilon(1e-11).scale(1.0));
  }
  CHECK(bessel_j1(8.0) == doctest::Approx(j1_oracle(8.0)).epsilon(1e-12));
  CHECK(bessel_j1(8.0000001) == doctest::Approx(j1_oracle(8.0000001)).epsilon(1e-12));
  CHECK(bessel_j1(-3.3) == doctest::Approx(-j1_oracle(3.3)).epsilon(1e-12));
  CHECK(bessel_j1(0.0) == 0.0);
  // small-argument limit J1(x)/x -> 1/2
  CHECK(bessel_j1(1e-9) / 1e-9 == doctest::Approx(0.5).epsilon(1e-12));
  // first zero of J1
  CHECK(std::abs(bessel_j1(3.8317059702075123)) < 1e-12);
}

TEST_CASE("adaptive rk4 integrates exponential decay") {
  std::vector<double> grid{0.0, 0.5, 1.0, 2.0, 4.0};
  auto sol = rk4_adaptive([](double, double y) { return -y; }, 0.0, 4.0, 1.0, grid);
  REQUIRE(sol.size() == grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(sol[i].t == grid[i]);
    CHECK(sol[i].y == doctest::Approx(std::exp(-grid[i])).epsilon(1e-8));
  }
}

TEST_CASE("adaptive rk4 integrates backwards") {
  std::vector<double> grid{2.0, 1.0, 0.5};
  auto sol = rk4_adaptive([](double t, double) { return 2.0 * t; }, 2.0, 0.5, 4.0, grid);
  REQUIRE(sol.size() == 3);
  // y = t^2
  CHECK(sol[1].y == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(sol[2].y == doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("counter rng is deterministic and order-free") {
  CHECK(gaussian_at(42, 7) == gaussian_at(42, 7));
  CHECK(gaussian_at(42, 7) != gaussian_at(42, 8));
  CHECK(gaussian_at(42, 7) != gaussian_at(43, 7));
  // moments over a seeded stream
  const int n = 200000;
  double s1 = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double g = gaussian_at(2026, static_cast<std::uint64_t>(i));
    s1 += g;
    s2 += g * g;
  }
  CHECK(std::abs(s1 / n) < 0.01);
  CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("weighted linear fit recovers exact coefficients and covariance scale") {
  std::vector<double> x{1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
  std::vector<double> ones(x.size(), 1.0), y(x.size()), sig(x.size(), 0.5);
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = 3.0 - 2.0 * x[i];
  auto fit = fit_linear_weighted(y, sig, {ones, x});
  CHECK(fit.beta[0] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(fit.beta[1] == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(fit.chi2 == doctest::Approx(0.0).scale(1.0).epsilon(1e-18));

  // rank deficiency: duplicated column
  CHECK_THROWS_AS(fit_linear_weighted(y, sig, {x, x}), FitError);
}

TEST_CASE("levenberg-marquardt solves a small nonlinear problem") {
  // residuals r_i = y_i - a exp(-b t_i)
  std::vector<double> ts{0.0, 0.3, 0.7, 1.1, 1.6, 2.2, 3.0};
  std::vector<double> ys(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) ys[i] = 2.5 * std::exp(-1.3 * ts[i]);
  auto resid = [&](std::span<const double> p) {
    std::vector<double> r(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) r[i] = ys[i] - p[0] * std::exp(-p[1] * ts[i]);
    return r;
  };
  auto jac = [&](std::span<const double> p) {
    std::vector<double> J(ts.size() * 2);
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const double e = std::exp(-p[1] * ts[i]);
      J[2 * i] = -e;
      J[2 * i + 1] = p[0] * ts[i] * e;
    }
    return J;
  };
  const std::vector<double> init{1.0, 1.0};
  auto r = levenberg_marquardt(resid, jac, init);
  CHECK(r.converged);
  CHECK(r.params[0] == doctest::Approx(2.5).epsilon(1e-9));
  CHECK(r.params[1] == doctest::Approx(1.3).epsilon(1e-9));
}

TEST_CASE("loglog slope recovers power laws") {
  std::vector<double> d{1e-6, 2e-6, 5e-6, 1e-5, 3e-5};
  std::vector<double> f(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) f[i] = 4.2e-9 / std::pow(d[i], 3);
  CHECK(loglog_slope(d, f) == doctest::Approx(-3.0).epsilon(1e-10));
}
