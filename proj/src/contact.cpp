#include "casikit/contact.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "casikit/constants.hpp"
#include "casikit/numerics/fit.hpp"
#include "casikit/numerics/ode.hpp"

namespace casikit::contact {
namespace {

using namespace casikit::constants;
using std::numbers::pi;

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

LogFit fit_log_potential(const MinimizingPotentialSamples& samples) {
  const std::size_t n = samples.d.size();
  if (n < 3 || samples.v.size() != n)
    throw InsufficientDataError("fit_log_potential: need >= 3 (d, V) samples");
  if (!samples.sigma.empty() && samples.sigma.size() != n)
    throw FormatError("fit_log_potential: sigma length mismatch");
  std::vector<double> lx(n), ones(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(samples.d[i] > 0.0)) throw DomainError("fit_log_potential: d must be positive");
    lx[i] = std::log(samples.d[i]);
  }
  auto fit = numerics::fit_linear_weighted(samples.v, samples.sigma, {lx, ones});
  return {fit.beta[0], fit.beta[1], std::sqrt(std::max(fit.cov[0], 0.0)),
          std::sqrt(std::max(fit.cov[3], 0.0)), fit.chi2, fit.dof};
}

double ContactPotentialCurve::eval(double dist) const {
  if (d.empty()) throw RangeError("ContactPotentialCurve: empty curve");
  if (dist < d.front() || dist > d.back())
    throw RangeError("ContactPotentialCurve: distance outside solved range");
  auto it = std::upper_bound(d.begin(), d.end(), dist);
  std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(it - d.begin()), d.size() - 1);
  i = i ? i - 1 : 0;
  if (i == d.size() - 1) return v_c.back();
  const double t = (std::log(dist) - std::log(d[i])) / (std::log(d[i + 1]) - std::log(d[i]));
  return v_c[i] * (1.0 - t) + v_c[i + 1] * t;
}

ContactPotentialCurve solve_contact_ode(const std::function<double(double)>& v_a,
                                        const electrostatics::CapacitanceProfile& profile,
                                        double d_far, double d_near, int n_samples) {
  if (!(d_near > 0.0) || !(d_near < d_far))
    throw DomainError("solve_contact_ode: need 0 < d_near < d_far");
  if (n_samples < 2) throw DomainError("solve_contact_ode: need >= 2 output samples");

  // integrate in s = ln d; dV/ds = -d (C'/C) (V_a + V)
  auto rhs = [&](double s, double v) {
    const double dist = std::exp(s);
    return -dist * profile.derivative(dist) / profile.capacitance(dist) * (v_a(dist) + v);
  };
  const double s_far = std::log(d_far), s_near = std::log(d_near);
  std::vector<double> s_grid(static_cast<std::size_t>(n_samples));
  for (int i = 0; i < n_samples; ++i)
    s_grid[static_cast<std::size_t>(i)] = s_far + (s_near - s_far) * i / (n_samples - 1.0);

  numerics::OdeOptions opts;
  opts.rel_tol = 1e-9;
  auto sol = numerics::rk4_adaptive(rhs, s_far, s_near, -v_a(d_far), s_grid, opts);

  ContactPotentialCurve curve;
  curve.d.resize(sol.size());
  curve.v_c.resize(sol.size());
  curve.dv_dd.resize(sol.size());
  // solution arrives from far to near; store ascending in d
  for (std::size_t i = 0; i < sol.size(); ++i) {
    const std::size_t j = sol.size() - 1 - i;
    const double dist = std::exp(sol[j].t);
    curve.d[i] = dist;
    curve.v_c[i] = sol[j].y;
    curve.dv_dd[i] = sol[j].dydt / dist;  // ds/dd = 1/d
  }
  return curve;
}

double minimized_force(const electrostatics::CapacitanceProfile& profile,
                       const std::function<double(double)>& v_a,
                       const std::function<double(double)>& v_c, double d) {
  if (!(d > 0.0)) throw DomainError("minimized_force: d must be positive");
  auto u = [&](double x) { return v_a(x) + v_c(x); };
  const double h = std::max(1e-4 * d, 1e-12);
  auto diff = [&](double step) { return (u(d + step) - u(d - step)) / (2.0 * step); };
  const double du = (4.0 * diff(0.5 * h) - diff(h)) / 3.0;
  const double ud = u(d);
  return 0.5 * (profile.derivative(d) * ud * ud + 2.0 * profile.capacitance(d) * ud * du);
}

ToyModelResult toy_model_eval(double d, double delta, double area, double v0, double vc) {
  if (!(d > 0.0) || delta < 0.0 || !(area > 0.0))
    throw DomainError("toy_model_eval: bad geometry");
  const double dpd = d + delta;
  const double ca = -eps0 * area / (d * d);
  const double cb = -eps0 * area / (dpd * dpd);
  const double denom = d * d + dpd * dpd;
  ToyModelResult r;
  r.force = -0.5 * ca * v0 * v0 - 0.5 * cb * (v0 + vc) * (v0 + vc);
  r.v_m = -vc * d * d / denom;
  r.f_res = 0.5 * eps0 * area * vc * vc / denom;
  r.f_res_from_vm = 0.5 * eps0 * area * r.v_m * r.v_m * denom / (d * d * d * d);
  return r;
}

double residual_force_model(double d, double v_m, double v1, double v_rms, double R) {
  if (!(d > 0.0) || !(R > 0.0)) throw DomainError("residual_force_model: d, R must be positive");
  const double u = v_m + v1;
  return pi * eps0 * R * (u * u + v_rms * v_rms) / d;
}

ResidualFitResult fit_residual(std::span<const ForceSample> samples,
                               std::span<const double> vm_values, double R,
                               const std::function<double(double)>& casimir_model) {
  const std::size_t n = samples.size();
  if (n < 5) throw InsufficientDataError("fit_residual: need >= 5 force samples");
  if (vm_values.size() != n) throw FormatError("fit_residual: v_m values must align with samples");
  if (!(R > 0.0)) throw DomainError("fit_residual: R must be positive");

  double vm_lo = vm_values[0], vm_hi = vm_values[0];
  for (double v : vm_values) {
    vm_lo = std::min(vm_lo, v);
    vm_hi = std::max(vm_hi, v);
  }
  if (vm_hi - vm_lo < std::max(1e-15, 1e-9 * std::max(std::abs(vm_lo), std::abs(vm_hi))))
    throw IdentifiabilityError(
        "fit_residual: v_m is constant across the curve; only (v_m+v1)^2 + v_rms^2 is determined");

  std::vector<double> y(n), pref(n), w(n, 1.0);
  bool weighted = true;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(samples[i].d > 0.0)) throw DomainError("fit_residual: d must be positive");
    y[i] = samples[i].f - (casimir_model ? casimir_model(samples[i].d) : 0.0);
    pref[i] = pi * eps0 * R / samples[i].d;
    if (!(samples[i].sigma > 0.0)) weighted = false;
  }
  for (std::size_t i = 0; i < n; ++i) w[i] = weighted ? 1.0 / samples[i].sigma : 1.0;

  // init: v1 from the median of sqrt(F d / pi eps0 R) - v_m, v_rms^2 from
  // the positive part of the floor
  std::vector<double> v1_guess;
  v1_guess.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    v1_guess.push_back(std::sqrt(std::max(y[i], 0.0) / pref[i]) - vm_values[i]);
  const double v1_0 = median(v1_guess);
  double floor0 = y[0] / pref[0] - (vm_values[0] + v1_0) * (vm_values[0] + v1_0);
  for (std::size_t i = 1; i < n; ++i)
    floor0 = std::min(floor0, y[i] / pref[i] - (vm_values[i] + v1_0) * (vm_values[i] + v1_0));
  const double w_0 = std::max(0.0, floor0);

  auto residuals = [&](std::span<const double> p) {
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double u = vm_values[i] + p[0];
      r[i] = w[i] * (y[i] - pref[i] * (u * u + p[1]));
    }
    return r;
  };
  auto jacobian = [&](std::span<const double> p) {
    std::vector<double> J(n * 2);
    for (std::size_t i = 0; i < n; ++i) {
      const double u = vm_values[i] + p[0];
      J[2 * i] = -w[i] * pref[i] * 2.0 * u;
      J[2 * i + 1] = -w[i] * pref[i];
    }
    return J;
  };

  const std::array<double, 2> init{v1_0, w_0};
  auto lm = numerics::levenberg_marquardt(residuals, jacobian, init);
  if (!lm.converged && lm.iterations >= 300)
    throw ConvergenceError("fit_residual: Levenberg-Marquardt did not converge", lm.params[0]);

  ResidualFitResult res{};
  res.v1 = lm.params[0];
  const double wfit = lm.params[1];
  res.v_rms_clamped = wfit < 0.0;
  res.v_rms = std::sqrt(std::max(wfit, 0.0));
  res.chi2 = lm.chi2;
  res.dof = static_cast<int>(n) - 2;

  // propagate (v1, w) covariance to (v1, v_rms); dv_rms = dw / (2 v_rms)
  res.covariance = {lm.cov[0], 0.0, 0.0, 0.0};
  if (res.v_rms > 0.0) {
    const double t = 1.0 / (2.0 * res.v_rms);
    res.covariance = {lm.cov[0], lm.cov[1] * t, lm.cov[2] * t, lm.cov[3] * t * t};
  }
  double norm2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = vm_values[i] + res.v1;
    const double r = y[i] - pref[i] * (u * u + std::max(wfit, 0.0));
    norm2 += r * r;
  }
  res.residual_norm = std::sqrt(norm2);
  return res;
}

ResidualFitResult fit_residual(std::span<const ForceSample> samples,
                               const std::function<double(double)>& vm_curve, double R,
                               const std::function<double(double)>& casimir_model) {
  std::vector<double> vm(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) vm[i] = vm_curve(samples[i].d);
  return fit_residual(samples, vm, R, casimir_model);
}

double force_power_law_exponent(std::span<const double> d, std::span<const double> f) {
  return -numerics::loglog_slope(d, f);
}

}  // namespace casikit::contact
