#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "casikit/electrostatics.hpp"

namespace casikit::contact {

struct MinimizingPotentialSamples {
  std::vector<double> d;      // m, strictly increasing
  std::vector<double> v;      // volts
  std::vector<double> sigma;  // volts; empty -> unweighted
};

struct LogFit {
  double a;  // volts per e-fold, V = a ln(d/1 m) + b
  double b;  // volts (absorbs the unit of d)
  double sigma_a;
  double sigma_b;
  double chi2;
  int dof;
};

/// Weighted least squares of V against ln d (d in meters; b absorbs the
/// unit choice). Needs >= 3 samples; throws FitError when all d coincide.
LogFit fit_log_potential(const MinimizingPotentialSamples& samples);

struct ContactPotentialCurve {
  std::vector<double> d;      // ascending
  std::vector<double> v_c;    // volts
  std::vector<double> dv_dd;  // ODE right-hand side at each sample

  double eval(double dist) const;  // linear interpolation in ln d
};

/// Integrate dV_c/dd = -(C'/C)(V_a(d) + V_c) inward from d_far with the
/// asymptotic boundary value V_c(d_far) = -V_a(d_far). Integration runs in
/// ln d with adaptive RK4 (step doubling, rel tol 1e-9); d_far should sit
/// well above the largest analysis distance so the boundary transient decays.
ContactPotentialCurve solve_contact_ode(const std::function<double(double)>& v_a,
                                        const electrostatics::CapacitanceProfile& profile,
                                        double d_far, double d_near, int n_samples = 200);

/// Force at the minimizing potential, (1/2) d/dd [C (V_a + V_c)^2] under the
/// attraction-positive convention (the variable-contact-potential analysis
/// makes this come out negative, i.e. repulsive). C' is analytic for
/// analytic profiles; the potential derivative is a Richardson-extrapolated
/// central difference of the callables.
double minimized_force(const electrostatics::CapacitanceProfile& profile,
                       const std::function<double(double)>& v_a,
                       const std::function<double(double)>& v_c, double d);

struct ToyModelResult {
  double force;          // at the applied v0, attraction positive
  double v_m;            // minimizing potential of the two-capacitor model
  double f_res;          // residual force at the minimum
  double f_res_from_vm;  // same, expressed through v_m
};

/// Two parallel-plate capacitors C_a(d), C_b(d + delta) sharing the lower
/// plate, with contact potential vc on the far one:
///   F(d, v0)  = -C_a'/2 v0^2 - C_b'/2 (v0+vc)^2
///   V_m       = -vc d^2 / (d^2 + (d+delta)^2)
///   F_res     = (eps0 A / 2) vc^2 / (d^2 + (d+delta)^2)
ToyModelResult toy_model_eval(double d, double delta, double area, double v0, double vc);

/// Residual sphere-plane force at the minimizing potential,
/// F = pi eps0 R [(v_m + v1)^2 + v_rms^2] / d (valid for |v1| >> |v_m|).
double residual_force_model(double d, double v_m, double v1, double v_rms, double R);

struct ForceSample {
  double d;
  double f;
  double sigma;
};

struct ResidualFitResult {
  double v1;     // volts
  double v_rms;  // volts, >= 0
  std::array<double, 4> covariance;  // row-major 2x2 over (v1, v_rms), V^2
  double residual_norm;              // ||F - model||_2, newtons
  double chi2;
  int dof;
  bool v_rms_clamped;  // fitted v_rms^2 was negative and clamped to zero
};

/// Levenberg-Marquardt fit of (v1, v_rms^2) to a force curve after optional
/// subtraction of a Casimir model. `vm_values` aligns with `samples`.
/// Throws IdentifiabilityError when v_m is constant across the curve (only
/// (v_m+v1)^2 + v_rms^2 is then determined).
ResidualFitResult fit_residual(std::span<const ForceSample> samples,
                               std::span<const double> vm_values, double R,
                               const std::function<double(double)>& casimir_model = nullptr);

/// Convenience overload taking v_m as a callable of distance.
ResidualFitResult fit_residual(std::span<const ForceSample> samples,
                               const std::function<double(double)>& vm_curve, double R,
                               const std::function<double(double)>& casimir_model = nullptr);

/// Log-log slope diagnostic for the residual force (the paper-style
/// "1/d^m" exponent is -slope); not a model commitment.
double force_power_law_exponent(std::span<const double> d, std::span<const double> f);

}  // namespace casikit::contact
