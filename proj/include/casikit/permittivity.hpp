#pragma once

#include <complex>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "casikit/errors.hpp"

namespace casikit::permittivity {

// Dielectric response models for plates and gap media. All models are
// immutable values after construction; construct through the factory
// functions below, which validate the invariants.

struct PerfectConductor {};

struct ConstantEps {
  double eps;
};

struct Plasma {
  double omega_p;  // rad/s
};

struct Drude {
  double omega_p;  // rad/s
  double gamma;    // rad/s
};

struct Conductor {
  double sigma;  // S/m
};

/// eps(i xi) on a strictly increasing xi grid; values >= 1, non-increasing.
struct Tabulated {
  std::vector<double> xi;
  std::vector<double> eps;
};

/// Drude (or tabulated) response plus a free-electron omega_p^2/xi^2 term
/// that diverges fast enough to keep the TE zero-frequency mode.
struct GeneralizedPlasma {
  std::variant<Drude, Tabulated> base;
  double omega_p;  // rad/s
};

using PermittivityModel = std::variant<PerfectConductor, ConstantEps, Plasma, Drude,
                                       GeneralizedPlasma, Conductor, Tabulated>;

PermittivityModel perfect_conductor();
PermittivityModel constant_eps(double eps);
PermittivityModel plasma(double omega_p);
PermittivityModel drude(double omega_p, double gamma);
PermittivityModel generalized_plasma(PermittivityModel base, double omega_p);
PermittivityModel conductor(double sigma);
PermittivityModel tabulated(std::vector<double> xi, std::vector<double> eps);

struct EpsSample {
  double value;
  bool extrapolated = false;  // set when a tabulated grid was left
};

/// eps(i xi) for xi > 0. Real, >= 1 and finite for all analytic models;
/// PerfectConductor evaluates to +infinity (ideal-mirror limit). Tabulated
/// models interpolate linearly in (log xi, log(eps-1)) and extrapolate the
/// boundary power laws outside the grid, with the flag set.
EpsSample eval_imaginary_detail(const PermittivityModel& model, double xi);
double eval_imaginary(const PermittivityModel& model, double xi);

/// eps(omega) on the real axis for analytic models.
/// Conductor uses the SI form eps = 1 + i sigma/(eps0 omega).
std::complex<double> eval_real(const PermittivityModel& model, double omega);

/// Build a Tabulated model from measured absorption data (omega, eps''):
/// eps(i xi) = 1 + (2/pi) Int_0^inf w eps''(w) / (w^2 + xi^2) dw
/// on a log-spaced xi grid spanning the data range. Below the data a Drude
/// tail eps'' = A/w is fitted to the two lowest points; above, a w^-3 tail
/// is matched to the last point. Requires >= 8 strictly increasing samples.
PermittivityModel build_tabulated(std::span<const std::pair<double, double>> data);

/// lim xi->0 of eps(i xi) xi^2 classification, used for the TE n=0 policy.
enum class ZeroFreqClass {
  Ideal,       // perfect conductor
  PlasmaLike,  // eps ~ omega_p^2/xi^2: TE n=0 survives
  Divergent,   // eps diverges slower than xi^-2: TE n=0 vanishes, TM -> 1
  Finite,      // dielectric: finite eps(0)
};

struct ZeroFreqBehavior {
  ZeroFreqClass cls;
  double omega_p = 0.0;    // for PlasmaLike
  double eps_static = 1.0; // for Finite
};

ZeroFreqBehavior zero_frequency_behavior(const PermittivityModel& model);

}  // namespace casikit::permittivity
