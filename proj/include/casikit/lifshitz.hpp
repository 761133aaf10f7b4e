#pragma once

#include <optional>
#include <span>
#include <vector>

#include "casikit/permittivity.hpp"

namespace casikit::lifshitz {

/// Handling of the transverse-electric zero-frequency Matsubara term.
/// FromModel: the term vanishes for models whose permittivity diverges
/// slower than xi^-2 (Drude, Conductor, tabulated data) and survives for
/// plasma-like and ideal mirrors. ForceInclude: evaluate it in the
/// diverging-permittivity limit (plasma form when a plasma frequency is
/// available, ideal mirror otherwise). ForceExclude: drop it always.
enum class TeZeroPolicy { FromModel, ForceInclude, ForceExclude };

struct Convergence {
  std::optional<int> n_max;        // empty -> extend automatically
  double kperp_tolerance = 1e-8;   // relative tolerance of the k_perp integral
};

struct LifshitzProblem {
  permittivity::PermittivityModel plate_a;
  permittivity::PermittivityModel plate_b;
  permittivity::PermittivityModel gap = permittivity::constant_eps(1.0);
  double d = 0.0;  // separation (m)
  double T = 0.0;  // temperature (K); T = 0 routes to the xi integral
  TeZeroPolicy te_zero_policy = TeZeroPolicy::FromModel;
  Convergence convergence;
};

/// xi_n = 2 pi n k_b T / hbar for n = 0..n_max (poles of the thermal weight).
std::vector<double> matsubara_frequencies(double T, int n_max);

/// (1/2) coth(hbar omega / 2 k_b T) = N(omega) + 1/2.
double thermal_weight(double omega, double T);

struct Reflection {
  double te;
  double tm;
};

/// Fresnel reflection coefficients at imaginary frequency for a half-space
/// plate seen from the gap medium. Sign convention: ideal mirrors give
/// (r_TE, r_TM) = (-1, +1). A direct xi = 0 call errors for plates whose
/// permittivity diverges there; the energy/pressure evaluators handle that
/// limit through the TE-n=0 policy instead.
Reflection reflection_coefficients(const permittivity::PermittivityModel& plate,
                                   const permittivity::PermittivityModel& gap, double xi,
                                   double kperp);

/// Lifshitz free energy per unit area (J/m^2), negative for attracting
/// plates. Matsubara sum (n=0 weighted 1/2) at T > 0, imaginary-frequency
/// integral at T = 0.
double free_energy_per_area(const LifshitzProblem& problem);

/// dE/dd from the analytically differentiated integrand (N/m^2).
/// Positive for attraction.
double casimir_pressure(const LifshitzProblem& problem);

/// Proximity-force sphere-plane force, -2 pi R E(d) (N); positive for
/// attraction, linear in R. Valid for d << R (not enforced).
double sphere_plane_force(const LifshitzProblem& problem, double R);

struct EtaCorrection {
  double value;
  bool in_validity;  // false when the first-order formula went negative
};

/// First-order plasma correction to the parallel-plate force,
/// eta = 1 - (16/3) c / (omega_p d).
EtaCorrection eta_first_order(double omega_p, double d);

/// True iff eps1(i xi) > eps_gap(i xi) > eps2(i xi) strictly at every grid
/// point (sufficient ordering for a repulsive force across a liquid gap).
bool repulsion_condition(const permittivity::PermittivityModel& eps1,
                         const permittivity::PermittivityModel& eps2,
                         const permittivity::PermittivityModel& gap,
                         std::span<const double> xi_grid);

}  // namespace casikit::lifshitz
