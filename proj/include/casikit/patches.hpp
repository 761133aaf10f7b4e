#pragma once

#include <utility>
#include <variant>
#include <vector>

#include "casikit/errors.hpp"

namespace casikit::patches {

// Surface-potential fluctuation spectra. Normalization convention (fixed by
// the short-distance anchor F -> pi eps0 R <V^2> / d):
//   Int_0^inf k S(k) dk = <V^2> = V_rms^2.

/// A single spatial mode carrying rms potential v0 at wavenumber k
/// (spectral point mass v0^2 at k).
struct SingleMode {
  double v0;  // rms volts
  double k;   // rad/m
};

/// Top-hat autocorrelation R(r) = V0^2 for r <= lambda, 0 beyond;
/// S(k) = V0^2 lambda^2 J1(lambda k)/(lambda k), V_rms = V0.
struct TopHatCorrelation {
  double v0;            // volts
  double lambda_patch;  // m
};

/// Sampled spectrum, linearly interpolated; S = 0 outside the table when
/// integrating, out-of-range point evaluation errors.
struct TabulatedSpectrum {
  std::vector<std::pair<double, double>> samples;  // (k, S(k) V^2 m^2)
};

using PatchSpectrum = std::variant<SingleMode, TopHatCorrelation, TabulatedSpectrum>;

PatchSpectrum single_mode(double v0, double k);
PatchSpectrum top_hat(double v0, double lambda_patch);
PatchSpectrum tabulated_spectrum(std::vector<std::pair<double, double>> samples);

/// Pointwise spectral density S(k). For SingleMode the density is a point
/// mass: 0 away from the mode, +inf at exactly k (0 when v0 = 0).
double spectrum_eval(const PatchSpectrum& spec, double k);

/// Distance-dependent part of the field energy of a sinusoidal surface
/// potential of peak amplitude v0: E = (eps0 k v0^2 / 4)(coth(kd) - 1).
/// The d-independent constant is subtracted (it exerts no force).
double single_mode_energy_per_area(double v0, double k, double d);

/// PFA sphere-plane patch force,
///   F = pi eps0 R Int_0^inf k^2 (coth(kd) - 1) S(k) dk,
/// attraction positive. SingleMode evaluates in closed form; others by
/// adaptive quadrature (substitution u = k lambda, or u = k d for tables).
double patch_force_sphere_plane(const PatchSpectrum& spec, double R, double d, double tol = 1e-9);

}  // namespace casikit::patches
