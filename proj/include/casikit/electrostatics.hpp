#pragma once

#include <variant>
#include <vector>

#include "casikit/errors.hpp"

namespace casikit::electrostatics {

/// C = eps0 A / d.
double parallel_plate_capacitance(double A, double d);

/// Image-charge series for a sphere of radius R a distance d above a plane:
/// C = 4 pi eps0 R sinh(beta) sum_{n>=1} 1/sinh(n beta), cosh(beta) = 1 + d/R,
/// truncated when a term drops below tol of the partial sum.
double sphere_plane_capacitance(double R, double d, double tol = 1e-12);

struct ParallelPlateProfile {
  double area;  // m^2
};
struct SpherePlaneProfile {
  double radius;  // m
  double tol = 1e-12;
};
struct SampledProfile {
  std::vector<double> d;  // strictly increasing
  std::vector<double> c;  // capacitance samples, positive, decreasing
};

/// Capacitance-versus-distance profile with derivative access. Analytic
/// representations differentiate in closed form; sampled tables use a
/// central difference with one Richardson extrapolation step.
class CapacitanceProfile {
 public:
  explicit CapacitanceProfile(ParallelPlateProfile p) : rep_(p) {}
  explicit CapacitanceProfile(SpherePlaneProfile p) : rep_(p) {}
  explicit CapacitanceProfile(SampledProfile p);

  double capacitance(double d) const;
  double derivative(double d) const;  // dC/dd, negative

 private:
  std::variant<ParallelPlateProfile, SpherePlaneProfile, SampledProfile> rep_;
};

/// F = (1/2) |C'(d)| V^2; attraction reported positive (toolkit-wide
/// convention).
double force_from_capacitance(const CapacitanceProfile& profile, double d, double V);

/// alpha = pi eps0 R / d, the coefficient of V^2 in the PFA sphere-plane
/// electrostatic force; its inverse fixes the absolute separation.
double calibration_alpha(double R, double d);
double distance_from_alpha(double alpha, double R);

/// Repulsion between the halves of a bisected charged sphere,
/// F = q^2 / (32 pi eps0 R^2) (SI form of the fixed-charge result).
double hemisphere_repulsion(double q, double R);

}  // namespace casikit::electrostatics
