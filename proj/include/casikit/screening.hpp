#pragma once

#include <utility>

#include "casikit/errors.hpp"

namespace casikit::screening {

struct SemiconductorPlate {
  double eps_static;       // dimensionless
  double carrier_density;  // m^-3, c_t = c_h + c_e
  double temperature;      // K
};

/// Debye-Hueckel field penetration length,
/// lambda = sqrt(eps eps0 k_b T / (e^2 c_t)).
double debye_length(const SemiconductorPlate& plate);

/// Surface potential of a plate biased at V/2 with field penetration,
/// V_s = (V/2) / (1 + 2 lambda / (eps d)).
double screened_surface_potential(double V, double d, double lambda, double eps);

/// Field energy per unit area between screened plates,
/// E = (1/2)(eps0 V^2 / d) (y + y^2)/(y + 2)^2 with y = eps d / lambda.
double screened_energy_per_area(double V, double d, double lambda, double eps);

struct OffsetResult {
  double delta_total;        // fitted apparent distance offset (m)
  double small_y_expansion;  // analytic 3 lambda / eps for comparison
  bool regime_warning;       // y < 3 somewhere in the fit range
};

/// Apparent distance offset: least-squares fit of C_eff(d) = 2E/V^2 to
/// eps0/(d + delta) over a log-spaced grid in d_range. The small-screening
/// expansion of the energy gives delta ~= 3 lambda / eps, reported alongside.
OffsetResult apparent_distance_offset(double lambda, double eps,
                                      std::pair<double, double> d_range);

/// Large-bias shielding correction lambda'/lambda = |Phi| / sqrt(e^Phi +
/// e^-Phi - 2), continuous through Phi = 0 with value 1.
double nonlinear_shielding_factor(double phi);

}  // namespace casikit::screening
