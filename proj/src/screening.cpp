#include "casikit/screening.hpp"

#include <cmath>
#include <vector>

#include "casikit/constants.hpp"

namespace casikit::screening {

using namespace casikit::constants;

double debye_length(const SemiconductorPlate& plate) {
  if (!(plate.eps_static > 0.0) || !(plate.carrier_density > 0.0) || !(plate.temperature > 0.0))
    throw DomainError("debye_length: plate parameters must be positive");
  return std::sqrt(plate.eps_static * eps0 * k_b * plate.temperature /
                   (e_charge * e_charge * plate.carrier_density));
}

double screened_surface_potential(double V, double d, double lambda, double eps) {
  if (!(d > 0.0) || !(eps > 0.0) || lambda < 0.0)
    throw DomainError("screened_surface_potential: bad arguments");
  return 0.5 * V / (1.0 + 2.0 * lambda / (eps * d));
}

double screened_energy_per_area(double V, double d, double lambda, double eps) {
  if (!(d > 0.0) || !(eps > 0.0) || lambda < 0.0)
    throw DomainError("screened_energy_per_area: bad arguments");
  if (lambda == 0.0) return 0.5 * eps0 * V * V / d;  // unscreened capacitor
  const double y = eps * d / lambda;
  return 0.5 * eps0 * V * V / d * (y + y * y) / ((y + 2.0) * (y + 2.0));
}

OffsetResult apparent_distance_offset(double lambda, double eps,
                                      std::pair<double, double> d_range) {
  if (lambda < 0.0 || !(eps > 0.0)) throw DomainError("apparent_distance_offset: bad arguments");
  if (!(d_range.first > 0.0) || !(d_range.second > d_range.first))
    throw DomainError("apparent_distance_offset: bad fit range");
  const double expansion = 3.0 * lambda / eps;
  if (lambda == 0.0) return {0.0, 0.0, false};

  const int n = 41;
  std::vector<double> ds(n), ceff(n);
  bool warn = false;
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / (n - 1);
    ds[i] = d_range.first * std::pow(d_range.second / d_range.first, t);
    ceff[i] = 2.0 * screened_energy_per_area(1.0, ds[i], lambda, eps);  // 2E/V^2
    if (eps * ds[i] / lambda < 3.0) warn = true;
  }

  // 1-D Gauss-Newton on delta for model eps0/(d + delta)
  double delta = lambda / eps;
  for (int it = 0; it < 100; ++it) {
    double num = 0.0, den = 0.0;
    for (int i = 0; i < n; ++i) {
      const double m = eps0 / (ds[i] + delta);
      const double j = -eps0 / ((ds[i] + delta) * (ds[i] + delta));  // d model / d delta
      num += j * (ceff[i] - m);
      den += j * j;
    }
    const double step = num / den;
    delta += step;
    if (std::abs(step) < 1e-15 * (std::abs(delta) + 1e-30)) break;
  }
  return {delta, expansion, warn};
}

double nonlinear_shielding_factor(double phi) {
  if (!std::isfinite(phi)) throw DomainError("nonlinear_shielding_factor: phi must be finite");
  if (phi == 0.0) return 1.0;
  // e^phi + e^-phi - 2 = 4 sinh^2(phi/2)
  const double a = std::abs(phi);
  return a / (2.0 * std::sinh(0.5 * a));
}

}  // namespace casikit::screening
