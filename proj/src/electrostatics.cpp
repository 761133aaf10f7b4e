#include "casikit/electrostatics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "casikit/constants.hpp"

namespace casikit::electrostatics {
namespace {

using namespace casikit::constants;
using std::numbers::pi;

// series sum S(beta) = sinh(beta) sum 1/sinh(n beta) and its beta-derivative
struct SphereSeries {
  double sum;
  double dsum_dbeta;
};

SphereSeries sphere_series(double beta, double tol) {
  const double sh = std::sinh(beta), ch = std::cosh(beta);
  double s = 0.0, ds = 0.0;
  for (int n = 1; n <= 20000000; ++n) {
    const double shn = std::sinh(n * beta);
    const double term = 1.0 / shn;
    s += term;
    ds += -n * std::cosh(n * beta) / (shn * shn);
    if (term < tol * s) {
      return {sh * s, ch * s + sh * ds};
    }
  }
  throw ConvergenceError("sphere_plane_capacitance: series did not converge", 0.0);
}

double beta_of(double R, double d) {
  // cosh(beta) = 1 + d/R; acosh via the log form, stable for small d/R
  const double x = d / R;
  return std::log1p(x + std::sqrt(x * (x + 2.0)));
}

}  // namespace

double parallel_plate_capacitance(double A, double d) {
  if (!(A > 0.0) || !(d > 0.0))
    throw DomainError("parallel_plate_capacitance: A and d must be positive");
  return eps0 * A / d;
}

double sphere_plane_capacitance(double R, double d, double tol) {
  if (!(R > 0.0) || !(d > 0.0)) throw DomainError("sphere_plane_capacitance: R, d must be positive");
  if (!(tol > 0.0) || tol >= 1.0) throw DomainError("sphere_plane_capacitance: bad tolerance");
  const double beta = beta_of(R, d);
  return 4.0 * pi * eps0 * R * sphere_series(beta, tol).sum;
}

CapacitanceProfile::CapacitanceProfile(SampledProfile p) : rep_(std::move(p)) {
  const auto& s = std::get<SampledProfile>(rep_);
  if (s.d.size() != s.c.size() || s.d.size() < 4)
    throw InsufficientDataError("CapacitanceProfile: sampled table needs >= 4 points");
  for (std::size_t i = 0; i < s.d.size(); ++i) {
    if (!(s.d[i] > 0.0) || !(s.c[i] > 0.0))
      throw FormatError("CapacitanceProfile: d and C must be positive");
    if (i > 0 && !(s.d[i] > s.d[i - 1]))
      throw FormatError("CapacitanceProfile: d must be strictly increasing");
  }
}

double CapacitanceProfile::capacitance(double d) const {
  if (!(d > 0.0)) throw DomainError("CapacitanceProfile: d must be positive");
  return std::visit(
      [&](const auto& r) -> double {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, ParallelPlateProfile>) {
          return eps0 * r.area / d;
        } else if constexpr (std::is_same_v<T, SpherePlaneProfile>) {
          return sphere_plane_capacitance(r.radius, d, r.tol);
        } else {
          if (d < r.d.front() || d > r.d.back())
            throw RangeError("CapacitanceProfile: d outside sampled table");
          auto it = std::upper_bound(r.d.begin(), r.d.end(), d);
          std::size_t i = std::min<std::size_t>(r.d.size() - 2,
                                                static_cast<std::size_t>(it - r.d.begin()) -
                                                    (it == r.d.begin() ? 0 : 1));
          const double t = (d - r.d[i]) / (r.d[i + 1] - r.d[i]);
          return r.c[i] * (1.0 - t) + r.c[i + 1] * t;
        }
      },
      rep_);
}

double CapacitanceProfile::derivative(double d) const {
  if (!(d > 0.0)) throw DomainError("CapacitanceProfile: d must be positive");
  return std::visit(
      [&](const auto& r) -> double {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, ParallelPlateProfile>) {
          return -eps0 * r.area / (d * d);
        } else if constexpr (std::is_same_v<T, SpherePlaneProfile>) {
          const double beta = beta_of(r.radius, d);
          const auto s = sphere_series(beta, r.tol);
          // dC/dd = dC/dbeta * dbeta/dd, dbeta/dd = 1/(R sinh beta)
          return 4.0 * pi * eps0 * r.radius * s.dsum_dbeta / (r.radius * std::sinh(beta));
        } else {
          // central difference with one Richardson step on the sampled table
          const double h = std::max(1e-4 * d, 1e-12);
          auto diff = [&](double step) {
            return (capacitance(d + step) - capacitance(d - step)) / (2.0 * step);
          };
          const double d1 = diff(h), d2 = diff(0.5 * h);
          return (4.0 * d2 - d1) / 3.0;
        }
      },
      rep_);
}

double force_from_capacitance(const CapacitanceProfile& profile, double d, double V) {
  return 0.5 * std::abs(profile.derivative(d)) * V * V;
}

double calibration_alpha(double R, double d) {
  if (!(R > 0.0) || !(d > 0.0)) throw DomainError("calibration_alpha: R, d must be positive");
  return pi * eps0 * R / d;
}

double distance_from_alpha(double alpha, double R) {
  if (!(R > 0.0) || !(alpha > 0.0)) throw DomainError("distance_from_alpha: R, alpha must be positive");
  return pi * eps0 * R / alpha;
}

double hemisphere_repulsion(double q, double R) {
  if (!(R > 0.0)) throw DomainError("hemisphere_repulsion: R must be positive");
  return q * q / (32.0 * pi * eps0 * R * R);
}

}  // namespace casikit::electrostatics
