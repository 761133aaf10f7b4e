#include "casikit/patches.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "casikit/constants.hpp"
#include "casikit/numerics/bessel.hpp"
#include "casikit/numerics/quadrature.hpp"

namespace casikit::patches {
namespace {

using namespace casikit::constants;
using std::numbers::pi;

// coth(x) - 1 = 2 e^{-2x} / (1 - e^{-2x}), accurate for large x
double cothm1(double x) {
  const double e = std::exp(-2.0 * x);
  return 2.0 * e / (1.0 - e);
}

double tabulated_at(const TabulatedSpectrum& t, double k, bool zero_outside) {
  const auto& s = t.samples;
  if (k < s.front().first || k > s.back().first) {
    if (zero_outside) return 0.0;
    throw RangeError("spectrum_eval: k outside tabulated spectrum");
  }
  auto it = std::upper_bound(s.begin(), s.end(), k,
                             [](double v, const auto& p) { return v < p.first; });
  std::size_t i = static_cast<std::size_t>(it - s.begin());
  i = std::min(std::max<std::size_t>(i, 1), s.size() - 1) - 1;
  const double t01 = (k - s[i].first) / (s[i + 1].first - s[i].first);
  return s[i].second * (1.0 - t01) + s[i + 1].second * t01;
}

}  // namespace

PatchSpectrum single_mode(double v0, double k) {
  if (v0 < 0.0 || !(k > 0.0)) throw DomainError("single_mode: need v0 >= 0, k > 0");
  return SingleMode{v0, k};
}

PatchSpectrum top_hat(double v0, double lambda_patch) {
  if (v0 < 0.0 || !(lambda_patch > 0.0)) throw DomainError("top_hat: need v0 >= 0, lambda > 0");
  return TopHatCorrelation{v0, lambda_patch};
}

PatchSpectrum tabulated_spectrum(std::vector<std::pair<double, double>> samples) {
  if (samples.size() < 2) throw InsufficientDataError("tabulated_spectrum: need >= 2 samples");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!(samples[i].first > 0.0) || samples[i].second < 0.0)
      throw FormatError("tabulated_spectrum: need k > 0 and S >= 0");
    if (i > 0 && !(samples[i].first > samples[i - 1].first))
      throw FormatError("tabulated_spectrum: k must be strictly increasing");
  }
  return TabulatedSpectrum{std::move(samples)};
}

double spectrum_eval(const PatchSpectrum& spec, double k) {
  if (!(k > 0.0)) throw DomainError("spectrum_eval: k must be positive");
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SingleMode>) {
          if (s.v0 == 0.0) return 0.0;
          return k == s.k ? std::numeric_limits<double>::infinity() : 0.0;
        } else if constexpr (std::is_same_v<T, TopHatCorrelation>) {
          const double x = s.lambda_patch * k;
          const double j = x < 1e-8 ? 0.5 : numerics::bessel_j1(x) / x;
          return s.v0 * s.v0 * s.lambda_patch * s.lambda_patch * j;
        } else {
          return tabulated_at(s, k, false);
        }
      },
      spec);
}

double single_mode_energy_per_area(double v0, double k, double d) {
  if (!(k > 0.0) || !(d > 0.0)) throw DomainError("single_mode_energy_per_area: k, d must be positive");
  return 0.25 * eps0 * k * v0 * v0 * cothm1(k * d);
}

double patch_force_sphere_plane(const PatchSpectrum& spec, double R, double d, double tol) {
  if (!(R > 0.0) || !(d > 0.0)) throw DomainError("patch_force_sphere_plane: R, d must be positive");
  if (!(tol > 0.0) || tol >= 1.0) throw DomainError("patch_force_sphere_plane: bad tolerance");
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SingleMode>) {
          // point mass v0^2 at k: F = pi eps0 R k v0^2 (coth(kd) - 1)
          return pi * eps0 * R * s.k * s.v0 * s.v0 * cothm1(s.k * d);
        } else if constexpr (std::is_same_v<T, TopHatCorrelation>) {
          if (s.v0 == 0.0) return 0.0;
          // u = k lambda:
          // F = (pi eps0 R V0^2 / lambda) Int_0^inf 2 u J1(u) e^{-su}/(1-e^{-su}) du,
          // s = 2d/lambda
          const double sratio = 2.0 * d / s.lambda_patch;
          auto f = [&](double u) {
            const double e = std::exp(-sratio * u);
            return 2.0 * u * numerics::bessel_j1(u) * e / (1.0 - e);
          };
          numerics::TailOptions t;
          t.rel_tol = tol;
          // resolve both the J1 oscillation and the exponential decay
          t.panel_width = std::min(2.0 * pi, 6.0 / sratio);
          t.quiet_panels = std::max(3, static_cast<int>(2.0 * pi / t.panel_width));
          const double integral = numerics::integrate_exp_tail(f, 0.0, 1.0 / sratio, t);
          return pi * eps0 * R * s.v0 * s.v0 / s.lambda_patch * integral;
        } else {
          // u = k d over the tabulated support, S = 0 outside
          const double klo = s.samples.front().first, khi = s.samples.back().first;
          auto f = [&](double u) {
            const double k = u / d;
            if (k < klo || k > khi) return 0.0;
            return k * k * cothm1(u) * tabulated_at(s, k, true) / d;
          };
          numerics::QuadOptions q;
          q.rel_tol = tol;
          const double integral =
              numerics::integrate_adaptive(f, klo * d, khi * d, q);
          return pi * eps0 * R * integral;
        }
      },
      spec);
}

}  // namespace casikit::patches
