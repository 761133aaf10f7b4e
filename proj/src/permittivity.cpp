#include "casikit/permittivity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "casikit/constants.hpp"

namespace casikit::permittivity {
namespace {

using std::numbers::pi;

void check_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(what) + " must be positive");
}

// log-log interpolation/extrapolation of (xi, eps-1) on a tabulated grid
EpsSample eval_tabulated(const Tabulated& t, double xi) {
  const auto& xs = t.xi;
  const auto& es = t.eps;
  const double lx = std::log(xi);
  bool extrapolated = false;
  std::size_t i;
  if (xi <= xs.front()) {
    i = 0;
    extrapolated = xi < xs.front();
  } else if (xi >= xs.back()) {
    i = xs.size() - 2;
    extrapolated = xi > xs.back();
  } else {
    i = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), xi) - xs.begin()) - 1;
  }
  const double x0 = std::log(xs[i]), x1 = std::log(xs[i + 1]);
  const double y0 = std::log(std::max(es[i] - 1.0, 1e-300));
  const double y1 = std::log(std::max(es[i + 1] - 1.0, 1e-300));
  const double y = y0 + (y1 - y0) * (lx - x0) / (x1 - x0);
  return {1.0 + std::exp(y), extrapolated};
}

}  // namespace

PermittivityModel perfect_conductor() { return PerfectConductor{}; }

PermittivityModel constant_eps(double eps) {
  if (!(eps >= 1.0)) throw DomainError("constant_eps: eps must be >= 1");
  return ConstantEps{eps};
}

PermittivityModel plasma(double omega_p) {
  check_positive(omega_p, "plasma: omega_p");
  return Plasma{omega_p};
}

PermittivityModel drude(double omega_p, double gamma) {
  check_positive(omega_p, "drude: omega_p");
  check_positive(gamma, "drude: gamma");
  return Drude{omega_p, gamma};
}

PermittivityModel generalized_plasma(PermittivityModel base, double omega_p) {
  check_positive(omega_p, "generalized_plasma: omega_p");
  if (auto* d = std::get_if<Drude>(&base)) return GeneralizedPlasma{*d, omega_p};
  if (auto* t = std::get_if<Tabulated>(&base)) return GeneralizedPlasma{*t, omega_p};
  throw UnsupportedModelError("generalized_plasma: base must be Drude or Tabulated");
}

PermittivityModel conductor(double sigma) {
  check_positive(sigma, "conductor: sigma");
  return Conductor{sigma};
}

PermittivityModel tabulated(std::vector<double> xi, std::vector<double> eps) {
  if (xi.size() != eps.size()) throw FormatError("tabulated: grid size mismatch");
  if (xi.size() < 2) throw InsufficientDataError("tabulated: need >= 2 grid points");
  for (std::size_t i = 0; i < xi.size(); ++i) {
    if (!(xi[i] > 0.0)) throw FormatError("tabulated: xi must be positive");
    if (!(eps[i] >= 1.0)) throw FormatError("tabulated: eps must be >= 1");
    if (i > 0 && !(xi[i] > xi[i - 1])) throw FormatError("tabulated: xi must be strictly increasing");
    if (i > 0 && eps[i] > eps[i - 1] * (1.0 + 1e-12))
      throw FormatError("tabulated: eps must be non-increasing in xi");
  }
  Tabulated t{std::move(xi), std::move(eps)};
  return t;
}

EpsSample eval_imaginary_detail(const PermittivityModel& model, double xi) {
  if (!(xi > 0.0)) throw DomainError("eval_imaginary: xi must be positive");
  return std::visit(
      [&](const auto& m) -> EpsSample {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, PerfectConductor>) {
          return {std::numeric_limits<double>::infinity(), false};
        } else if constexpr (std::is_same_v<T, ConstantEps>) {
          return {m.eps, false};
        } else if constexpr (std::is_same_v<T, Plasma>) {
          return {1.0 + m.omega_p * m.omega_p / (xi * xi), false};
        } else if constexpr (std::is_same_v<T, Drude>) {
          return {1.0 + m.omega_p * m.omega_p / (xi * (xi + m.gamma)), false};
        } else if constexpr (std::is_same_v<T, GeneralizedPlasma>) {
          EpsSample base = std::visit(
              [&](const auto& b) { return eval_imaginary_detail(PermittivityModel{b}, xi); },
              m.base);
          base.value += m.omega_p * m.omega_p / (xi * xi);
          return base;
        } else if constexpr (std::is_same_v<T, Conductor>) {
          return {1.0 + m.sigma / (constants::eps0 * xi), false};
        } else {
          return eval_tabulated(m, xi);
        }
      },
      model);
}

double eval_imaginary(const PermittivityModel& model, double xi) {
  return eval_imaginary_detail(model, xi).value;
}

std::complex<double> eval_real(const PermittivityModel& model, double omega) {
  if (!(omega > 0.0)) throw DomainError("eval_real: omega must be positive");
  using C = std::complex<double>;
  return std::visit(
      [&](const auto& m) -> C {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ConstantEps>) {
          return C{m.eps, 0.0};
        } else if constexpr (std::is_same_v<T, Plasma>) {
          return C{1.0 - m.omega_p * m.omega_p / (omega * omega), 0.0};
        } else if constexpr (std::is_same_v<T, Drude>) {
          return 1.0 - m.omega_p * m.omega_p / (omega * C{omega, m.gamma});
        } else if constexpr (std::is_same_v<T, GeneralizedPlasma>) {
          if (!std::holds_alternative<Drude>(m.base))
            throw UnsupportedModelError("eval_real: generalized plasma over tabulated base");
          C base = eval_real(PermittivityModel{std::get<Drude>(m.base)}, omega);
          return base - m.omega_p * m.omega_p / (omega * omega);
        } else if constexpr (std::is_same_v<T, Conductor>) {
          return C{1.0, m.sigma / (constants::eps0 * omega)};
        } else {
          throw UnsupportedModelError(
              "eval_real: defined only for analytic models (not tabulated or ideal)");
        }
      },
      model);
}

PermittivityModel build_tabulated(std::span<const std::pair<double, double>> data) {
  if (data.size() < 8)
    throw InsufficientDataError("build_tabulated: need at least 8 samples");
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!(data[i].first > 0.0)) throw FormatError("build_tabulated: omega must be positive");
    if (!(data[i].second > 0.0)) throw FormatError("build_tabulated: eps'' must be positive");
    if (i > 0 && !(data[i].first > data[i - 1].first))
      throw FormatError("build_tabulated: omega must be strictly increasing");
  }
  const double w_lo = data.front().first, w_hi = data.back().first;
  // Drude low tail eps'' = A/w fitted to the two lowest points
  const double a_low = std::sqrt(data[0].first * data[0].second * data[1].first * data[1].second);
  // w^-3 high tail matched to the last point
  const double b_high = w_hi * w_hi * w_hi * data.back().second;

  // refined log grid over the data for the trapezoid; eps'' interpolated
  // log-log between samples (the transform is sensitive to this choice)
  const double decades = std::log10(w_hi / w_lo);
  const std::size_t m = std::min<std::size_t>(20000, std::max<std::size_t>(
      1200, static_cast<std::size_t>(decades * 96.0)));
  std::vector<double> lw(m + 1), le(m + 1);
  {
    const double l0 = std::log(w_lo), l1 = std::log(w_hi);
    std::size_t j = 0;
    for (std::size_t i = 0; i <= m; ++i) {
      lw[i] = l0 + (l1 - l0) * static_cast<double>(i) / static_cast<double>(m);
      const double w = std::exp(lw[i]);
      while (j + 2 < data.size() && data[j + 1].first < w) ++j;
      const double x0 = std::log(data[j].first), x1 = std::log(data[j + 1].first);
      const double y0 = std::log(data[j].second), y1 = std::log(data[j + 1].second);
      le[i] = y0 + (y1 - y0) * (std::clamp(lw[i], x0, x1) - x0) / (x1 - x0);
    }
  }

  auto tail_high = [&](double xi) {
    // Int_W^inf dw / (w^2 (w^2 + xi^2)); series in (xi/W)^2 below W/2 to
    // avoid the cancellation in the closed form when xi << W
    const double W = w_hi;
    if (xi < 0.5 * W) {
      const double q = (xi / W) * (xi / W);
      double sum = 0.0, p = 1.0;
      for (int k = 0; k < 200; ++k) {
        const double term = p / (3.0 + 2.0 * k);
        sum += term;
        p *= -q;
        if (std::abs(term) < 1e-16 * std::abs(sum)) break;
      }
      return sum / (W * W * W);
    }
    return (1.0 / (xi * xi)) * (1.0 / W - (pi / 2.0 - std::atan(W / xi)) / xi);
  };

  auto eps_at = [&](double xi) {
    const double xi2 = xi * xi;
    // central trapezoid in log w of g = w^2 eps'' / (w^2 + xi^2)
    double mid = 0.0;
    double g_prev = 0.0;
    for (std::size_t i = 0; i <= m; ++i) {
      const double w = std::exp(lw[i]);
      const double g = w * w * std::exp(le[i]) / (w * w + xi2);
      if (i > 0) mid += 0.5 * (g + g_prev) * (lw[i] - lw[i - 1]);
      g_prev = g;
    }
    const double low = (a_low / xi) * std::atan(w_lo / xi);
    const double high = b_high * tail_high(xi);
    return 1.0 + (2.0 / pi) * (low + mid + high);
  };

  const int per_decade = 24;
  const int npts = std::max(2, static_cast<int>(decades * per_decade) + 1);
  std::vector<double> xi_grid(npts), eps_grid(npts);
  for (int i = 0; i < npts; ++i) {
    const double t = static_cast<double>(i) / (npts - 1);
    xi_grid[i] = w_lo * std::pow(w_hi / w_lo, t);
    eps_grid[i] = eps_at(xi_grid[i]);
  }
  // the dispersion integral of positive eps'' is non-increasing by
  // construction; clip tiny quadrature wiggles so the invariant holds
  for (int i = 1; i < npts; ++i) eps_grid[i] = std::min(eps_grid[i], eps_grid[i - 1]);
  return tabulated(std::move(xi_grid), std::move(eps_grid));
}

ZeroFreqBehavior zero_frequency_behavior(const PermittivityModel& model) {
  return std::visit(
      [](const auto& m) -> ZeroFreqBehavior {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, PerfectConductor>) {
          return {ZeroFreqClass::Ideal};
        } else if constexpr (std::is_same_v<T, ConstantEps>) {
          return {ZeroFreqClass::Finite, 0.0, m.eps};
        } else if constexpr (std::is_same_v<T, Plasma>) {
          return {ZeroFreqClass::PlasmaLike, m.omega_p};
        } else if constexpr (std::is_same_v<T, GeneralizedPlasma>) {
          return {ZeroFreqClass::PlasmaLike, m.omega_p};
        } else {
          // Drude, Conductor and tabulated data diverge slower than xi^-2
          return {ZeroFreqClass::Divergent};
        }
      },
      model);
}

}  // namespace casikit::permittivity
