#include "casikit/lifshitz.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "casikit/constants.hpp"
#include "casikit/numerics/quadrature.hpp"

namespace casikit::lifshitz {
namespace {

using namespace casikit::constants;
using permittivity::PermittivityModel;
using permittivity::ZeroFreqBehavior;
using permittivity::ZeroFreqClass;
using std::numbers::pi;

enum class Kind { Energy, Pressure };

double gap_eps_of(const PermittivityModel& gap) {
  auto zb = permittivity::zero_frequency_behavior(gap);
  if (zb.cls != ZeroFreqClass::Finite)
    throw UnsupportedModelError("lifshitz: gap medium must have finite constant permittivity");
  return zb.eps_static;
}

// reflection of one plate at xi > 0, parameterized by kappa_g in the gap
struct PlateAtXi {
  double eps;       // eps(i xi); +inf for ideal mirrors
  double contrast;  // (eps_p - eps_g) xi^2 / c^2
  double eps_gap;

  Reflection at_kappa(double kg) const {
    if (std::isinf(eps)) return {-1.0, 1.0};
    const double kp = std::sqrt(kg * kg + contrast);
    return {(kg - kp) / (kg + kp), (eps * kg - eps_gap * kp) / (eps * kg + eps_gap * kp)};
  }
};

PlateAtXi plate_at_xi(const PermittivityModel& plate, double eps_gap, double xi) {
  const double e = permittivity::eval_imaginary(plate, xi);
  const double w = (xi / c) * (xi / c);
  return {e, (e - eps_gap) * w, eps_gap};
}

// zero-frequency reflection of one plate under a TE policy
struct PlateAtZero {
  // TE: r(kperp) = (k - sqrt(k^2 + q)) / (k + sqrt(k^2 + q)) with q >= 0;
  // q = 0 encodes r = 0, q = inf encodes r = -1.
  double q;
  double r_tm;

  double te_at(double k) const {
    if (q == 0.0) return 0.0;
    if (std::isinf(q)) return -1.0;
    const double kp = std::sqrt(k * k + q);
    return (k - kp) / (k + kp);
  }
};

PlateAtZero plate_at_zero(const PermittivityModel& plate, double eps_gap, TeZeroPolicy policy) {
  const auto zb = permittivity::zero_frequency_behavior(plate);
  const double inf = std::numeric_limits<double>::infinity();
  double r_tm;
  switch (zb.cls) {
    case ZeroFreqClass::Finite:
      r_tm = (zb.eps_static - eps_gap) / (zb.eps_static + eps_gap);
      break;
    default:
      r_tm = 1.0;
      break;
  }
  double q = 0.0;
  switch (policy) {
    case TeZeroPolicy::ForceExclude:
      q = 0.0;
      break;
    case TeZeroPolicy::FromModel:
      if (zb.cls == ZeroFreqClass::Ideal)
        q = inf;
      else if (zb.cls == ZeroFreqClass::PlasmaLike)
        q = (zb.omega_p / c) * (zb.omega_p / c);
      else
        q = 0.0;
      break;
    case TeZeroPolicy::ForceInclude:
      if (zb.cls == ZeroFreqClass::PlasmaLike)
        q = (zb.omega_p / c) * (zb.omega_p / c);
      else if (zb.cls == ZeroFreqClass::Finite)
        q = 0.0;  // nothing diverges; the natural value is zero
      else
        q = inf;  // let the permittivity diverge before xi -> 0
      break;
  }
  return {q, r_tm};
}

double mode_sum(Kind kind, double y, double x_te, double x_tm) {
  if (kind == Kind::Energy) return y * (std::log1p(-x_te) + std::log1p(-x_tm));
  return y * y * (x_te / (1.0 - x_te) + x_tm / (1.0 - x_tm));
}

struct Engine {
  const LifshitzProblem& p;
  double eps_gap;
  double tol;

  // Int_{y0}^inf of the mode sum at Matsubara frequency xi > 0, y = 2 kappa_g d
  double inner(double xi, Kind kind) const {
    const PlateAtXi a = plate_at_xi(p.plate_a, eps_gap, xi);
    const PlateAtXi b = plate_at_xi(p.plate_b, eps_gap, xi);
    const double y0 = 2.0 * std::sqrt(eps_gap) * xi * p.d / c;
    const double twod = 2.0 * p.d;
    auto f = [&](double y) {
      const double kg = y / twod;
      const Reflection ra = a.at_kappa(kg);
      const Reflection rb = b.at_kappa(kg);
      const double e = std::exp(-y);
      return mode_sum(kind, y, ra.te * rb.te * e, ra.tm * rb.tm * e);
    };
    numerics::TailOptions t;
    t.rel_tol = tol;
    return numerics::integrate_exp_tail(f, y0, 1.0, t);
  }

  double inner_zero(Kind kind) const {
    const PlateAtZero a = plate_at_zero(p.plate_a, eps_gap, p.te_zero_policy);
    const PlateAtZero b = plate_at_zero(p.plate_b, eps_gap, p.te_zero_policy);
    const double twod = 2.0 * p.d;
    const double r_tm = a.r_tm * b.r_tm;
    auto f = [&](double y) {
      const double k = y / twod;
      const double e = std::exp(-y);
      return mode_sum(kind, y, a.te_at(k) * b.te_at(k) * e, r_tm * e);
    };
    numerics::TailOptions t;
    t.rel_tol = tol;
    return numerics::integrate_exp_tail(f, 0.0, 1.0, t);
  }

  // Matsubara sum with the n = 0 term halved; relative cutoff 1e-9 in auto
  // mode, accumulated in ascending n.
  double matsubara_sum(Kind kind) const {
    const double xi1 = 2.0 * pi * k_b * p.T / hbar;
    double acc = 0.5 * inner_zero(kind);
    const int cap = p.convergence.n_max ? *p.convergence.n_max : 200000;
    for (int n = 1; n <= cap; ++n) {
      const double term = inner(n * xi1, kind);
      acc += term;
      if (!p.convergence.n_max && n >= 2 && std::abs(term) < 1e-9 * std::abs(acc) + 1e-300)
        return acc;
    }
    if (!p.convergence.n_max)
      throw ConvergenceError("lifshitz: Matsubara sum did not converge within budget", acc);
    return acc;
  }

  // T = 0: Int_0^inf dv of the inner integral, xi = c v / (2 d sqrt(eps_gap))
  double xi_integral(Kind kind) const {
    const double xi_scale = c / (2.0 * p.d * std::sqrt(eps_gap));
    auto g = [&](double v) { return inner(v * xi_scale, kind); };
    numerics::TailOptions t;
    t.rel_tol = tol;
    return numerics::integrate_exp_tail(g, 0.0, 1.0, t);
  }
};

Engine make_engine(const LifshitzProblem& p) {
  if (!(p.d > 0.0)) throw DomainError("lifshitz: separation must be positive");
  if (p.T < 0.0) throw DomainError("lifshitz: temperature must be >= 0");
  double tol = p.convergence.kperp_tolerance;
  if (!(tol > 0.0) || tol >= 1.0) throw DomainError("lifshitz: bad kperp tolerance");
  return {p, gap_eps_of(p.gap), tol};
}

}  // namespace

std::vector<double> matsubara_frequencies(double T, int n_max) {
  if (!(T > 0.0))
    throw DomainError("matsubara_frequencies: T must be positive (T = 0 uses the integral path)");
  if (n_max < 0) throw DomainError("matsubara_frequencies: n_max must be >= 0");
  std::vector<double> xi(static_cast<std::size_t>(n_max) + 1);
  const double xi1 = 2.0 * pi * k_b * T / hbar;
  for (int n = 0; n <= n_max; ++n) xi[static_cast<std::size_t>(n)] = n * xi1;
  return xi;
}

double thermal_weight(double omega, double T) {
  if (!(omega > 0.0) || !(T > 0.0)) throw DomainError("thermal_weight: omega and T must be positive");
  return 0.5 / std::tanh(hbar * omega / (2.0 * k_b * T));
}

Reflection reflection_coefficients(const PermittivityModel& plate, const PermittivityModel& gap,
                                   double xi, double kperp) {
  if (!(kperp > 0.0)) throw DomainError("reflection_coefficients: kperp must be positive");
  if (xi < 0.0) throw DomainError("reflection_coefficients: xi must be >= 0");
  const double eps_gap = gap_eps_of(gap);
  if (xi == 0.0) {
    const auto zb = permittivity::zero_frequency_behavior(plate);
    if (zb.cls == ZeroFreqClass::Divergent)
      throw DomainError(
          "reflection_coefficients: xi = 0 for a divergent model is defined only through the "
          "TE-n=0 policy path");
    const PlateAtZero z = plate_at_zero(plate, eps_gap, TeZeroPolicy::FromModel);
    return {z.te_at(kperp), z.r_tm};
  }
  const PlateAtXi a = plate_at_xi(plate, eps_gap, xi);
  const double kg = std::sqrt(eps_gap * (xi / c) * (xi / c) + kperp * kperp);
  return a.at_kappa(kg);
}

double free_energy_per_area(const LifshitzProblem& problem) {
  Engine e = make_engine(problem);
  if (problem.T > 0.0) {
    const double pref = k_b * problem.T / (8.0 * pi * problem.d * problem.d);
    return pref * e.matsubara_sum(Kind::Energy);
  }
  const double d = problem.d;
  const double pref = hbar * c / (32.0 * pi * pi * d * d * d * std::sqrt(e.eps_gap));
  return pref * e.xi_integral(Kind::Energy);
}

double casimir_pressure(const LifshitzProblem& problem) {
  Engine e = make_engine(problem);
  const double d = problem.d;
  if (problem.T > 0.0) {
    const double pref = k_b * problem.T / (8.0 * pi * d * d * d);
    return pref * e.matsubara_sum(Kind::Pressure);
  }
  const double pref = hbar * c / (32.0 * pi * pi * d * d * d * d * std::sqrt(e.eps_gap));
  return pref * e.xi_integral(Kind::Pressure);
}

double sphere_plane_force(const LifshitzProblem& problem, double R) {
  if (!(R > 0.0)) throw DomainError("sphere_plane_force: R must be positive");
  return -2.0 * pi * R * free_energy_per_area(problem);
}

EtaCorrection eta_first_order(double omega_p, double d) {
  if (!(omega_p > 0.0) || !(d > 0.0))
    throw DomainError("eta_first_order: omega_p and d must be positive");
  const double value = 1.0 - (16.0 / 3.0) * c / (omega_p * d);
  return {value, value >= 0.0};
}

bool repulsion_condition(const PermittivityModel& eps1, const PermittivityModel& eps2,
                         const PermittivityModel& gap, std::span<const double> xi_grid) {
  if (xi_grid.empty()) throw DomainError("repulsion_condition: empty xi grid");
  for (double xi : xi_grid) {
    const double e1 = permittivity::eval_imaginary(eps1, xi);
    const double e2 = permittivity::eval_imaginary(eps2, xi);
    const double eg = permittivity::eval_imaginary(gap, xi);
    if (!(e1 > eg && eg > e2)) return false;
  }
  return true;
}

}  // namespace casikit::lifshitz
