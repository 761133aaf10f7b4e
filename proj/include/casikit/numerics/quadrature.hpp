#pragma once

#include <functional>

namespace casikit::numerics {

struct QuadOptions {
  double rel_tol = 1e-8;
  double abs_tol = 0.0;
  int max_subdivisions = 4000;
};

/// Adaptive quadrature on [a, b]. Each interval is estimated with 15-point
/// and 7-point Gauss-Legendre rules; intervals whose difference exceeds the
/// local tolerance are bisected. Subdivision order is fixed, so results are
/// bit-stable for a given input.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          const QuadOptions& opts = {});

struct TailOptions {
  double rel_tol = 1e-8;
  double panel_width = 0.0;  // 0 -> chosen from decay_scale
  int max_panels = 200000;
  int quiet_panels = 3;  // consecutive negligible panels required to stop
};

/// Integral over [a, inf) of an integrand decaying roughly like
/// exp(-y/decay_scale). Panels of fixed width are summed in ascending order,
/// each refined adaptively, until `quiet_panels` consecutive panels
/// contribute less than rel_tol of the accumulated value.
double integrate_exp_tail(const std::function<double(double)>& f, double a,
                          double decay_scale, const TailOptions& opts = {});

}  // namespace casikit::numerics
