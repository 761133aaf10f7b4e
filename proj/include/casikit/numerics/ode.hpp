#pragma once

#include <functional>
#include <span>
#include <vector>

namespace casikit::numerics {

struct OdeOptions {
  double rel_tol = 1e-9;
  double abs_tol = 1e-15;
  double max_growth = 5.0;
  long max_steps = 5'000'000;
};

struct OdeSample {
  double t;
  double y;
  double dydt;  // right-hand side at (t, y)
};

/// Scalar initial-value problem dy/dt = f(t, y) integrated from t0 to t1
/// (either direction) with classic RK4 and step-doubling error control.
/// `t_grid` must run monotonically from t0 to t1; each grid point is hit
/// exactly and reported. Throws ConvergenceError when the step size
/// underflows (stiffness diagnostic in the message).
std::vector<OdeSample> rk4_adaptive(const std::function<double(double, double)>& f, double t0,
                                    double t1, double y0, std::span<const double> t_grid,
                                    const OdeOptions& opts = {});

}  // namespace casikit::numerics
