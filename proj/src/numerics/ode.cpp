#include "casikit/numerics/ode.hpp"

#include <algorithm>
#include <cmath>

#include "casikit/errors.hpp"

namespace casikit::numerics {
namespace {

double rk4_step(const std::function<double(double, double)>& f, double t, double y, double h) {
  const double k1 = f(t, y);
  const double k2 = f(t + 0.5 * h, y + 0.5 * h * k1);
  const double k3 = f(t + 0.5 * h, y + 0.5 * h * k2);
  const double k4 = f(t + h, y + h * k3);
  return y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

std::vector<OdeSample> rk4_adaptive(const std::function<double(double, double)>& f, double t0,
                                    double t1, double y0, std::span<const double> t_grid,
                                    const OdeOptions& opts) {
  const double dir = t1 >= t0 ? 1.0 : -1.0;
  std::vector<OdeSample> out;
  out.reserve(t_grid.size());

  double t = t0, y = y0;
  double h = dir * std::max(1e-12 * std::abs(t1 - t0), std::abs(t1 - t0) / 64.0);
  const double h_floor = 1e-14 * std::abs(t1 - t0);
  long steps = 0;
  std::size_t gi = 0;

  // report grid points at or before the current position
  auto flush = [&](double tc, double yc) {
    while (gi < t_grid.size() && dir * (t_grid[gi] - tc) <= 0.0) {
      out.push_back({t_grid[gi], yc, f(t_grid[gi], yc)});
      ++gi;
    }
  };
  if (!t_grid.empty() && t_grid.front() == t0) {
    out.push_back({t0, y0, f(t0, y0)});
    ++gi;
  }

  while (dir * (t1 - t) > 0.0) {
    if (++steps > opts.max_steps)
      throw ConvergenceError("rk4_adaptive: step budget exhausted", y);
    // do not overshoot the next requested grid point or the endpoint
    double limit = gi < t_grid.size() ? t_grid[gi] : t1;
    if (dir * (t + h - limit) > 0.0) h = limit - t;

    const double y_full = rk4_step(f, t, y, h);
    const double y_mid = rk4_step(f, t, y, 0.5 * h);
    const double y_half = rk4_step(f, t + 0.5 * h, y_mid, 0.5 * h);
    const double err = std::abs(y_half - y_full) / 15.0;
    const double scale = opts.abs_tol + opts.rel_tol * std::max(std::abs(y), std::abs(y_half));

    if (err <= scale) {
      t += h;
      y = y_half + (y_half - y_full) / 15.0;  // local extrapolation, 5th order
      flush(t, y);
      const double grow =
          err > 0.0 ? std::min(opts.max_growth, 0.9 * std::pow(scale / err, 0.2)) : opts.max_growth;
      h *= std::max(grow, 1.0);
    } else {
      h *= std::max(0.1, 0.9 * std::pow(scale / err, 0.25));
    }
    if (std::abs(h) < h_floor)
      throw ConvergenceError(
          "rk4_adaptive: step size underflow at t = " + std::to_string(t) +
              " (problem too stiff for the requested tolerance)",
          y);
  }
  flush(t, y);
  return out;
}

}  // namespace casikit::numerics
