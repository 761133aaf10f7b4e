#pragma once

#include <functional>
#include <span>
#include <vector>

namespace casikit::numerics {

struct LinearFit {
  std::vector<double> beta;  // fitted coefficients
  std::vector<double> cov;   // row-major p x p covariance
  double chi2 = 0.0;
  int dof = 0;
};

/// Weighted linear least squares y ~ sum_j beta_j * columns[j].
/// `sigma` may be empty (unit weights). With explicit sigmas the covariance
/// is (A^T W A)^-1; with unit weights it is scaled by chi2/dof.
/// Throws FitError on rank deficiency.
LinearFit fit_linear_weighted(std::span<const double> y, std::span<const double> sigma,
                              const std::vector<std::vector<double>>& columns);

struct LmOptions {
  int max_iter = 300;
  double step_tol = 1e-14;
  double grad_tol = 1e-14;
  double lambda0 = 1e-3;
};

struct LmResult {
  std::vector<double> params;
  std::vector<double> cov;  // row-major p x p, from (J^T J)^-1 at the optimum
  double chi2 = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Levenberg-Marquardt minimization of |r(p)|^2 for small parameter counts.
/// `residuals(p)` returns the weighted residual vector; `jacobian(p)` its
/// derivative, row-major n x p.
LmResult levenberg_marquardt(
    const std::function<std::vector<double>(std::span<const double>)>& residuals,
    const std::function<std::vector<double>(std::span<const double>)>& jacobian,
    std::span<const double> init, const LmOptions& opts = {});

/// Slope of log|f| against log d by unweighted linear fit; diagnostic for
/// power-law behavior.
double loglog_slope(std::span<const double> d, std::span<const double> f);

}  // namespace casikit::numerics
