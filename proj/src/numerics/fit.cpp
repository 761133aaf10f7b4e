#include "casikit/numerics/fit.hpp"

#include <algorithm>
#include <cmath>

#include "casikit/errors.hpp"

namespace casikit::numerics {
namespace {

// Solve M x = b for small dense symmetric-positive M (row-major, n x n) by
// Gaussian elimination with partial pivoting. Returns false if singular.
bool solve_dense(std::vector<double> m, std::vector<double> b, std::size_t n,
                 std::vector<double>& x) {
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(m[r * n + col]) > std::abs(m[piv * n + col])) piv = r;
    if (std::abs(m[piv * n + col]) < 1e-300) return false;
    if (piv != col) {
      for (std::size_t k = 0; k < n; ++k) std::swap(m[col * n + k], m[piv * n + k]);
      std::swap(b[col], b[piv]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      double fac = m[r * n + col] / m[col * n + col];
      for (std::size_t k = col; k < n; ++k) m[r * n + k] -= fac * m[col * n + k];
      b[r] -= fac * b[col];
    }
  }
  x.assign(n, 0.0);
  for (std::size_t ri = n; ri-- > 0;) {
    double s = b[ri];
    for (std::size_t k = ri + 1; k < n; ++k) s -= m[ri * n + k] * x[k];
    x[ri] = s / m[ri * n + ri];
  }
  return true;
}

bool invert_dense(const std::vector<double>& m, std::size_t n, std::vector<double>& inv) {
  inv.assign(n * n, 0.0);
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<double> e(n, 0.0), x;
    e[c] = 1.0;
    if (!solve_dense(m, e, n, x)) return false;
    for (std::size_t r = 0; r < n; ++r) inv[r * n + c] = x[r];
  }
  return true;
}

}  // namespace

LinearFit fit_linear_weighted(std::span<const double> y, std::span<const double> sigma,
                              const std::vector<std::vector<double>>& columns) {
  const std::size_t n = y.size();
  const std::size_t p = columns.size();
  if (p == 0 || n < p) throw FitError("fit_linear_weighted: fewer points than parameters");
  for (const auto& c : columns)
    if (c.size() != n) throw FitError("fit_linear_weighted: column length mismatch");
  const bool weighted = !sigma.empty();
  if (weighted && sigma.size() != n) throw FitError("fit_linear_weighted: sigma length mismatch");

  std::vector<double> ata(p * p, 0.0), atb(p, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double wi = 1.0;
    if (weighted) {
      if (!(sigma[i] > 0.0)) throw FitError("fit_linear_weighted: nonpositive sigma");
      wi = 1.0 / (sigma[i] * sigma[i]);
    }
    for (std::size_t a = 0; a < p; ++a) {
      atb[a] += wi * columns[a][i] * y[i];
      for (std::size_t b = a; b < p; ++b) ata[a * p + b] += wi * columns[a][i] * columns[b][i];
    }
  }
  for (std::size_t a = 0; a < p; ++a)
    for (std::size_t b = 0; b < a; ++b) ata[a * p + b] = ata[b * p + a];

  // scale-aware rank check on the normal matrix diagonal
  for (std::size_t a = 0; a < p; ++a)
    if (!(ata[a * p + a] > 0.0)) throw FitError("fit_linear_weighted: degenerate design");

  LinearFit fit;
  if (!solve_dense(ata, atb, p, fit.beta))
    throw FitError("fit_linear_weighted: singular normal equations");
  std::vector<double> inv;
  if (!invert_dense(ata, p, inv)) throw FitError("fit_linear_weighted: singular normal equations");

  // condition guard: a collinear design survives pivoting only with a huge
  // amplification factor; detect via |I - A^-1 A| residual
  double worst = 0.0;
  for (std::size_t r = 0; r < p; ++r)
    for (std::size_t cidx = 0; cidx < p; ++cidx) {
      double s = 0.0;
      for (std::size_t k = 0; k < p; ++k) s += inv[r * p + k] * ata[k * p + cidx];
      worst = std::max(worst, std::abs(s - (r == cidx ? 1.0 : 0.0)));
    }
  if (worst > 1e-4) throw FitError("fit_linear_weighted: design matrix numerically rank-deficient");

  for (std::size_t i = 0; i < n; ++i) {
    double model = 0.0;
    for (std::size_t a = 0; a < p; ++a) model += fit.beta[a] * columns[a][i];
    double r = y[i] - model;
    double wi = weighted ? 1.0 / (sigma[i] * sigma[i]) : 1.0;
    fit.chi2 += wi * r * r;
  }
  fit.dof = static_cast<int>(n - p);
  fit.cov = inv;
  if (!weighted && fit.dof > 0) {
    double s2 = fit.chi2 / fit.dof;
    for (auto& v : fit.cov) v *= s2;
  }
  return fit;
}

LmResult levenberg_marquardt(
    const std::function<std::vector<double>(std::span<const double>)>& residuals,
    const std::function<std::vector<double>(std::span<const double>)>& jacobian,
    std::span<const double> init, const LmOptions& opts) {
  LmResult res;
  res.params.assign(init.begin(), init.end());
  const std::size_t p = res.params.size();

  auto chi2_of = [&](const std::vector<double>& r) {
    double s = 0.0;
    for (double v : r) s += v * v;
    return s;
  };

  std::vector<double> r = residuals(res.params);
  res.chi2 = chi2_of(r);
  double lambda = opts.lambda0;

  for (res.iterations = 1; res.iterations <= opts.max_iter; ++res.iterations) {
    const std::vector<double> J = jacobian(res.params);
    const std::size_t n = r.size();
    std::vector<double> jtj(p * p, 0.0), jtr(p, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t a = 0; a < p; ++a) {
        jtr[a] += J[i * p + a] * r[i];
        for (std::size_t b = a; b < p; ++b) jtj[a * p + b] += J[i * p + a] * J[i * p + b];
      }
    for (std::size_t a = 0; a < p; ++a)
      for (std::size_t b = 0; b < a; ++b) jtj[a * p + b] = jtj[b * p + a];

    double gmax = 0.0;
    for (double g : jtr) gmax = std::max(gmax, std::abs(g));
    if (gmax < opts.grad_tol * (1.0 + res.chi2)) {
      res.converged = true;
      break;
    }
    // descent direction: delta = -(J^T J + lambda D)^-1 J^T r
    for (auto& g : jtr) g = -g;

    bool stepped = false;
    for (int tries = 0; tries < 60; ++tries) {
      std::vector<double> damped = jtj;
      for (std::size_t a = 0; a < p; ++a) damped[a * p + a] += lambda * (jtj[a * p + a] + 1e-300);
      std::vector<double> step;
      if (!solve_dense(damped, jtr, p, step)) {
        lambda *= 10.0;
        continue;
      }
      std::vector<double> trial = res.params;
      double snorm = 0.0, pnorm = 0.0;
      for (std::size_t a = 0; a < p; ++a) {
        trial[a] += step[a];
        snorm += step[a] * step[a];
        pnorm += trial[a] * trial[a];
      }
      std::vector<double> rt = residuals(trial);
      double c2 = chi2_of(rt);
      if (c2 <= res.chi2) {
        bool tiny = std::sqrt(snorm) < opts.step_tol * (std::sqrt(pnorm) + opts.step_tol) ||
                    res.chi2 - c2 < opts.step_tol * (res.chi2 + 1e-300);
        res.params = std::move(trial);
        r = std::move(rt);
        res.chi2 = c2;
        lambda = std::max(lambda * 0.3, 1e-14);
        stepped = true;
        if (tiny) res.converged = true;
        break;
      }
      lambda *= 10.0;
      if (lambda > 1e14) break;
    }
    if (!stepped || res.converged) break;
  }

  // covariance from the undamped normal matrix at the optimum
  const std::vector<double> J = jacobian(res.params);
  std::vector<double> jtj(p * p, 0.0);
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t a = 0; a < p; ++a)
      for (std::size_t b = 0; b < p; ++b) jtj[a * p + b] += J[i * p + a] * J[i * p + b];
  if (!invert_dense(jtj, p, res.cov)) res.cov.assign(p * p, 0.0);
  return res;
}

double loglog_slope(std::span<const double> d, std::span<const double> f) {
  if (d.size() != f.size() || d.size() < 2) throw FitError("loglog_slope: need >= 2 points");
  std::vector<double> lx(d.size()), ly(d.size()), ones(d.size(), 1.0);
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!(d[i] > 0.0) || f[i] == 0.0) throw DomainError("loglog_slope: needs positive d, nonzero f");
    lx[i] = std::log(d[i]);
    ly[i] = std::log(std::abs(f[i]));
  }
  auto fit = fit_linear_weighted(ly, {}, {ones, lx});
  return fit.beta[1];
}

}  // namespace casikit::numerics
