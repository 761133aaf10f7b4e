#include "casikit/numerics/quadrature.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "casikit/errors.hpp"

namespace casikit::numerics {
namespace {

// Gauss-Legendre nodes/weights on [-1, 1], computed once by Newton iteration
// on the Legendre recurrence (machine precision for these small orders).
template <int N>
struct GaussRule {
  std::array<double, N> x{};
  std::array<double, N> w{};
  GaussRule() {
    for (int i = 0; i < (N + 1) / 2; ++i) {
      double xi = std::cos(std::numbers::pi * (i + 0.75) / (N + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = xi;
        for (int k = 2; k <= N; ++k) {
          double p2 = ((2 * k - 1) * xi * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = N * (xi * p1 - p0) / (xi * xi - 1.0);
        double dx = p1 / dp;
        xi -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      x[i] = -xi;
      x[N - 1 - i] = xi;
      double wi = 2.0 / ((1.0 - xi * xi) * dp * dp);
      w[i] = wi;
      w[N - 1 - i] = wi;
    }
  }
};

const GaussRule<7> g7;
const GaussRule<15> g15;

template <int N>
double apply(const GaussRule<N>& r, const std::function<double(double)>& f, double a, double b) {
  const double h = 0.5 * (b - a), m = 0.5 * (a + b);
  double s = 0.0;
  for (int i = 0; i < N; ++i) s += r.w[i] * f(m + h * r.x[i]);
  return s * h;
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          const QuadOptions& opts) {
  if (a == b) return 0.0;
  struct Seg {
    double a, b, est, err;
  };
  auto eval = [&](double lo, double hi) {
    double i15 = apply(g15, f, lo, hi);
    double i7 = apply(g7, f, lo, hi);
    return Seg{lo, hi, i15, std::abs(i15 - i7)};
  };
  std::vector<Seg> stack{eval(a, b)};
  double total = stack[0].est;
  double acc = 0.0;
  int splits = 0;
  while (!stack.empty()) {
    Seg s = stack.back();
    stack.pop_back();
    double tol = std::max(opts.abs_tol, opts.rel_tol * std::abs(total));
    // distribute tolerance by interval length
    double local = tol * std::abs(s.b - s.a) / std::abs(b - a);
    if (s.err <= std::max(local, 1e-300) || std::abs(s.b - s.a) < 1e-15 * std::abs(b - a)) {
      acc += s.est;
      continue;
    }
    if (++splits > opts.max_subdivisions)
      throw ConvergenceError("integrate_adaptive: subdivision budget exhausted", acc + s.est);
    double mid = 0.5 * (s.a + s.b);
    Seg left = eval(s.a, mid), right = eval(mid, s.b);
    total += left.est + right.est - s.est;
    // push right first so left is processed first (ascending order)
    stack.push_back(right);
    stack.push_back(left);
  }
  return acc;
}

double integrate_exp_tail(const std::function<double(double)>& f, double a, double decay_scale,
                          const TailOptions& opts) {
  double width = opts.panel_width > 0.0 ? opts.panel_width : 6.0 * decay_scale;
  QuadOptions q;
  q.rel_tol = 0.25 * opts.rel_tol;
  double acc = 0.0;
  int quiet = 0;
  for (int p = 0; p < opts.max_panels; ++p) {
    double lo = a + p * width, hi = lo + width;
    q.abs_tol = 0.1 * opts.rel_tol * std::abs(acc);
    double part = integrate_adaptive(f, lo, hi, q);
    acc += part;
    if (std::abs(part) < opts.rel_tol * std::abs(acc) || (acc == 0.0 && part == 0.0)) {
      if (++quiet >= opts.quiet_panels) return acc;
    } else {
      quiet = 0;
    }
  }
  throw ConvergenceError("integrate_exp_tail: panel budget exhausted", acc);
}

}  // namespace casikit::numerics
