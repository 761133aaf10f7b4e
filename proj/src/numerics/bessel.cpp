#include "casikit/numerics/bessel.hpp"

#include <cmath>
#include <numbers>

namespace casikit::numerics {
namespace {

// J1(x) = sqrt(2/(pi x)) [ P(w) cos(chi) - (8/x) Q(w) sin(chi) ],
// chi = x - 3pi/4, w = (8/x)^2. P and Q are least-squares polynomial fits to
// the exact Hankel amplitude functions on x in [8, inf), accurate to ~1e-16.
constexpr double kP[] = {
    1.000000000000000004,     0.001831054687498673451,  -0.00003520399324259655296,
    2.580994081095986552e-6,  -4.10290920754101294e-7,  1.130795637698486447e-7,
    -4.722297272918832964e-8, 2.610344562443889915e-8,  -1.599392059188836288e-8,
    8.979116578291791473e-9,  -3.896357746017572392e-9, 1.095074910469140159e-9,
    -1.452262091423804109e-10};

constexpr double kQ[] = {
    0.04687499999999999589,   -0.0002002716064438635685, 8.47096080742712935e-6,
    -9.505880095171815293e-7, 2.029948826192444744e-7,   -7.011043986705460021e-8,
    3.493245962495272497e-8,  -2.197130410188722246e-8,  1.463750771785787836e-8,
    -8.638745410714499361e-9, 3.861109714801751426e-9,   -1.105039735173908645e-9,
    1.482800170545926036e-10};

double poly(const double* c, int n, double w) {
  double s = c[n - 1];
  for (int i = n - 2; i >= 0; --i) s = s * w + c[i];
  return s;
}

}  // namespace

double bessel_j1(double x) {
  const double ax = std::abs(x);
  if (ax <= 8.0) {
    // J1(x) = (x/2) sum_m (-1)^m (x^2/4)^m / (m! (m+1)!)
    const double q = 0.25 * x * x;
    double term = 0.5 * x;
    double sum = term;
    for (int m = 1; m <= 40; ++m) {
      term *= -q / (static_cast<double>(m) * (m + 1));
      sum += term;
      if (std::abs(term) < 1e-18 * (std::abs(sum) + 1e-300)) break;
    }
    return sum;
  }
  const double z = 8.0 / ax;
  const double w = z * z;
  const double p = poly(kP, 13, w);
  const double q = z * poly(kQ, 13, w);
  const double invsqrt2 = 0.7071067811865475244;
  // cos(chi), sin(chi) with chi = ax - 3pi/4 expanded to avoid forming chi
  const double cx = std::cos(ax), sx = std::sin(ax);
  const double cchi = invsqrt2 * (sx - cx);
  const double schi = -invsqrt2 * (sx + cx);
  double v = std::sqrt(2.0 / (std::numbers::pi * ax)) * (p * cchi - q * schi);
  return x < 0.0 ? -v : v;
}

}  // namespace casikit::numerics
