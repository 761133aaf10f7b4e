#pragma once

namespace casikit::numerics {

/// Bessel function of the first kind, order 1. Power series for |x| <= 8,
/// Hankel asymptotic form with fitted amplitude polynomials above; relative
/// accuracy ~1e-12 or better away from zeros.
double bessel_j1(double x);

}  // namespace casikit::numerics
