#include "casikit/core.hpp"

#include <cmath>

namespace casikit {

double error_budget(double n, double d, double force_fraction) {
  if (n == 0.0) throw DomainError("error_budget: n = 0 has no distance sensitivity");
  if (!(d > 0.0)) throw DomainError("error_budget: d must be positive");
  if (!(force_fraction > 0.0)) throw DomainError("error_budget: force fraction must be positive");
  return force_fraction * d / std::abs(n);
}

}  // namespace casikit
