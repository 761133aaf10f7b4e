#pragma once

#include "casikit/constants.hpp"
#include "casikit/errors.hpp"

namespace casikit {

/// Distance accuracy required to reach a relative force accuracy for a
/// power-law force F ~ d^n:  |dF/F| = |n| |dd/d|, so dd = f d / |n|.
/// Throws DomainError for n = 0 (no distance sensitivity).
double error_budget(double n, double d, double force_fraction);

}  // namespace casikit
