#pragma once

// Initial-data profiles used by the experiments and tests.

#include "exwave/calculus.hpp"
#include "exwave/core.hpp"

namespace exwave::profiles {

/// u(r) = A exp(-((rho - center) / width)²).
RadialField gaussian_bump(const RadialGrid& grid, double amplitude, double center, double width);

/// u(r) = (r - 1) exp(-(r - 1)) / r; transform sqrt(2/pi) 2 lambda / (1 + lambda²)².
RadialField exp_profile(const RadialGrid& grid);

/// u(r) = sin(pi (r - 1)) / r on 1 <= r <= 2, else 0.
RadialField sine_arch(const RadialGrid& grid);

/// Smooth compact window exp(1 - 1/(1 - x²)), x = (rho - center) / halfwidth.
double window(double rho, double center, double halfwidth);

/// Low-regularity datum: r u = A window(rho) |rho - center|^beta with beta = s - 1/2 + delta,
/// then band-limited by phi_{band}. The transform decays like lambda^{-(s + 1/2 + delta)},
/// so u lies in H^s but its H¹ norm grows with the frequency cutoff.
RadialField rough_profile(const RadialGrid& grid, double amplitude, double s, double delta, double center,
                          double halfwidth, Dyadic band);

/// Largest dyadic N with 6N <= lambda_max, so the cube of a phi_N-limited field is not aliased.
Dyadic cubic_safe_band(const RadialGrid& grid);

}  // namespace exwave::profiles
