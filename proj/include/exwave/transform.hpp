#pragma once

// Distorted Fourier transform for radial functions on the exterior of the unit
// ball with Dirichlet boundary. The generalized eigenfunctions are
// e_lambda(r) = sin(lambda (r - 1)) / r, so on the uniform rho-grid the pair
// reduces to a type-I discrete sine transform of g = r f:
//
//   F_k = sqrt(2/pi) drho    sum_j sin(lambda_k rho_j) r_j f_j
//   f_j = sqrt(2/pi) (pi/L)  sum_k sin(lambda_k rho_j) F_k / r_j
//
// The two maps are exact inverses and the discrete Parseval constant is 1.

#include <functional>
#include <span>

#include "exwave/core.hpp"

namespace exwave {

using Symbol = std::function<double(double)>;

SpectralField forward(const RadialField& f);
RadialField inverse(const SpectralField& F);

/// |‖f‖² - (pi/L) sum_k F_k²| / ‖f‖², or 0 for the zero field.
double parseval_residual(const RadialField& f);

/// m(sqrt(-Delta)) f. Throws std::invalid_argument if m is non-finite at a grid frequency.
RadialField apply_symbol(const RadialField& f, const Symbol& m);

/// Multiplies each coefficient by m(lambda_k) in place.
void scale_by_symbol(SpectralField& F, const Symbol& m);

/// (pi/L) sum_k F_k², the spectral side of Parseval.
double spectral_l2_squared(const SpectralField& F);

namespace detail {

/// out_k = sum_{j=1}^{m} in_j sin(pi j k / (m + 1)), k = 1..m. in and out may alias.
void dst1(std::span<const double> in, std::span<double> out);

}  // namespace detail

}  // namespace exwave
