#pragma once

// Exact spectral linear evolution and the dispersive / Strichartz probes.

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "exwave/calculus.hpp"
#include "exwave/core.hpp"

namespace exwave {

/// U(t) f = exp(i t sqrt(-Delta)) f.
ComplexRadialField half_wave(const RadialField& f, double t);
ComplexRadialField half_wave(const ComplexRadialField& f, double t);

/// cos(t sqrt(-Delta)) u0 + sin(t sqrt(-Delta)) / sqrt(-Delta) u1, with its time derivative.
WaveState wave_propagate(const RadialField& u0, const RadialField& u1, double t);

/// Rotates each mode (u_k, ut_k) by the exact linear flow over time dt.
void rotate_modes(SpectralField& u, SpectralField& ut, double dt);

/// int_0^t sin((t - s) sqrt(-Delta)) / sqrt(-Delta) F(s) ds by composite Simpson
/// on sub-intervals of width dt (midpoint evaluations included). dt must divide t.
RadialField duhamel(const std::function<RadialField(double)>& source, double t, double dt);

struct QuadratureOptions {
    double rel_tol = 1e-8;
    int max_levels = 16;
};

/// K_N(t, r; s) = (2/pi) int e_l(r) e_l(s) exp(i l t) psi~_N(l) dl, r, s >= 1.
/// Throws std::runtime_error if the tolerance is not met.
std::complex<double> kernel_KN(Dyadic N, double t, double r, double s, const QuadratureOptions& opts = {});

/// (2/pi) int (sin(l s)/s)(sin(l r)/r) exp(i t l) psi~_1(l) dl, r, s > 0.
std::complex<double> wholespace_kernel(double t, double r, double s, const QuadratureOptions& opts = {});

/// int_1^{1+L} K_N(t, r; s) f(s) s² ds on the grid (trapezoid with zero endpoints).
std::complex<double> apply_kernel_KN(Dyadic N, double t, double r, const RadialField& f,
                                     const QuadratureOptions& opts = {});

struct DecayFit {
    double exponent = 0.0;  ///< slope of log y against log t
    double constant = 0.0;  ///< exp(intercept)
    double residual = 0.0;  ///< max_i |y_i - C t_i^a| / y_i
};

/// Unweighted least squares of log y on log t. Needs >= 2 positive samples.
DecayFit fit_power_law(std::span<const double> t, std::span<const double> y);

struct DispersiveSample {
    double t;
    double sup_norm;
};

struct DispersiveResult {
    std::vector<DispersiveSample> samples;
    DecayFit fit;
};

/// Fits ‖U(t) f‖_inf against t for a single block f at N. Requires >= 4 samples
/// in [1, inf) and support(f) + max t <= L, with support measured at 1e-3 of the peak.
DispersiveResult dispersive_probe(Dyadic N, const RadialField& f, std::span<const double> t_samples);

/// Single-block datum with transform lambda cos(lambda rho0) psi_N(lambda): the block
/// of a dipole at rho0. Its g = r f profile has amplitude of order N².
RadialField dipole_block(const RadialGrid& grid, Dyadic N, double rho0);

/// (int |a(t)|^q dt)^(1/q) by the trapezoid rule, or max a(t) for q = inf.
double time_norm(std::span<const double> times, std::span<const double> values, double q);

/// ‖u‖_{L^q_t L^r_x} over the trajectory's samples.
double strichartz_norm(const Trajectory& traj, double q, double r);

/// ‖U(t) f‖_{L^q_t L^r_x} over t in [0, T] sampled every dt_sample (T / dt_sample rounded).
double half_wave_strichartz_norm(const RadialField& f, double T, double dt_sample, double q, double r);

/// ‖U(.) f‖_{L²_t([0,T]) L^q_x} / ‖f‖_{H^{1 - 3/q}} for q > 4.
double endpoint_ratio(const RadialField& f, double q, double T, double dt_sample = 1.0 / 16.0);

/// Exponent pairs for the radial Strichartz estimate.
struct AdmissibleExponents {
    double q1, r1, q2, r2;
    double rho1, rho2, mu;

    static bool admissible_pair(double q, double r);
    /// Throws std::invalid_argument when a pair or a scaling relation fails (tolerance 1e-12).
    void validate() const;
};

}  // namespace exwave
