#pragma once

// Defocusing cubic wave equation u_tt - Delta u + u³ = 0 on the exterior of the
// unit ball with Dirichlet data, integrated by Strang splitting: a half kick
// ut -= (dt/2) N(u), the exact linear rotation over dt, another half kick.

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>

#include "exwave/core.hpp"

namespace exwave {

/// Raised when a step produces non-finite values; carries the step's start time.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, double time) : std::runtime_error(what), time_(time) {}
    double time() const { return time_; }

private:
    double time_;
};

/// Data support plus horizon exceeds the truncated domain.
class TruncationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Throws TruncationError unless support + T + 1 <= L.
void check_truncation(const RadialGrid& grid, double support, double T);

/// Support extent of a data pair at relative threshold 1e-10.
double data_support(const RadialField& u0, const RadialField& u1);

using WarningSink = std::function<void(const std::string&)>;

struct SolverConfig {
    double dt = 1e-3;
    double T = 0.0;
    int sample_every = 1;
    bool nonlinearity_on = true;
    /// Overrides the measured data support in the truncation check.
    std::optional<double> support;
    /// Receives aliasing warnings; stderr when empty.
    WarningSink warn;
    int monitor_every = 100;

    void validate() const;
};

/// E = ½‖u‖²_{H¹} + ½‖ut‖²_{L²} + ¼‖u‖⁴_{L⁴} in the s² ds measure.
double energy(const WaveState& state);

/// Node-wise nonlinearity N(u) at time t; writes into `out`.
using Nonlinearity = std::function<void(double t, std::span<const double> u, std::span<double> out)>;

/// N(u) = u³.
Nonlinearity cubic_nonlinearity();

/// One Strang step with the given nonlinearity; dt may be negative.
/// Throws SolverError if the result is not finite.
WaveState strang_step(const WaveState& state, double dt, const Nonlinearity& nonlinearity);

/// strang_step with N(u) = u³, or the exact linear flow when nonlinear is false.
WaveState step(const WaveState& state, double dt, bool nonlinear = true);

/// ‖P_{> lambda_max / 4} u‖₂ / ‖u‖₂ measured spectrally; 0 for u = 0.
double spectral_tail_fraction(const RadialField& u);

/// Repeated steps to round(T / dt) * dt; snapshots every sample_every steps and at the end.
Trajectory solve(const RadialField& u0, const RadialField& u1, const SolverConfig& cfg);

/// Same loop with a caller-supplied nonlinearity (used for forced equations).
Trajectory solve_with(const RadialField& u0, const RadialField& u1, const SolverConfig& cfg,
                      const Nonlinearity& nonlinearity);

}  // namespace exwave
