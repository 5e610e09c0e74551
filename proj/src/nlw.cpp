#include "exwave/nlw.hpp"

#include <cmath>
#include <iostream>
#include <sstream>

#include "exwave/calculus.hpp"
#include "exwave/propagator.hpp"
#include "exwave/transform.hpp"

namespace exwave {

void check_truncation(const RadialGrid& grid, double support, double T) {
    if (support + T + 1.0 > grid.length()) {
        std::ostringstream msg;
        msg << "truncation safety violated: support " << support << " + T " << T << " + 1 > L " << grid.length();
        throw TruncationError(msg.str());
    }
}

double data_support(const RadialField& u0, const RadialField& u1) {
    return std::max(support_extent(u0), support_extent(u1));
}

void SolverConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("SolverConfig: dt must be positive");
    if (!(T >= 0.0) || !std::isfinite(T)) throw std::invalid_argument("SolverConfig: T must be non-negative");
    if (sample_every < 1) throw std::invalid_argument("SolverConfig: sample_every must be >= 1");
    if (monitor_every < 1) throw std::invalid_argument("SolverConfig: monitor_every must be >= 1");
}

double energy(const WaveState& state) {
    const double grad = sobolev_norm(state.u, 1.0);
    const double kin = lq_norm(state.ut, 2.0);
    const double quart = lq_norm(state.u, 4.0);
    return 0.5 * grad * grad + 0.5 * kin * kin + 0.25 * std::pow(quart, 4);
}

Nonlinearity cubic_nonlinearity() {
    return [](double, std::span<const double> u, std::span<double> out) {
        for (std::size_t i = 0; i < u.size(); ++i) out[i] = u[i] * u[i] * u[i];
    };
}

namespace {

void kick(double t, double h, const RadialField& u, RadialField& ut, const Nonlinearity& nonlinearity,
          std::vector<double>& scratch) {
    scratch.resize(u.size());
    nonlinearity(t, u.values(), scratch);
    for (std::size_t i = 0; i < ut.size(); ++i) ut[i] -= h * scratch[i];
}

}  // namespace

WaveState strang_step(const WaveState& state, double dt, const Nonlinearity& nonlinearity) {
    std::vector<double> scratch;
    RadialField u = state.u;
    RadialField ut = state.ut;
    if (nonlinearity) kick(state.t, 0.5 * dt, u, ut, nonlinearity, scratch);
    SpectralField a = forward(u);
    SpectralField b = forward(ut);
    rotate_modes(a, b, dt);
    u = inverse(a);
    ut = inverse(b);
    if (nonlinearity) kick(state.t + dt, 0.5 * dt, u, ut, nonlinearity, scratch);
    if (!u.all_finite() || !ut.all_finite()) {
        std::ostringstream msg;
        msg << "non-finite solution in step starting at t = " << state.t;
        throw SolverError(msg.str(), state.t);
    }
    return WaveState(state.t + dt, std::move(u), std::move(ut));
}

WaveState step(const WaveState& state, double dt, bool nonlinear) {
    return strang_step(state, dt, nonlinear ? cubic_nonlinearity() : Nonlinearity{});
}

double spectral_tail_fraction(const RadialField& u) {
    const SpectralField U = forward(u);
    const double cutoff = 0.25 * u.grid().max_frequency();
    double tail = 0.0, total = 0.0;
    for (std::size_t i = 0; i < U.size(); ++i) {
        const double c2 = U[i] * U[i];
        total += c2;
        if (U.frequency(i) > cutoff) tail += c2;
    }
    return total == 0.0 ? 0.0 : std::sqrt(tail / total);
}

Trajectory solve_with(const RadialField& u0, const RadialField& u1, const SolverConfig& cfg,
                      const Nonlinearity& nonlinearity) {
    cfg.validate();
    if (!(u0.grid() == u1.grid())) throw std::invalid_argument("solve: grid mismatch");
    check_truncation(u0.grid(), cfg.support.value_or(data_support(u0, u1)), cfg.T);

    const long steps = std::lround(cfg.T / cfg.dt);
    Trajectory traj(cfg.dt * cfg.sample_every);
    WaveState state(0.0, u0, u1);
    traj.push_back(state);
    bool warned = false;
    for (long k = 1; k <= steps; ++k) {
        state = strang_step(state, cfg.dt, nonlinearity);
        state.t = static_cast<double>(k) * cfg.dt;
        if (nonlinearity && !warned && k % cfg.monitor_every == 0) {
            const double tail = spectral_tail_fraction(state.u);
            if (tail > 1e-8) {
                std::ostringstream msg;
                msg << "aliasing monitor: spectral tail fraction " << tail << " above 1e-8 at t = " << state.t;
                if (cfg.warn) cfg.warn(msg.str());
                else std::cerr << "warning: " << msg.str() << '\n';
                warned = true;
            }
        }
        if (k % cfg.sample_every == 0 || k == steps) traj.push_back(state);
    }
    return traj;
}

Trajectory solve(const RadialField& u0, const RadialField& u1, const SolverConfig& cfg) {
    return solve_with(u0, u1, cfg, cfg.nonlinearity_on ? cubic_nonlinearity() : Nonlinearity{});
}

}  // namespace exwave
