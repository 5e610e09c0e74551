#include "exwave/propagator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

#include "exwave/transform.hpp"

namespace exwave {

namespace {

constexpr double kTwoOverPi = 2.0 / std::numbers::pi;

/// Spectral multiplication by exp(i t lambda) of the complex field (a + i b).
ComplexRadialField rotate_phase(const SpectralField& a, const SpectralField& b, double t) {
    SpectralField re(a.grid()), im(a.grid());
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double c = std::cos(t * a.frequency(i));
        const double s = std::sin(t * a.frequency(i));
        re[i] = c * a[i] - s * b[i];
        im[i] = s * a[i] + c * b[i];
    }
    return {inverse(re), inverse(im)};
}

}  // namespace

ComplexRadialField half_wave(const RadialField& f, double t) {
    return rotate_phase(forward(f), SpectralField(f.grid()), t);
}

ComplexRadialField half_wave(const ComplexRadialField& f, double t) {
    return rotate_phase(forward(f.re), forward(f.im), t);
}

void rotate_modes(SpectralField& u, SpectralField& ut, double dt) {
    if (!(u.grid() == ut.grid())) throw std::invalid_argument("rotate_modes: grid mismatch");
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double lambda = u.frequency(i);
        const double c = std::cos(dt * lambda);
        const double s = std::sin(dt * lambda);
        const double a = u[i];
        const double b = ut[i];
        u[i] = c * a + s / lambda * b;
        ut[i] = -lambda * s * a + c * b;
    }
}

WaveState wave_propagate(const RadialField& u0, const RadialField& u1, double t) {
    if (!(u0.grid() == u1.grid())) throw std::invalid_argument("wave_propagate: grid mismatch");
    SpectralField a = forward(u0);
    SpectralField b = forward(u1);
    rotate_modes(a, b, t);
    return WaveState(t, inverse(a), inverse(b));
}

RadialField duhamel(const std::function<RadialField(double)>& source, double t, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("duhamel: dt must be positive");
    if (t < 0.0) throw std::invalid_argument("duhamel: t must be non-negative");
    const double steps_real = t / dt;
    const auto steps = static_cast<long>(std::llround(steps_real));
    if (std::abs(steps_real - static_cast<double>(steps)) > 1e-9 * std::max(1.0, steps_real))
        throw std::invalid_argument("duhamel: dt does not divide t");

    std::optional<SpectralField> acc;
    auto accumulate = [&](double s, double weight) {
        SpectralField Fs = forward(source(s));
        if (!acc) acc.emplace(Fs.grid());
        for (std::size_t i = 0; i < Fs.size(); ++i) {
            const double lambda = Fs.frequency(i);
            (*acc)[i] += weight * std::sin((t - s) * lambda) / lambda * Fs[i];
        }
    };
    if (steps == 0) return RadialField(source(0.0).grid());
    // Simpson on [s, s + dt] with the midpoint: weights dt/6 * (1, 4, 1).
    for (long k = 0; k < steps; ++k) {
        const double s0 = static_cast<double>(k) * dt;
        accumulate(s0, (k == 0 ? 1.0 : 2.0) * dt / 6.0);
        accumulate(s0 + 0.5 * dt, 4.0 * dt / 6.0);
    }
    accumulate(t, dt / 6.0);
    return inverse(*acc);
}

// ---------------------------------------------------------------------------
// Oscillatory kernels

namespace {

constexpr int kGaussOrder = 16;

struct GaussLegendre {
    std::array<double, kGaussOrder> nodes{};
    std::array<double, kGaussOrder> weights{};

    GaussLegendre() {
        const int n = kGaussOrder;
        for (int i = 0; i < n; ++i) {
            double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
    }
};

const GaussLegendre& gauss_rule() {
    static const GaussLegendre rule;
    return rule;
}

struct PanelSum {
    std::complex<double> value;
    double magnitude;
};

template <class Integrand>
PanelSum panel_sum(Integrand&& f, double a, double b, long panels) {
    const auto& gl = gauss_rule();
    const double h = (b - a) / static_cast<double>(panels);
    std::complex<double> sum = 0.0;
    double mag = 0.0;
    for (long p = 0; p < panels; ++p) {
        const double mid = a + (static_cast<double>(p) + 0.5) * h;
        for (int i = 0; i < kGaussOrder; ++i) {
            const std::complex<double> v = f(mid + 0.5 * h * gl.nodes[i]);
            sum += gl.weights[i] * v;
            mag += gl.weights[i] * std::abs(v);
        }
    }
    return {0.5 * h * sum, 0.5 * h * mag};
}

/// Gauss-Legendre panels of width at most pi / (2 * frequency), halved until two
/// successive estimates agree to rel_tol relative to int |f|.
template <class Integrand>
std::complex<double> oscillatory_integral(Integrand&& f, double a, double b, double frequency,
                                          const QuadratureOptions& opts, const char* who) {
    const double width = std::numbers::pi / (2.0 * std::max(frequency, 1.0));
    long panels = std::max<long>(1, static_cast<long>(std::ceil((b - a) / width)));
    PanelSum coarse = panel_sum(f, a, b, panels);
    for (int level = 0; level < opts.max_levels; ++level) {
        panels *= 2;
        const PanelSum fine = panel_sum(f, a, b, panels);
        const double scale = std::max(fine.magnitude, std::abs(fine.value));
        if (std::abs(fine.value - coarse.value) <= opts.rel_tol * scale || scale == 0.0) return fine.value;
        coarse = fine;
    }
    throw std::runtime_error(std::string(who) + ": quadrature tolerance not met after maximum refinement");
}

void require_radius(double r, double lower, const char* who) {
    if (!(r >= lower) || !std::isfinite(r))
        throw std::invalid_argument(std::string(who) + ": radius out of range");
}

}  // namespace

std::complex<double> kernel_KN(Dyadic N, double t, double r, double s, const QuadratureOptions& opts) {
    require_radius(r, 1.0, "kernel_KN");
    require_radius(s, 1.0, "kernel_KN");
    const double n = N.value();
    const double a = r - 1.0;
    const double b = s - 1.0;
    auto integrand = [&](double lambda) {
        const double amp = kTwoOverPi * std::sin(lambda * a) / r * std::sin(lambda * b) / s *
                           SmoothCutoff::psi_tilde_N(lambda, n);
        return amp * std::complex<double>(std::cos(lambda * t), std::sin(lambda * t));
    };
    return oscillatory_integral(integrand, 0.25 * n, 4.0 * n, a + b + std::abs(t), opts, "kernel_KN");
}

std::complex<double> wholespace_kernel(double t, double r, double s, const QuadratureOptions& opts) {
    if (!(r > 0.0) || !(s > 0.0)) throw std::invalid_argument("wholespace_kernel: radii must be positive");
    auto integrand = [&](double lambda) {
        const double amp = kTwoOverPi * std::sin(lambda * s) / s * std::sin(lambda * r) / r *
                           SmoothCutoff::psi_tilde_N(lambda, 1.0);
        return amp * std::complex<double>(std::cos(lambda * t), std::sin(lambda * t));
    };
    return oscillatory_integral(integrand, 0.25, 4.0, r + s + std::abs(t), opts, "wholespace_kernel");
}

std::complex<double> apply_kernel_KN(Dyadic N, double t, double r, const RadialField& f,
                                     const QuadratureOptions& opts) {
    const RadialGrid& grid = f.grid();
    std::complex<double> sum = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i] == 0.0) continue;
        const double s = grid.sample_radius(i);
        sum += kernel_KN(N, t, r, s, opts) * f[i] * s * s;
    }
    return sum * grid.spacing();
}

// ---------------------------------------------------------------------------
// Dispersive probe

DecayFit fit_power_law(std::span<const double> t, std::span<const double> y) {
    if (t.size() != y.size() || t.size() < 2) throw std::invalid_argument("fit_power_law: need >= 2 paired samples");
    const auto m = static_cast<double>(t.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!(t[i] > 0.0) || !(y[i] > 0.0) || !std::isfinite(y[i]))
            throw std::invalid_argument("fit_power_law: samples must be positive and finite");
        const double x = std::log(t[i]);
        const double v = std::log(y[i]);
        sx += x;
        sy += v;
        sxx += x * x;
        sxy += x * v;
    }
    const double denom = m * sxx - sx * sx;
    if (!(std::abs(denom) > 0.0)) throw std::invalid_argument("fit_power_law: degenerate abscissae");
    DecayFit fit;
    fit.exponent = (m * sxy - sx * sy) / denom;
    const double intercept = (sy - fit.exponent * sx) / m;
    fit.constant = std::exp(intercept);
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double model = fit.constant * std::pow(t[i], fit.exponent);
        fit.residual = std::max(fit.residual, std::abs(y[i] - model) / y[i]);
    }
    return fit;
}

RadialField dipole_block(const RadialGrid& grid, Dyadic N, double rho0) {
    SpectralField F(grid);
    const double n = N.value();
    for (std::size_t i = 0; i < F.size(); ++i) {
        const double lambda = F.frequency(i);
        F[i] = lambda * std::cos(lambda * rho0) * SmoothCutoff::psi_N(lambda, n);
    }
    return inverse(F);
}

DispersiveResult dispersive_probe(Dyadic N, const RadialField& f, std::span<const double> t_samples) {
    if (t_samples.size() < 4) throw std::invalid_argument("dispersive_probe: need at least 4 time samples");
    const double peak = f.max_abs();
    if (peak == 0.0) throw std::invalid_argument("dispersive_probe: zero datum gives a degenerate fit");
    const RadialGrid& grid = f.grid();
    double t_max = 0.0;
    for (double t : t_samples) {
        if (!(t >= 1.0)) throw std::invalid_argument("dispersive_probe: time samples must lie in [1, T]");
        t_max = std::max(t_max, t);
    }
    if (support_extent(f, 1e-3) + t_max > grid.length())
        throw std::invalid_argument("dispersive_probe: support + T exceeds the truncated domain");

    const SpectralField F = forward(f);
    const RadialField localized = inverse(lp_project(F, {N, BlockKind::tilde}));
    if (max_abs_diff(localized, f) > 1e-6 * peak)
        throw std::invalid_argument("dispersive_probe: datum is not a single block at N");

    DispersiveResult out;
    std::vector<double> times, sups;
    const SpectralField zero(grid);
    for (double t : t_samples) {
        const double sup = lq_norm(rotate_phase(F, zero, t), kInf);
        out.samples.push_back({t, sup});
        times.push_back(t);
        sups.push_back(sup);
    }
    out.fit = fit_power_law(times, sups);
    return out;
}

// ---------------------------------------------------------------------------
// Space-time norms

double time_norm(std::span<const double> times, std::span<const double> values, double q) {
    if (times.size() != values.size()) throw std::invalid_argument("time_norm: size mismatch");
    if (times.empty()) throw std::invalid_argument("time_norm: empty series");
    if (!(q >= 1.0)) throw std::invalid_argument("time_norm: exponent must be >= 1");
    if (std::isinf(q)) return *std::max_element(values.begin(), values.end());
    double acc = 0.0;
    for (std::size_t i = 1; i < times.size(); ++i)
        acc += 0.5 * (times[i] - times[i - 1]) * (std::pow(values[i - 1], q) + std::pow(values[i], q));
    return std::pow(acc, 1.0 / q);
}

double strichartz_norm(const Trajectory& traj, double q, double r) {
    if (traj.empty()) throw std::invalid_argument("strichartz_norm: empty trajectory");
    std::vector<double> norms;
    norms.reserve(traj.size());
    for (const auto& state : traj) norms.push_back(lq_norm(state.u, r));
    return time_norm(traj.times(), norms, q);
}

double half_wave_strichartz_norm(const RadialField& f, double T, double dt_sample, double q, double r) {
    if (!(T > 0.0) || !(dt_sample > 0.0)) throw std::invalid_argument("half_wave_strichartz_norm: bad horizon");
    const auto steps = std::max<long>(1, std::lround(T / dt_sample));
    const double h = T / static_cast<double>(steps);
    const SpectralField F = forward(f);
    const SpectralField zero(f.grid());
    std::vector<double> times, norms;
    for (long k = 0; k <= steps; ++k) {
        const double t = static_cast<double>(k) * h;
        times.push_back(t);
        norms.push_back(lq_norm(rotate_phase(F, zero, t), r));
    }
    return time_norm(times, norms, q);
}

double endpoint_ratio(const RadialField& f, double q, double T, double dt_sample) {
    if (!(q > 4.0)) throw std::invalid_argument("endpoint_ratio: need q > 4");
    const double s = 1.0 - 3.0 / q;
    const double data = sobolev_norm(f, s);
    if (data == 0.0) throw std::invalid_argument("endpoint_ratio: zero datum");
    return half_wave_strichartz_norm(f, T, dt_sample, 2.0, q) / data;
}

// ---------------------------------------------------------------------------

bool AdmissibleExponents::admissible_pair(double q, double r) {
    if (!(q >= 2.0) || !(r >= 2.0) || std::isinf(r)) return false;
    const double inv_q = std::isinf(q) ? 0.0 : 1.0 / q;
    const double sum = inv_q + 1.0 / r;
    if (sum <= 0.5) return true;
    // Radial endpoint line L²_t L^r_x, r > 4.
    return q == 2.0 && r > 4.0;
}

void AdmissibleExponents::validate() const {
    if (!admissible_pair(q1, r1) || !admissible_pair(q2, r2))
        throw std::invalid_argument("AdmissibleExponents: (q, r) pair is not admissible");
    auto gap = [](double q, double r) { return 3.0 * (0.5 - 1.0 / r) - (std::isinf(q) ? 0.0 : 1.0 / q); };
    if (std::abs(rho1 + gap(q1, r1) - mu) > 1e-12)
        throw std::invalid_argument("AdmissibleExponents: first scaling relation fails");
    if (std::abs(rho2 + gap(q2, r2) - (1.0 - mu)) > 1e-12)
        throw std::invalid_argument("AdmissibleExponents: second scaling relation fails");
}

}  // namespace exwave
