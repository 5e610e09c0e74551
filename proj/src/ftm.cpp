#include "exwave/ftm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "exwave/calculus.hpp"
#include "exwave/nlw.hpp"
#include "exwave/propagator.hpp"

namespace exwave {

void FtmConfig::validate() const {
    if (!(s > 0.75 && s < 1.0)) throw std::invalid_argument("FtmConfig: s must lie in (3/4, 1)");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("FtmConfig: dt must be positive");
    if (sample_every < 1) throw std::invalid_argument("FtmConfig: sample_every must be >= 1");
    if (!(eps > 0.0)) throw std::invalid_argument("FtmConfig: eps must be positive");
    if (!(smallness_constant > 0.0)) throw std::invalid_argument("FtmConfig: smallness_constant must be positive");
    if (T && (!(*T >= 0.0) || !std::isfinite(*T))) throw std::invalid_argument("FtmConfig: T must be non-negative");
}

double FtmConfig::horizon() const { return T.value_or(auto_horizon(s, J)); }

bool FtmConfig::smallness_holds() const { return smallness_constant * std::exp2(J * (0.5 - s)) <= eps; }

double auto_horizon(double s, int J) { return std::exp2(2.0 * J * (2.0 * s - 1.5)); }

double hs_growth_exponent(double s) { return 3.0 * (1.0 - s) * (2.0 * s - 1.0) / (4.0 * s - 3.0); }

double energy_growth_per_J(double s) { return 2.0 * (1.0 - s); }

SplitData split_data(const RadialField& u0, const RadialField& u1, int J) {
    if (!(u0.grid() == u1.grid())) throw std::invalid_argument("split_data: grid mismatch");
    const DyadicBlock block{Dyadic{J}, BlockKind::leq};
    if (!is_resolvable(block, u0.grid())) throw std::invalid_argument("split_data: cutoff 2^J is not resolvable");
    RadialField l0 = lp_project(u0, block);
    RadialField l1 = lp_project(u1, block);
    RadialField h0 = u0 - l0;
    RadialField h1 = u1 - l1;
    return {{std::move(l0), std::move(l1)}, {std::move(h0), std::move(h1)}};
}

namespace {

// v³ + 3v²w + 3vw², the kick for the difference equation.
void coupled_cubic(std::span<const double> v, std::span<const double> w, std::span<double> out) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double a = v[i], b = w[i];
        out[i] = a * a * a + 3.0 * a * a * b + 3.0 * a * b * b;
    }
}

class WNormAccumulator {
public:
    explicit WNormAccumulator(double s) : s_(s) {}

    void add(const RadialField& w, double dt) {
        const double l4 = std::pow(lq_norm(w, 4.0), 4);
        const double l6 = std::pow(lq_norm(w, 6.0), 2);
        if (count_ > 0) {
            l4_sum_ += 0.5 * dt * (l4 + prev_l4_);
            l6_sum_ += 0.5 * dt * (l6 + prev_l6_);
        }
        prev_l4_ = l4;
        prev_l6_ = l6;
        norms_.linf_l3 = std::max(norms_.linf_l3, lq_norm(w, 3.0));
        norms_.linf_hs = std::max(norms_.linf_hs, sobolev_norm(w, s_));
        ++count_;
    }

    WNorms finish(const DataPair& high) {
        norms_.l4_tx = std::pow(l4_sum_, 0.25);
        norms_.l2_l6 = std::sqrt(l6_sum_);
        const double a = sobolev_norm(high.u0, s_);
        const double b = sobolev_norm(high.u1, s_ - 1.0);
        norms_.data_hs = std::sqrt(a * a + b * b);
        return norms_;
    }

private:
    double s_;
    WNorms norms_;
    double l4_sum_ = 0.0, l6_sum_ = 0.0;
    double prev_l4_ = 0.0, prev_l6_ = 0.0;
    long count_ = 0;
};

long step_count(const FtmConfig& cfg) { return std::lround(cfg.horizon() / cfg.dt); }

SolverConfig linear_config(const FtmConfig& cfg, double support) {
    SolverConfig sc;
    sc.dt = cfg.dt;
    sc.T = cfg.horizon();
    sc.sample_every = cfg.sample_every;
    sc.support = support;
    return sc;
}

// w(t) from a trajectory by linear interpolation between snapshots.
RadialField interpolate(const Trajectory& traj, double t) {
    const std::vector<double> times = traj.times();
    if (times.empty() || t < times.front() - 1e-12 || t > times.back() + 1e-12)
        throw std::invalid_argument("solve_v: w trajectory does not cover the requested time");
    auto it = std::lower_bound(times.begin(), times.end(), t);
    std::size_t hi = static_cast<std::size_t>(it - times.begin());
    if (hi < times.size() && std::abs(times[hi] - t) <= 1e-12) return traj[hi].u;
    if (hi == 0) return traj[0].u;
    if (hi >= times.size()) return traj[times.size() - 1].u;
    const double theta = (t - times[hi - 1]) / (times[hi] - times[hi - 1]);
    return (1.0 - theta) * traj[hi - 1].u + theta * traj[hi].u;
}

template <class F>
auto staged(const char* stage, F&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const TruncationError&) {
        throw;
    } catch (const SolverError& e) {
        throw SolverError(std::string("ftm[") + stage + "]: " + e.what(), e.time());
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(std::string("ftm[") + stage + "]: " + e.what());
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("ftm[") + stage + "]: " + e.what());
    }
}

}  // namespace

WSolution solve_w(const DataPair& high, const FtmConfig& cfg) {
    cfg.validate();
    SolverConfig sc = linear_config(cfg, cfg.support.value_or(data_support(high.u0, high.u1)));
    check_truncation(high.u0.grid(), *sc.support, sc.T);
    const long steps = step_count(cfg);
    Trajectory traj(cfg.dt * cfg.sample_every);
    WNormAccumulator acc(cfg.s);
    WaveState w(0.0, high.u0, high.u1);
    traj.push_back(w);
    acc.add(w.u, cfg.dt);
    const Nonlinearity cubic = cubic_nonlinearity();
    for (long k = 1; k <= steps; ++k) {
        w = strang_step(w, cfg.dt, cubic);
        w.t = static_cast<double>(k) * cfg.dt;
        acc.add(w.u, cfg.dt);
        if (k % cfg.sample_every == 0 || k == steps) traj.push_back(w);
    }
    return {std::move(traj), acc.finish(high)};
}

Trajectory solve_v(const DataPair& low, const Trajectory& w_traj, const FtmConfig& cfg) {
    cfg.validate();
    if (w_traj.empty()) throw std::invalid_argument("solve_v: empty w trajectory");
    if (!(w_traj.front().u.grid() == low.u0.grid())) throw std::invalid_argument("solve_v: grid mismatch");
    SolverConfig sc = linear_config(cfg, cfg.support.value_or(data_support(low.u0, low.u1)));
    const Nonlinearity forced = [&w_traj](double t, std::span<const double> v, std::span<double> out) {
        const RadialField w = interpolate(w_traj, t);
        coupled_cubic(v, w.values(), out);
    };
    sc.warn = [](const std::string&) {};
    return solve_with(low.u0, low.u1, sc, forced);
}

EnergyGrowth energy_growth_report(const Trajectory& v_traj, const Trajectory& w_traj, const WNorms& w_norms,
                                  const FtmConfig& cfg) {
    if (v_traj.empty()) throw std::invalid_argument("energy_growth_report: empty trajectory");
    if (v_traj.size() != w_traj.size()) throw std::invalid_argument("energy_growth_report: sample mismatch");
    EnergyGrowth g;
    const std::size_t m = v_traj.size();
    for (std::size_t i = 0; i < m; ++i) {
        const WaveState& v = v_traj[i];
        const WaveState& w = w_traj[i];
        if (std::abs(v.t - w.t) > 1e-9) throw std::invalid_argument("energy_growth_report: sample times differ");
        g.times.push_back(v.t);
        const double e = energy(v);
        g.energy.push_back(e);
        g.running_max.push_back(i == 0 ? e : std::max(g.running_max.back(), e));
        // F(v, w) = -3v²w - 3vw², weighted by v_t and integrated in s² ds.
        const RadialGrid& grid = v.u.grid();
        double flux = 0.0;
        for (std::size_t j = 0; j < v.u.size(); ++j) {
            const double a = v.u[j], b = w.u[j], r = grid.sample_radius(j);
            flux += v.ut[j] * (-3.0 * a * a * b - 3.0 * a * b * b) * r * r;
        }
        g.flux.push_back(flux * grid.spacing());
    }
    g.E0 = g.energy.front();
    g.E_T = g.running_max.back();
    for (double e : g.energy) g.energy_drift = std::max(g.energy_drift, g.E0 == 0.0 ? 0.0 : std::abs(e - g.E0) / g.E0);

    g.fd_derivative.assign(m, 0.0);
    if (m >= 3) {
        double max_second = 0.0, h_max = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == 0) g.fd_derivative[i] = (g.energy[1] - g.energy[0]) / (g.times[1] - g.times[0]);
            else if (i == m - 1)
                g.fd_derivative[i] = (g.energy[i] - g.energy[i - 1]) / (g.times[i] - g.times[i - 1]);
            else
                g.fd_derivative[i] = (g.energy[i + 1] - g.energy[i - 1]) / (g.times[i + 1] - g.times[i - 1]);
            if (i > 0) h_max = std::max(h_max, g.times[i] - g.times[i - 1]);
        }
        for (std::size_t i = 1; i + 1 < m; ++i) {
            const double h1 = g.times[i] - g.times[i - 1], h2 = g.times[i + 1] - g.times[i];
            const double second =
                2.0 * ((g.energy[i + 1] - g.energy[i]) / h2 - (g.energy[i] - g.energy[i - 1]) / h1) / (h1 + h2);
            max_second = std::max(max_second, std::abs(second));
            g.flux_residual = std::max(g.flux_residual, std::abs(g.fd_derivative[i] - g.flux[i]));
        }
        g.flux_tolerance = 5.0 * h_max * max_second;
    }

    const double W = w_norms.l2_l6;
    g.bound_rhs = g.E0 + std::pow(g.E_T, 1.5) * std::sqrt(cfg.horizon()) * W + g.E_T * W * W;
    g.bound_ratio = g.bound_rhs == 0.0 ? 0.0 : g.E_T / g.bound_rhs;
    return g;
}

HsGrowth hs_growth_report(const Trajectory& v_traj, const Trajectory& w_traj, const FtmConfig& cfg) {
    if (v_traj.size() != w_traj.size()) throw std::invalid_argument("hs_growth_report: sample mismatch");
    HsGrowth h;
    h.paper_exponent = hs_growth_exponent(cfg.s);
    for (std::size_t i = 0; i < v_traj.size(); ++i) {
        h.sup_hs = std::max(h.sup_hs, sobolev_norm(v_traj[i].u, cfg.s) + sobolev_norm(w_traj[i].u, cfg.s));
        h.sup_ut_hs1 = std::max(h.sup_ut_hs1, sobolev_norm(v_traj[i].ut + w_traj[i].ut, cfg.s - 1.0));
    }
    return h;
}

FtmReport run_ftm(const FtmConfig& cfg, const DataPair& data) {
    staged("config", [&] { cfg.validate(); });
    if (!(data.u0.grid() == data.u1.grid())) throw std::invalid_argument("ftm[config]: grid mismatch");
    FtmReport report;
    report.config = cfg;
    report.T = cfg.horizon();
    report.steps = step_count(cfg);
    report.smallness_holds = cfg.smallness_holds();
    if (!report.smallness_holds) {
        std::ostringstream msg;
        msg << "smallness condition C 2^{J(1/2-s)} <= eps fails: "
            << cfg.smallness_constant * std::exp2(cfg.J * (0.5 - cfg.s)) << " > " << cfg.eps;
        report.warnings.push_back(msg.str());
    }
    check_truncation(data.u0.grid(), cfg.support.value_or(data_support(data.u0, data.u1)), report.T);

    const SplitData parts = staged("split", [&] { return split_data(data.u0, data.u1, cfg.J); });

    return staged("evolve", [&] {
        const double dt = cfg.dt;
        Trajectory v_traj(dt * cfg.sample_every), w_traj(dt * cfg.sample_every);
        WaveState v(0.0, parts.low.u0, parts.low.u1);
        WaveState w(0.0, parts.high.u0, parts.high.u1);
        std::optional<WaveState> u;
        if (cfg.track_direct) u.emplace(0.0, data.u0, data.u1);
        v_traj.push_back(v);
        w_traj.push_back(w);
        WNormAccumulator acc(cfg.s);
        acc.add(w.u, dt);
        double recombine = 0.0;
        auto discrepancy = [&] {
            if (u) recombine = std::max(recombine, lq_norm(u->u - (v.u + w.u), 2.0));
        };
        discrepancy();

        const Nonlinearity cubic = cubic_nonlinearity();
        const RadialField* w_now = nullptr;
        const RadialField* w_next = nullptr;
        double t_now = 0.0;
        const Nonlinearity forced = [&](double t, std::span<const double> vv, std::span<double> out) {
            coupled_cubic(vv, (t > t_now ? *w_next : *w_now).values(), out);
        };
        bool aliasing_warned = false;
        for (long k = 1; k <= report.steps; ++k) {
            WaveState w_new = strang_step(w, dt, cubic);
            t_now = v.t;
            w_now = &w.u;
            w_next = &w_new.u;
            v = strang_step(v, dt, forced);
            w = std::move(w_new);
            if (u) u = strang_step(*u, dt, cubic);
            const double t = static_cast<double>(k) * dt;
            v.t = t;
            w.t = t;
            if (u) u->t = t;
            acc.add(w.u, dt);
            discrepancy();
            if (!aliasing_warned && k % 100 == 0) {
                const double tail = spectral_tail_fraction(v.u + w.u);
                if (tail > 1e-8) {
                    std::ostringstream msg;
                    msg << "aliasing monitor: spectral tail fraction " << tail << " above 1e-8 at t = " << t;
                    report.warnings.push_back(msg.str());
                    aliasing_warned = true;
                }
            }
            if (k % cfg.sample_every == 0 || k == report.steps) {
                v_traj.push_back(v);
                w_traj.push_back(w);
            }
        }
        report.w_norms = acc.finish(parts.high);
        report.energy = energy_growth_report(v_traj, w_traj, report.w_norms, cfg);
        report.hs = hs_growth_report(v_traj, w_traj, cfg);
        report.recombine_error = cfg.track_direct ? recombine : std::numeric_limits<double>::quiet_NaN();
        return report;
    });
}

FtmSweepFit fit_ftm_sweep(const std::vector<FtmSweepPoint>& points) {
    if (points.size() < 2) throw std::invalid_argument("fit_ftm_sweep: need at least two points");
    std::vector<double> x, wl, el, ts, hs;
    for (const auto& p : points) {
        x.push_back(std::exp2(p.J));
        wl.push_back(p.l2_l6);
        el.push_back(p.E_T);
        ts.push_back(p.T);
        hs.push_back(p.sup_hs);
    }
    // log y against log 2^J gives d log2 y / dJ directly.
    FtmSweepFit fit;
    fit.w_slope = fit_power_law(x, wl).exponent;
    fit.energy_slope = fit_power_law(x, el).exponent;
    const bool fixed_T = std::all_of(ts.begin(), ts.end(), [&](double t) { return t == ts.front(); });
    fit.hs_exponent = fixed_T ? std::numeric_limits<double>::quiet_NaN() : fit_power_law(ts, hs).exponent;
    return fit;
}

}  // namespace exwave
