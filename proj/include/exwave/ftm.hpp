#pragma once

// Fourier truncation experiment: split the data at 2^J into a high part w solving
// the cubic equation and a low part v solving the forced difference equation
//   v_tt - Delta v + v³ = -3 v² w - 3 v w²,
// then track the low-frequency energy and the norms of w.

#include <optional>
#include <string>
#include <vector>

#include "exwave/core.hpp"

namespace exwave {

struct FtmConfig {
    double s = 0.875;
    double eps = 0.5;
    /// Implicit constant C in C 2^{J(1/2 - s)} <= eps.
    double smallness_constant = 1.0;
    int J = 5;
    /// Horizon; auto_horizon(s, J) when empty.
    std::optional<double> T;
    double dt = 1.0 / 1024.0;
    /// Stride, in steps, of the stored v and w snapshots.
    int sample_every = 16;
    /// Overrides the measured data support in the truncation check. The split pieces
    /// carry spectral-projection tails across the domain, so solve_w / solve_v should
    /// be given the support of the full datum.
    std::optional<double> support;
    /// Also integrate the full equation and report sup_t ‖u - (v + w)‖₂.
    bool track_direct = true;

    /// Throws std::invalid_argument unless 3/4 < s < 1, dt > 0, sample_every >= 1 and T >= 0.
    void validate() const;
    double horizon() const;
    bool smallness_holds() const;
};

/// 2^{2J(2s - 3/2)}.
double auto_horizon(double s, int J);
/// 3(1 - s)(2s - 1) / (4s - 3), the growth exponent of the H^s norm in T.
double hs_growth_exponent(double s);
/// 2(1 - s), the growth of log2 E_T per unit J.
double energy_growth_per_J(double s);

struct DataPair {
    RadialField u0;
    RadialField u1;
};

struct SplitData {
    DataPair low;
    DataPair high;
};

/// low = P_{<=2^J} data, high = data - low. Throws std::invalid_argument if 2^J is unresolvable.
SplitData split_data(const RadialField& u0, const RadialField& u1, int J);

struct WNorms {
    double l4_tx = 0.0;    ///< ‖w‖_{L⁴_t L⁴_x}
    double linf_l3 = 0.0;  ///< ‖w‖_{L^inf_t L³_x}
    double l2_l6 = 0.0;    ///< ‖w‖_{L²_t L⁶_x}
    double linf_hs = 0.0;  ///< sup_t ‖w(t)‖_{H^s}
    double data_hs = 0.0;  ///< ‖(w0, w1)‖_{H^s x H^{s-1}}
};

/// Integrates the cubic equation from the high data; norms use every step.
struct WSolution {
    Trajectory traj;
    WNorms norms;
};
WSolution solve_w(const DataPair& high, const FtmConfig& cfg);

/// Integrates the difference equation with w read from w_traj, linearly interpolated
/// in time between snapshots. Throws std::invalid_argument on a grid mismatch or
/// when w_traj does not cover [0, T].
Trajectory solve_v(const DataPair& low, const Trajectory& w_traj, const FtmConfig& cfg);

struct EnergyGrowth {
    std::vector<double> times;
    std::vector<double> energy;          ///< E(v)(t_i)
    std::vector<double> running_max;     ///< max_{j <= i} E(v)(t_j)
    std::vector<double> flux;            ///< int v_t F(v, w) s² ds at t_i
    std::vector<double> fd_derivative;   ///< central difference of E, one-sided at the ends
    double E0 = 0.0;
    double E_T = 0.0;
    double flux_residual = 0.0;   ///< max |fd_derivative - flux| over interior samples
    double flux_tolerance = 0.0;  ///< 5 h max |E''| with h the sample spacing
    double energy_drift = 0.0;    ///< max |E(t) - E(0)| / E(0)
    /// E(v)(0) + E_T^{3/2} T^{1/2} ‖w‖_{L²L⁶} + E_T ‖w‖²_{L²L⁶}
    double bound_rhs = 0.0;
    double bound_ratio = 0.0;     ///< E_T / bound_rhs
};

/// Requires v_traj and w_traj sampled at the same times.
EnergyGrowth energy_growth_report(const Trajectory& v_traj, const Trajectory& w_traj, const WNorms& w_norms,
                                  const FtmConfig& cfg);

struct HsGrowth {
    double sup_hs = 0.0;        ///< sup_t ‖v‖_{H^s} + ‖w‖_{H^s}
    double sup_ut_hs1 = 0.0;    ///< sup_t ‖v_t + w_t‖_{H^{s-1}}, tracked without a bound
    double paper_exponent = 0.0;
};

HsGrowth hs_growth_report(const Trajectory& v_traj, const Trajectory& w_traj, const FtmConfig& cfg);

struct FtmReport {
    FtmConfig config;
    double T = 0.0;
    long steps = 0;
    bool smallness_holds = false;
    WNorms w_norms;
    EnergyGrowth energy;
    HsGrowth hs;
    /// sup_t ‖u - (v + w)‖₂ over every step; NaN when track_direct is off.
    double recombine_error = 0.0;
    std::vector<std::string> warnings;
};

/// Split, then step w, v and (optionally) the full solution u in lockstep.
/// Stage failures are rethrown with a stage label; TruncationError passes through.
FtmReport run_ftm(const FtmConfig& cfg, const DataPair& data);

struct FtmSweepPoint {
    int J = 0;
    double T = 0.0;
    double E_T = 0.0;
    double l2_l6 = 0.0;
    double sup_hs = 0.0;
};

struct FtmSweepFit {
    double w_slope = 0.0;       ///< d log2 ‖w‖_{L²L⁶} / dJ
    double energy_slope = 0.0;  ///< d log2 E_T / dJ
    double hs_exponent = 0.0;   ///< d log sup_hs / d log T; NaN when every T is equal
};

/// Least-squares slopes across a sweep; needs >= 2 points with distinct J.
FtmSweepFit fit_ftm_sweep(const std::vector<FtmSweepPoint>& points);

}  // namespace exwave
