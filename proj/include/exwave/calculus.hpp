#pragma once

// Littlewood-Paley calculus built on the distorted Fourier transform.

#include <vector>

#include "exwave/core.hpp"
#include "exwave/transform.hpp"

namespace exwave {

/// A dyadic frequency N = 2^exponent.
struct Dyadic {
    int exponent = 0;

    double value() const;
    static Dyadic from_value(double N);  ///< Throws unless N is an exact power of two.
    bool operator==(const Dyadic&) const = default;
    auto operator<=>(const Dyadic&) const = default;
};

/// The smooth bump phi with phi = 1 on [0, 1] and phi = 0 on [2, inf):
/// phi(l) = chi(2 - l) / (chi(2 - l) + chi(l - 1)), chi(x) = exp(-1/x) for x > 0.
struct SmoothCutoff {
    static double phi(double lambda);
    /// phi(lambda / N)
    static double phi_N(double lambda, double N);
    /// phi_N - phi_{N/2}, supported in [N/2, 2N].
    static double psi_N(double lambda, double N);
    /// psi_{N/2} + psi_N + psi_{2N} = phi_{2N} - phi_{N/4}, supported in [N/4, 4N].
    static double psi_tilde_N(double lambda, double N);
};

enum class BlockKind { leq, at, tilde, gt };

struct DyadicBlock {
    Dyadic N;
    BlockKind kind = BlockKind::at;

    /// Frequency interval on which the block's symbol is not locally constant.
    double support_low() const;
    double support_high() const;
    double symbol(double lambda) const;
};

/// Grid window [2 lambda_1, lambda_{n-1} / 2] in which dyadic supports are representable.
double resolvable_low(const RadialGrid& grid);
double resolvable_high(const RadialGrid& grid);
bool is_resolvable(const DyadicBlock& block, const RadialGrid& grid);

/// All N whose `at` block is resolvable on the grid, ascending.
std::vector<Dyadic> resolvable_dyadics(const RadialGrid& grid);

/// P_{<=N}, P_N, P~_N or P_{>N}. Throws std::invalid_argument for unresolvable blocks.
RadialField lp_project(const RadialField& f, const DyadicBlock& block);
SpectralField lp_project(const SpectralField& F, const DyadicBlock& block);

/// ((pi/L) sum_k lambda_k^{2s} F_k²)^{1/2}; requires |s| <= 2.
double sobolev_norm(const RadialField& f, double s);
double sobolev_norm(const SpectralField& F, double s);

/// Homogeneous Besov norm with the dyadic sum truncated to resolvable N.
double besov_norm(const RadialField& f, double s, double q, double r_idx);

/// ‖P_N f‖_q / (N^{3(1/p - 1/q)} ‖f‖_p). Throws for f = 0 or p > q.
double bernstein_ratio(const RadialField& f, Dyadic N, double p, double q);

/// ‖(sum_N N^{2s} |P_N f|²)^{1/2}‖_p / ‖(-Delta)^{s/2} f‖_p for 1 < p < inf.
double square_function_ratio(const RadialField& f, double s, double p);

}  // namespace exwave
