#include "exwave/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace exwave {

double Dyadic::value() const { return std::ldexp(1.0, exponent); }

Dyadic Dyadic::from_value(double N) {
    if (!(N > 0.0) || !std::isfinite(N)) throw std::invalid_argument("Dyadic: N must be positive");
    int e = 0;
    const double mant = std::frexp(N, &e);
    if (mant != 0.5) throw std::invalid_argument("Dyadic: " + std::to_string(N) + " is not a power of two");
    return Dyadic{e - 1};
}

namespace {

double chi(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

}  // namespace

double SmoothCutoff::phi(double lambda) {
    if (lambda <= 1.0) return 1.0;
    if (lambda >= 2.0) return 0.0;
    const double a = chi(2.0 - lambda);
    const double b = chi(lambda - 1.0);
    return a / (a + b);
}

double SmoothCutoff::phi_N(double lambda, double N) { return phi(lambda / N); }

double SmoothCutoff::psi_N(double lambda, double N) { return phi_N(lambda, N) - phi_N(lambda, 0.5 * N); }

double SmoothCutoff::psi_tilde_N(double lambda, double N) {
    return phi_N(lambda, 2.0 * N) - phi_N(lambda, 0.25 * N);
}

double DyadicBlock::support_low() const {
    const double n = N.value();
    switch (kind) {
        case BlockKind::at: return 0.5 * n;
        case BlockKind::tilde: return 0.25 * n;
        default: return n;
    }
}

double DyadicBlock::support_high() const {
    const double n = N.value();
    return kind == BlockKind::tilde ? 4.0 * n : 2.0 * n;
}

double DyadicBlock::symbol(double lambda) const {
    const double n = N.value();
    switch (kind) {
        case BlockKind::leq: return SmoothCutoff::phi_N(lambda, n);
        case BlockKind::at: return SmoothCutoff::psi_N(lambda, n);
        case BlockKind::tilde: return SmoothCutoff::psi_tilde_N(lambda, n);
        case BlockKind::gt: return 1.0 - SmoothCutoff::phi_N(lambda, n);
    }
    return 0.0;
}

double resolvable_low(const RadialGrid& grid) { return 2.0 * std::numbers::pi / grid.length(); }

double resolvable_high(const RadialGrid& grid) {
    return std::numbers::pi * static_cast<double>(grid.intervals()) / (2.0 * grid.length());
}

bool is_resolvable(const DyadicBlock& block, const RadialGrid& grid) {
    return block.support_low() >= resolvable_low(grid) && block.support_high() <= resolvable_high(grid);
}

std::vector<Dyadic> resolvable_dyadics(const RadialGrid& grid) {
    std::vector<Dyadic> out;
    Dyadic N{static_cast<int>(std::floor(std::log2(resolvable_low(grid)))) - 2};
    for (; N.value() <= resolvable_high(grid); ++N.exponent)
        if (is_resolvable(DyadicBlock{N, BlockKind::at}, grid)) out.push_back(N);
    return out;
}

namespace {

void require_resolvable(const DyadicBlock& block, const RadialGrid& grid) {
    if (!is_resolvable(block, grid))
        throw std::invalid_argument("lp_project: block at N = " + std::to_string(block.N.value()) +
                                    " with support [" + std::to_string(block.support_low()) + ", " +
                                    std::to_string(block.support_high()) + "] is outside the grid window [" +
                                    std::to_string(resolvable_low(grid)) + ", " +
                                    std::to_string(resolvable_high(grid)) + "]");
}

void check_regularity(double s) {
    if (!(std::abs(s) <= 2.0)) throw std::invalid_argument("sobolev_norm: |s| must be <= 2");
}

}  // namespace

SpectralField lp_project(const SpectralField& F, const DyadicBlock& block) {
    require_resolvable(block, F.grid());
    SpectralField out = F;
    scale_by_symbol(out, [&](double lambda) { return block.symbol(lambda); });
    return out;
}

RadialField lp_project(const RadialField& f, const DyadicBlock& block) {
    return inverse(lp_project(forward(f), block));
}

double sobolev_norm(const SpectralField& F, double s) {
    check_regularity(s);
    double sum = 0.0;
    for (std::size_t i = 0; i < F.size(); ++i) {
        const double w = s == 0.0 ? 1.0 : std::pow(F.frequency(i), 2.0 * s);
        sum += w * F[i] * F[i];
    }
    return std::sqrt(sum * std::numbers::pi / F.grid().length());
}

double sobolev_norm(const RadialField& f, double s) {
    check_regularity(s);
    return sobolev_norm(forward(f), s);
}

double besov_norm(const RadialField& f, double s, double q, double r_idx) {
    if (!(q >= 1.0) || !(r_idx >= 1.0)) throw std::invalid_argument("besov_norm: exponents must be >= 1");
    check_regularity(s);
    const SpectralField F = forward(f);
    double acc = 0.0;
    for (Dyadic N : resolvable_dyadics(f.grid())) {
        const double block = std::pow(N.value(), s) * lq_norm(inverse(lp_project(F, {N, BlockKind::at})), q);
        if (std::isinf(r_idx)) acc = std::max(acc, block);
        else acc += std::pow(block, r_idx);
    }
    return std::isinf(r_idx) ? acc : std::pow(acc, 1.0 / r_idx);
}

double bernstein_ratio(const RadialField& f, Dyadic N, double p, double q) {
    if (!(p >= 1.0) || !(q >= p)) throw std::invalid_argument("bernstein_ratio: need 1 <= p <= q");
    const double denom_norm = lq_norm(f, p);
    if (denom_norm == 0.0) throw std::invalid_argument("bernstein_ratio: zero field");
    const double inv_p = 1.0 / p;
    const double inv_q = std::isinf(q) ? 0.0 : 1.0 / q;
    const double gain = std::pow(N.value(), 3.0 * (inv_p - inv_q));
    return lq_norm(lp_project(f, {N, BlockKind::at}), q) / (gain * denom_norm);
}

double square_function_ratio(const RadialField& f, double s, double p) {
    if (!(p > 1.0) || std::isinf(p)) throw std::invalid_argument("square_function_ratio: need 1 < p < inf");
    check_regularity(s);
    const SpectralField F = forward(f);
    SpectralField derivative = F;
    scale_by_symbol(derivative, [s](double lambda) { return std::pow(lambda, s); });
    const double denom = lq_norm(inverse(derivative), p);
    if (denom == 0.0) throw std::invalid_argument("square_function_ratio: zero field");

    std::vector<double> square(f.size(), 0.0);
    for (Dyadic N : resolvable_dyadics(f.grid())) {
        const RadialField block = inverse(lp_project(F, {N, BlockKind::at}));
        const double w = std::pow(N.value(), 2.0 * s);
        for (std::size_t i = 0; i < square.size(); ++i) square[i] += w * block[i] * block[i];
    }
    for (double& v : square) v = std::sqrt(v);
    return lq_norm(RadialField(f.grid(), std::move(square)), p) / denom;
}

}  // namespace exwave
