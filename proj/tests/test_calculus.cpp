#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "exwave/calculus.hpp"
#include "exwave/profiles.hpp"

using namespace exwave;
using std::numbers::pi;

namespace {

RadialField random_field(const RadialGrid& g, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    std::vector<double> v(g.interior());
    for (double& x : v) x = d(rng);
    return RadialField(g, std::move(v));
}

// Random data whose spectrum lies in [lo, hi].
RadialField band_field(const RadialGrid& g, unsigned seed, double lo, double hi) {
    return apply_symbol(random_field(g, seed), [=](double l) {
        return SmoothCutoff::phi_N(l, hi / 2.0) * (1.0 - SmoothCutoff::phi_N(l, lo));
    });
}

RadialField eigen_profile(const RadialGrid& g, std::size_t k) {
    SpectralField F(g);
    F[k] = 1.0;
    return inverse(F);
}

// Data with almost all spectral mass inside the grid window; wide bumps put mass
// below the lowest resolvable block and the truncated sums then undercount.
std::vector<RadialField> corpus(const RadialGrid& g) {
    return {profiles::gaussian_bump(g, 1.0, 3.0, 0.5), profiles::gaussian_bump(g, -0.4, 6.0, 0.8),
            profiles::exp_profile(g), profiles::sine_arch(g), band_field(g, 5, 0.5, 8.0)};
}

}  // namespace

TEST_CASE("phi is one below 1, zero above 2, monotone between") {
    for (double l = 0.0; l <= 1.0; l += 0.01) CHECK(SmoothCutoff::phi(l) == 1.0);
    for (double l = 2.0; l <= 5.0; l += 0.01) CHECK(SmoothCutoff::phi(l) == 0.0);
    double prev = 1.0;
    for (double l = 1.0; l <= 2.0; l += 1e-3) {
        const double v = SmoothCutoff::phi(l);
        CHECK(v <= prev);
        CHECK(v >= 0.0);
        prev = v;
    }
    // chi(2 - l) and chi(l - 1) coincide at l = 3/2
    CHECK(SmoothCutoff::phi(1.5) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("dyadic rescalings") {
    const double N = 4.0;
    CHECK(SmoothCutoff::phi_N(6.0, N) == SmoothCutoff::phi(1.5));
    CHECK(SmoothCutoff::psi_N(1.9, N) == 0.0);
    CHECK(SmoothCutoff::psi_N(8.1, N) == 0.0);
    CHECK(SmoothCutoff::psi_N(4.0, N) == 1.0);
    for (double l = 0.9; l < 17.0; l += 0.05) {
        const double three = SmoothCutoff::psi_N(l, N / 2) + SmoothCutoff::psi_N(l, N) + SmoothCutoff::psi_N(l, 2 * N);
        CHECK(SmoothCutoff::psi_tilde_N(l, N) == doctest::Approx(three).epsilon(1e-14).scale(1.0));
    }
    CHECK(Dyadic::from_value(8.0).exponent == 3);
    CHECK(Dyadic::from_value(0.25).exponent == -2);
    CHECK_THROWS_AS(Dyadic::from_value(3.0), std::invalid_argument);
}

TEST_CASE("Littlewood-Paley pieces partition unity on the grid window") {
    const RadialGrid g = make_grid(32.0, 4096);
    double worst = 0.0;
    for (std::size_t k = 0; k < g.interior(); ++k) {
        const double l = g.frequency(k);
        if (l < resolvable_low(g) || l > resolvable_high(g)) continue;
        double sum = 0.0;
        for (int e = -12; e <= 14; ++e) sum += SmoothCutoff::psi_N(l, std::exp2(e));
        worst = std::max(worst, std::abs(1.0 - sum));
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("Mikhlin-type symbol bounds by finite differences") {
    const double h = 1e-4;
    double d1 = 0.0, d2 = 0.0;
    for (double l = 0.5; l <= 2.5; l += 1e-3) {
        const double p0 = SmoothCutoff::phi(l), pp = SmoothCutoff::phi(l + h), pm = SmoothCutoff::phi(l - h);
        d1 = std::max(d1, std::abs(l * (pp - pm) / (2 * h)));
        d2 = std::max(d2, std::abs(l * l * (pp - 2 * p0 + pm) / (h * h)));
    }
    CHECK(std::isfinite(d1));
    CHECK(std::isfinite(d2));
    CHECK(d1 < 10.0);
    CHECK(d2 < 100.0);
}

TEST_CASE("leq and gt are complementary") {
    const RadialGrid g = make_grid(32.0, 4096);
    const RadialField f = random_field(g, 9);
    for (int e : {-1, 0, 2, 5}) {
        const RadialField lo = lp_project(f, {Dyadic{e}, BlockKind::leq});
        const RadialField hi = lp_project(f, {Dyadic{e}, BlockKind::gt});
        CHECK(max_abs_diff(lo + hi, f) <= 1e-12 * f.max_abs());
    }
}

TEST_CASE("sum of resolvable blocks recovers band-limited data") {
    const RadialGrid g = make_grid(32.0, 4096);
    const RadialField f = band_field(g, 4, 0.5, 16.0);
    RadialField sum(g);
    for (Dyadic N : resolvable_dyadics(g)) sum += lp_project(f, {N, BlockKind::at});
    CHECK(max_abs_diff(sum, f) <= 1e-8 * f.max_abs());
}

TEST_CASE("blocks act diagonally and tilde blocks fix single blocks") {
    const RadialGrid g = make_grid(32.0, 4096);
    const RadialField e = eigen_profile(g, 40);
    const double l = g.frequency(40);
    const RadialField p = lp_project(e, {Dyadic{3}, BlockKind::at});
    CHECK(max_abs_diff(p, SmoothCutoff::psi_N(l, 8.0) * e) <= 1e-12 * e.max_abs());

    const RadialField f = random_field(g, 2);
    for (int k : {1, 2, 4}) {
        const RadialField b = lp_project(f, {Dyadic{k}, BlockKind::at});
        CHECK(max_abs_diff(lp_project(b, {Dyadic{k}, BlockKind::tilde}), b) <= 1e-12 * f.max_abs());
    }
}

TEST_CASE("unresolvable blocks are rejected") {
    const RadialGrid g = make_grid(32.0, 4096);
    const RadialField f(g);
    CHECK_THROWS_AS(lp_project(f, {Dyadic{-4}, BlockKind::at}), std::invalid_argument);
    CHECK_THROWS_AS(lp_project(f, {Dyadic{10}, BlockKind::at}), std::invalid_argument);
    CHECK_NOTHROW(lp_project(f, {Dyadic{6}, BlockKind::at}));
    CHECK_THROWS_AS(lp_project(f, {Dyadic{7}, BlockKind::at}), std::invalid_argument);
}

TEST_CASE("sobolev_norm: Parseval, closed form, guard") {
    const RadialGrid g = make_grid(32.0, 4096);
    const RadialField f = profiles::exp_profile(g);
    CHECK(sobolev_norm(f, 0.0) == doctest::Approx(lq_norm(f, 2.0)).epsilon(1e-12));
    // (8/pi) int lambda⁴ / (1 + lambda²)⁴ dlambda = 1/4
    CHECK(std::abs(sobolev_norm(f, 1.0) - 0.5) <= 1e-4);
    CHECK_THROWS_AS(sobolev_norm(f, 2.5), std::invalid_argument);
    CHECK_THROWS_AS(sobolev_norm(f, -2.1), std::invalid_argument);
}

TEST_CASE("Bernstein equivalence for a single block") {
    const RadialGrid g = make_grid(32.0, 4096);
    const RadialField f = random_field(g, 6);
    for (int e : {-1, 0, 2, 4})
        for (double s : {-1.0, 0.5, 1.0, 2.0}) {
            const double N = std::exp2(e);
            const RadialField b = lp_project(f, {Dyadic{e}, BlockKind::at});
            const double r = sobolev_norm(b, s) / sobolev_norm(b, 0.0);
            CHECK(r >= std::min(std::pow(N / 2, s), std::pow(2 * N, s)) * (1 - 1e-12));
            CHECK(r <= std::max(std::pow(N / 2, s), std::pow(2 * N, s)) * (1 + 1e-12));
        }
}

TEST_CASE("sobolev_norm is a norm") {
    const RadialGrid g = make_grid(16.0, 1024);
    for (unsigned seed = 0; seed < 5; ++seed) {
        const RadialField a = random_field(g, seed), b = random_field(g, seed + 100);
        for (double s : {-1.0, 0.0, 0.875, 1.5}) {
            CHECK(sobolev_norm(-3.0 * a, s) == doctest::Approx(3.0 * sobolev_norm(a, s)).epsilon(1e-10));
            CHECK(sobolev_norm(a + b, s) <= (sobolev_norm(a, s) + sobolev_norm(b, s)) * (1 + 1e-10));
        }
    }
}

TEST_CASE("besov_norm") {
    const RadialGrid g = make_grid(32.0, 4096);
    CHECK(besov_norm(RadialField(g), 0.5, 2.0, 2.0) == 0.0);
    for (const RadialField& f : {band_field(g, 1, 0.5, 16.0), band_field(g, 2, 1.0, 64.0)}) {
        const double b = besov_norm(f, 0.0, 2.0, 2.0);
        const double l2 = lq_norm(f, 2.0);
        CHECK(b >= 0.5 * l2);
        CHECK(b <= 2.0 * l2);
    }

    // lambda_k = k / 16 on L = 16 pi, so k = 32 sits exactly at N = 2, where psi_2 = 1
    // and every other psi vanishes.
    const RadialGrid h = make_grid(16.0 * pi, 1024);
    const RadialField e = eigen_profile(h, 31);
    CHECK(h.frequency(31) == doctest::Approx(2.0).epsilon(1e-15));
    for (double s : {0.0, 0.5, -1.0})
        for (double q : {1.0, 2.0, 4.0, kInf})
            for (double r : {1.0, 2.0, kInf})
                CHECK(std::abs(besov_norm(e, s, q, r) - std::pow(2.0, s) * lq_norm(e, q)) <=
                      1e-8 * std::pow(2.0, s) * lq_norm(e, q));
}

TEST_CASE("bernstein_ratio") {
    const RadialGrid g = make_grid(32.0, 4096);
    CHECK_THROWS_AS(bernstein_ratio(RadialField(g), Dyadic{0}, 2.0, 2.0), std::invalid_argument);
    const RadialField f = profiles::gaussian_bump(g, 1.0, 3.0, 0.5);
    CHECK_THROWS_AS(bernstein_ratio(f, Dyadic{0}, 4.0, 2.0), std::invalid_argument);
    for (const RadialField& c : corpus(g))
        for (int e = -1; e <= 4; ++e)
            for (double p : {1.0, 2.0, 4.0, kInf}) CHECK(bernstein_ratio(c, Dyadic{e}, p, p) <= 4.0);

    // p = 2, q = inf carries N^{3/2}
    const RadialField b = lp_project(f, {Dyadic{2}, BlockKind::at});
    const double expected = lq_norm(b, kInf) / (std::pow(4.0, 1.5) * lq_norm(f, 2.0));
    CHECK(bernstein_ratio(f, Dyadic{2}, 2.0, kInf) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("square_function_ratio") {
    const RadialGrid g = make_grid(32.0, 4096);
    CHECK_THROWS_AS(square_function_ratio(RadialField(g), 0.0, 2.0), std::invalid_argument);
    const RadialField f = random_field(g, 8);
    CHECK_THROWS_AS(square_function_ratio(f, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(square_function_ratio(f, 0.0, kInf), std::invalid_argument);
    for (int e : {0, 2}) {
        const RadialField b = lp_project(f, {Dyadic{e}, BlockKind::at});
        for (double s : {0.0, 0.5, 1.0})
            for (double p : {1.5, 2.0, 4.0}) {
                const double r = square_function_ratio(b, s, p);
                CHECK(r >= 0.5);
                CHECK(r <= 2.0);
            }
    }
    for (const RadialField& c : corpus(g)) {
        const double r = square_function_ratio(c, 0.0, 2.0);
        CHECK(r >= 0.7);
        CHECK(r <= 1.5);
    }
}
