#include "exwave/profiles.hpp"

#include <cmath>
#include <numbers>

namespace exwave::profiles {

RadialField gaussian_bump(const RadialGrid& grid, double amplitude, double center, double width) {
    return RadialField::sample(grid, [&](double r) {
        const double x = (r - 1.0 - center) / width;
        return amplitude * std::exp(-x * x);
    });
}

RadialField exp_profile(const RadialGrid& grid) {
    return RadialField::sample(grid, [](double r) { return (r - 1.0) * std::exp(-(r - 1.0)) / r; });
}

RadialField sine_arch(const RadialGrid& grid) {
    return RadialField::sample(grid, [](double r) {
        return r <= 2.0 ? std::sin(std::numbers::pi * (r - 1.0)) / r : 0.0;
    });
}

double window(double rho, double center, double halfwidth) {
    const double x = (rho - center) / halfwidth;
    if (std::abs(x) >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - x * x));
}

RadialField rough_profile(const RadialGrid& grid, double amplitude, double s, double delta, double center,
                          double halfwidth, Dyadic band) {
    const double beta = s - 0.5 + delta;
    RadialField raw = RadialField::sample(grid, [&](double r) {
        const double rho = r - 1.0;
        return amplitude * window(rho, center, halfwidth) * std::pow(std::abs(rho - center), beta) / r;
    });
    return lp_project(raw, {band, BlockKind::leq});
}

Dyadic cubic_safe_band(const RadialGrid& grid) {
    return Dyadic{static_cast<int>(std::floor(std::log2(grid.max_frequency() / 6.0)))};
}

}  // namespace exwave::profiles
