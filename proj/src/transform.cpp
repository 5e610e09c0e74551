#include "exwave/transform.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>
#include <vector>

namespace exwave {

namespace detail {

namespace {

// Plans are created once per length and only read afterwards. FFTW's planner is
// not reentrant, execution on caller-owned buffers is.
class PlanCache {
public:
    fftw_plan get(int m) {
        std::lock_guard lock(mutex_);
        auto it = plans_.find(m);
        if (it != plans_.end()) return it->second;
        std::vector<double> a(static_cast<std::size_t>(m)), b(static_cast<std::size_t>(m));
        // FFTW_ESTIMATE keeps the chosen algorithm, and therefore round-off, reproducible.
        fftw_plan p = fftw_plan_r2r_1d(m, a.data(), b.data(), FFTW_RODFT00,
                                       FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (p == nullptr) throw std::runtime_error("dst1: FFTW planning failed for length " + std::to_string(m));
        plans_.emplace(m, p);
        return p;
    }

    ~PlanCache() {
        for (auto& [m, p] : plans_) fftw_destroy_plan(p);
    }

private:
    std::mutex mutex_;
    std::map<int, fftw_plan> plans_;
};

PlanCache& plan_cache() {
    static PlanCache cache;
    return cache;
}

}  // namespace

void dst1(std::span<const double> in, std::span<double> out) {
    if (in.size() != out.size()) throw std::invalid_argument("dst1: size mismatch");
    const int m = static_cast<int>(in.size());
    if (m == 0) return;
    fftw_plan plan = plan_cache().get(m);
    // RODFT00 computes 2 * sum_j x_j sin(pi (j+1)(k+1) / (m+1)).
    std::vector<double> scratch(in.begin(), in.end());
    fftw_execute_r2r(plan, scratch.data(), out.data());
    for (double& v : out) v *= 0.5;
}

}  // namespace detail

namespace {

const double kSqrt2OverPi = std::sqrt(2.0 / std::numbers::pi);

}  // namespace

SpectralField forward(const RadialField& f) {
    const RadialGrid& grid = f.grid();
    std::vector<double> g(f.size());
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = grid.sample_radius(i) * f[i];
    SpectralField out(grid);
    detail::dst1(g, out.coeffs());
    const double scale = kSqrt2OverPi * grid.spacing();
    for (double& c : out.coeffs()) c *= scale;
    return out;
}

RadialField inverse(const SpectralField& F) {
    const RadialGrid& grid = F.grid();
    RadialField out(grid);
    detail::dst1(F.coeffs(), out.values());
    const double scale = kSqrt2OverPi * std::numbers::pi / grid.length();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= scale / grid.sample_radius(i);
    return out;
}

double spectral_l2_squared(const SpectralField& F) {
    double sum = 0.0;
    for (double c : F.coeffs()) sum += c * c;
    return sum * std::numbers::pi / F.grid().length();
}

double parseval_residual(const RadialField& f) {
    const double physical = std::pow(lq_norm(f, 2.0), 2);
    if (physical == 0.0) return 0.0;
    return std::abs(physical - spectral_l2_squared(forward(f))) / physical;
}

void scale_by_symbol(SpectralField& F, const Symbol& m) {
    for (std::size_t i = 0; i < F.size(); ++i) {
        const double lambda = F.frequency(i);
        const double factor = m(lambda);
        if (!std::isfinite(factor))
            throw std::invalid_argument("apply_symbol: symbol is not finite at lambda = " + std::to_string(lambda));
        F[i] *= factor;
    }
}

RadialField apply_symbol(const RadialField& f, const Symbol& m) {
    SpectralField F = forward(f);
    scale_by_symbol(F, m);
    return inverse(F);
}

}  // namespace exwave
