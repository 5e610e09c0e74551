#include "exwave/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace exwave {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void require_same_grid(const RadialGrid& a, const RadialGrid& b, const char* what) {
    if (!(a == b)) throw std::invalid_argument(std::string(what) + ": grid mismatch");
}

}  // namespace

RadialGrid::RadialGrid(double length, std::size_t intervals) : length_(length), intervals_(intervals) {
    if (!(length > 0.0) || !std::isfinite(length))
        throw std::invalid_argument("RadialGrid: length must be positive and finite");
    if (intervals < 8 || !is_power_of_two(intervals))
        throw std::invalid_argument("RadialGrid: intervals must be a power of two >= 8, got " +
                                    std::to_string(intervals));
}

double RadialGrid::frequency(std::size_t i) const {
    return static_cast<double>(i + 1) * std::numbers::pi / length_;
}

RadialGrid make_grid(double length, std::size_t intervals) { return RadialGrid(length, intervals); }

RadialField::RadialField(RadialGrid grid) : grid_(grid), values_(grid.interior(), 0.0) {}

RadialField::RadialField(RadialGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.interior())
        throw std::invalid_argument("RadialField: expected " + std::to_string(grid_.interior()) +
                                    " interior values, got " + std::to_string(values_.size()));
}

bool RadialField::all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double RadialField::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

RadialField& RadialField::operator+=(const RadialField& other) {
    require_same_grid(grid_, other.grid_, "RadialField +=");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
    return *this;
}

RadialField& RadialField::operator-=(const RadialField& other) {
    require_same_grid(grid_, other.grid_, "RadialField -=");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
    return *this;
}

RadialField& RadialField::operator*=(double c) {
    for (double& v : values_) v *= c;
    return *this;
}

RadialField operator+(RadialField a, const RadialField& b) { return a += b; }
RadialField operator-(RadialField a, const RadialField& b) { return a -= b; }
RadialField operator*(double c, RadialField a) { return a *= c; }
RadialField operator*(RadialField a, double c) { return a *= c; }

double max_abs_diff(const RadialField& a, const RadialField& b) {
    require_same_grid(a.grid(), b.grid(), "max_abs_diff");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

ComplexRadialField::ComplexRadialField(RadialField real, RadialField imag)
    : re(std::move(real)), im(std::move(imag)) {
    require_same_grid(re.grid(), im.grid(), "ComplexRadialField");
}

double max_abs_diff(const ComplexRadialField& a, const ComplexRadialField& b) {
    require_same_grid(a.grid(), b.grid(), "max_abs_diff");
    double m = 0.0;
    for (std::size_t i = 0; i < a.re.size(); ++i)
        m = std::max(m, std::hypot(a.re[i] - b.re[i], a.im[i] - b.im[i]));
    return m;
}

SpectralField::SpectralField(RadialGrid grid) : grid_(grid), coeffs_(grid.interior(), 0.0) {}

SpectralField::SpectralField(RadialGrid grid, std::vector<double> coeffs)
    : grid_(grid), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != grid_.interior())
        throw std::invalid_argument("SpectralField: expected " + std::to_string(grid_.interior()) +
                                    " coefficients, got " + std::to_string(coeffs_.size()));
}

WaveState::WaveState(double time, RadialField displacement, RadialField velocity)
    : t(time), u(std::move(displacement)), ut(std::move(velocity)) {
    require_same_grid(u.grid(), ut.grid(), "WaveState");
}

void Trajectory::push_back(WaveState state) {
    if (!states_.empty()) {
        if (!(state.t > states_.back().t))
            throw std::invalid_argument("Trajectory: times must be strictly increasing");
        require_same_grid(state.grid(), states_.back().grid(), "Trajectory");
    }
    states_.push_back(std::move(state));
}

std::vector<double> Trajectory::times() const {
    std::vector<double> out;
    out.reserve(states_.size());
    for (const auto& s : states_) out.push_back(s.t);
    return out;
}

namespace {

template <class Magnitude>
double weighted_norm(const RadialGrid& grid, std::size_t count, double q, Magnitude&& mag) {
    if (!(q >= 1.0)) throw std::invalid_argument("lq_norm: exponent must be >= 1");
    if (std::isinf(q)) {
        double m = 0.0;
        for (std::size_t i = 0; i < count; ++i) m = std::max(m, mag(i));
        return m;
    }
    const double h = grid.spacing();
    double sum = 0.0;
    if (q == 2.0) {
        for (std::size_t i = 0; i < count; ++i) {
            const double r = grid.sample_radius(i);
            const double a = mag(i);
            sum += a * a * r * r;
        }
        return std::sqrt(sum * h);
    }
    for (std::size_t i = 0; i < count; ++i) {
        const double r = grid.sample_radius(i);
        const double a = mag(i);
        if (a != 0.0) sum += std::pow(a, q) * r * r;
    }
    return std::pow(sum * h, 1.0 / q);
}

}  // namespace

double lq_norm(const RadialField& f, double q) {
    return weighted_norm(f.grid(), f.size(), q, [&](std::size_t i) { return std::abs(f[i]); });
}

double lq_norm(const ComplexRadialField& f, double q) {
    return weighted_norm(f.grid(), f.re.size(), q,
                         [&](std::size_t i) { return std::hypot(f.re[i], f.im[i]); });
}

double support_extent(const RadialField& f, double rel_tol) {
    const double peak = f.max_abs();
    if (peak == 0.0) return 0.0;
    for (std::size_t i = f.size(); i-- > 0;)
        if (std::abs(f[i]) > rel_tol * peak) return f.grid().rho(i + 1);
    return 0.0;
}

}  // namespace exwave
