#pragma once

// Radial grids and field containers on the exterior of the unit ball.
//
// The physical domain r >= 1 is truncated to r in [1, 1 + L] and sampled on a
// uniform mesh in rho = r - 1. Fields store only the n - 1 interior nodes; the
// Dirichlet values at r = 1 and r = 1 + L are implicit zeros.

#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace exwave {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

class RadialGrid {
public:
    /// Throws std::invalid_argument unless L > 0 and n is a power of two >= 8.
    RadialGrid(double length, std::size_t intervals);

    double length() const { return length_; }
    std::size_t intervals() const { return intervals_; }
    /// Number of stored samples, n - 1.
    std::size_t interior() const { return intervals_ - 1; }
    double spacing() const { return length_ / static_cast<double>(intervals_); }

    /// rho_j = j * drho for node j in [0, n].
    double rho(std::size_t node) const { return static_cast<double>(node) * spacing(); }
    double radius(std::size_t node) const { return 1.0 + rho(node); }

    /// Radius of the i-th stored sample (node i + 1).
    double sample_radius(std::size_t i) const { return radius(i + 1); }

    /// Frequency lambda_k = k pi / L of the i-th spectral coefficient (k = i + 1).
    double frequency(std::size_t i) const;
    double min_frequency() const { return frequency(0); }
    double max_frequency() const { return frequency(interior() - 1); }

    bool operator==(const RadialGrid&) const = default;

private:
    double length_;
    std::size_t intervals_;
};

RadialGrid make_grid(double length, std::size_t intervals);

/// Real samples f(r_j), j = 1..n-1, of a radial function vanishing at both ends.
class RadialField {
public:
    explicit RadialField(RadialGrid grid);
    RadialField(RadialGrid grid, std::vector<double> values);

    template <class Fn>
    static RadialField sample(const RadialGrid& grid, Fn&& fn) {
        RadialField out(grid);
        for (std::size_t i = 0; i < grid.interior(); ++i) out.values_[i] = fn(grid.sample_radius(i));
        return out;
    }

    const RadialGrid& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }
    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }

    bool all_finite() const;
    double max_abs() const;

    RadialField& operator+=(const RadialField& other);
    RadialField& operator-=(const RadialField& other);
    RadialField& operator*=(double c);

private:
    RadialGrid grid_;
    std::vector<double> values_;
};

RadialField operator+(RadialField a, const RadialField& b);
RadialField operator-(RadialField a, const RadialField& b);
RadialField operator*(double c, RadialField a);
RadialField operator*(RadialField a, double c);

/// Largest node-wise |a - b|. Grids must match.
double max_abs_diff(const RadialField& a, const RadialField& b);

struct ComplexRadialField {
    RadialField re;
    RadialField im;

    ComplexRadialField(RadialField real, RadialField imag);
    const RadialGrid& grid() const { return re.grid(); }
};

double max_abs_diff(const ComplexRadialField& a, const ComplexRadialField& b);

/// Distorted Fourier coefficients F_k at lambda_k = k pi / L, k = 1..n-1.
class SpectralField {
public:
    explicit SpectralField(RadialGrid grid);
    SpectralField(RadialGrid grid, std::vector<double> coeffs);

    const RadialGrid& grid() const { return grid_; }
    std::size_t size() const { return coeffs_.size(); }
    std::span<const double> coeffs() const { return coeffs_; }
    std::span<double> coeffs() { return coeffs_; }
    double operator[](std::size_t i) const { return coeffs_[i]; }
    double& operator[](std::size_t i) { return coeffs_[i]; }
    double frequency(std::size_t i) const { return grid_.frequency(i); }

private:
    RadialGrid grid_;
    std::vector<double> coeffs_;
};

struct WaveState {
    double t = 0.0;
    RadialField u;
    RadialField ut;

    WaveState(double time, RadialField displacement, RadialField velocity);
    const RadialGrid& grid() const { return u.grid(); }
};

/// Time-ordered snapshots on a single grid.
class Trajectory {
public:
    explicit Trajectory(double dt_sample = 0.0) : dt_sample_(dt_sample) {}

    /// Throws std::invalid_argument if time does not strictly increase or the grid differs.
    void push_back(WaveState state);

    bool empty() const { return states_.empty(); }
    std::size_t size() const { return states_.size(); }
    const WaveState& operator[](std::size_t i) const { return states_[i]; }
    const WaveState& front() const { return states_.front(); }
    const WaveState& back() const { return states_.back(); }
    const std::vector<WaveState>& states() const { return states_; }
    double dt_sample() const { return dt_sample_; }
    std::vector<double> times() const;

    auto begin() const { return states_.begin(); }
    auto end() const { return states_.end(); }

private:
    std::vector<WaveState> states_;
    double dt_sample_;
};

/// (sum_j |f_j|^q r_j^2 drho)^(1/q), or max_j |f_j| for q = infinity.
/// Uses the radial measure s^2 ds without the angular factor.
double lq_norm(const RadialField& f, double q);

/// Same norm applied to the pointwise modulus of a complex field.
double lq_norm(const ComplexRadialField& f, double q);

/// Largest rho_j with |f_j| > rel_tol * max|f|; 0 for the zero field.
double support_extent(const RadialField& f, double rel_tol = 1e-10);

}  // namespace exwave
