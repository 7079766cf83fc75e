#pragma once

// Real hyperbolic space (hyperboloid model, curvature -1) and Euclidean space:
// metric, polar volume density, ball volumes and uniform sampling in balls.

#include "hypack/errors.hpp"
#include "hypack/quadrature.hpp"
#include "hypack/random.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace hypack {

enum class SpaceKind { hyperbolic, euclidean };

inline std::string to_string(SpaceKind kind) {
    return kind == SpaceKind::hyperbolic ? "hyperbolic" : "euclidean";
}

inline SpaceKind parse_space_kind(const std::string& s) {
    if (s == "hyperbolic") return SpaceKind::hyperbolic;
    if (s == "euclidean") return SpaceKind::euclidean;
    throw InvalidInput("unknown space kind '" + s + "'");
}

/// The ambient geometry. `rho` is the spectral shift (n-1)/2 of hyperbolic
/// space (0 for Euclidean space) and `omega` the area of the unit (n-1)-sphere.
class Space {
public:
    Space(SpaceKind kind, int n) : kind_(kind), n_(n) {
        if (kind == SpaceKind::hyperbolic && n < 2)
            throw InvalidInput("hyperbolic space needs dimension >= 2");
        if (n < 1) throw InvalidInput("dimension must be >= 1");
        rho_ = kind == SpaceKind::hyperbolic ? 0.5 * (n - 1) : 0.0;
        omega_ = 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
    }

    static Space hyperbolic(int n) { return Space(SpaceKind::hyperbolic, n); }
    static Space euclidean(int n) { return Space(SpaceKind::euclidean, n); }

    SpaceKind kind() const noexcept { return kind_; }
    int dim() const noexcept { return n_; }
    double rho() const noexcept { return rho_; }
    double omega() const noexcept { return omega_; }
    bool is_hyperbolic() const noexcept { return kind_ == SpaceKind::hyperbolic; }

    /// Number of stored coordinates per point (n+1 on the hyperboloid).
    std::size_t coordinate_count() const noexcept {
        return static_cast<std::size_t>(is_hyperbolic() ? n_ + 1 : n_);
    }

    friend bool operator==(const Space&, const Space&) = default;

private:
    SpaceKind kind_;
    int n_;
    double rho_;
    double omega_;
};

/// A point of the space: Minkowski coordinates (x0, x1, ..., xn) with
/// -x0^2 + x1^2 + ... = -1 and x0 >= 1 for hyperbolic space, Cartesian
/// coordinates otherwise.
struct Point {
    std::vector<double> coords;
};

inline double minkowski_product(std::span<const double> x, std::span<const double> y) noexcept {
    double s = -x[0] * y[0];
    for (std::size_t i = 1; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

inline void validate(const Space& space, const Point& p) {
    if (p.coords.size() != space.coordinate_count())
        throw InvalidInput("point has " + std::to_string(p.coords.size()) + " coordinates, expected " +
                           std::to_string(space.coordinate_count()));
    for (double c : p.coords)
        if (!std::isfinite(c)) throw InvalidInput("point has a non-finite coordinate");
    if (space.is_hyperbolic()) {
        const double q = minkowski_product(p.coords, p.coords);
        // Relative to x0^2: the cancellation in -x0^2 + |x|^2 grows with distance from o.
        const double scale = std::max(1.0, p.coords[0] * p.coords[0]);
        if (p.coords[0] < 1.0 - 1e-12 || std::abs(q + 1.0) > 1e-9 * scale)
            throw InvalidInput("point is not on the upper hyperboloid");
    }
}

/// The base point o.
inline Point origin(const Space& space) {
    Point o{std::vector<double>(space.coordinate_count(), 0.0)};
    if (space.is_hyperbolic()) o.coords[0] = 1.0;
    return o;
}

/// The point at distance t from o in the unit direction u (n components).
inline Point polar_point(const Space& space, double t, std::span<const double> u) {
    Point p{std::vector<double>(space.coordinate_count(), 0.0)};
    if (space.is_hyperbolic()) {
        const double s = std::sinh(t);
        p.coords[0] = std::cosh(t);
        for (std::size_t i = 0; i < u.size(); ++i) p.coords[i + 1] = s * u[i];
    } else {
        for (std::size_t i = 0; i < u.size(); ++i) p.coords[i] = t * u[i];
    }
    return p;
}

namespace detail {

/// Distance without validation; hot path of the simulator.
inline double distance_unchecked(const Space& space, std::span<const double> x,
                                 std::span<const double> y) noexcept {
    if (space.is_hyperbolic()) {
        // <x-y, x-y> = -2 - 2<x,y> = 4 sinh^2(d/2), formed from differences so
        // that nearby points keep full relative precision.
        double q = -(x[0] - y[0]) * (x[0] - y[0]);
        for (std::size_t i = 1; i < x.size(); ++i) q += (x[i] - y[i]) * (x[i] - y[i]);
        return 2.0 * std::asinh(0.5 * std::sqrt(std::max(q, 0.0)));
    }
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
    return std::sqrt(s);
}

/// Distance from o without validation.
inline double radius_unchecked(const Space& space, std::span<const double> x) noexcept {
    if (space.is_hyperbolic()) {
        double s = 0.0;
        for (std::size_t i = 1; i < x.size(); ++i) s += x[i] * x[i];
        return std::asinh(std::sqrt(s));
    }
    double s = 0.0;
    for (double c : x) s += c * c;
    return std::sqrt(s);
}

}  // namespace detail

inline double distance(const Space& space, const Point& x, const Point& y) {
    validate(space, x);
    validate(space, y);
    return detail::distance_unchecked(space, x.coords, y.coords);
}

/// Polar density A(t) of the volume measure: the area of the sphere of radius t.
inline double sphere_area(const Space& space, double t) {
    if (!(t >= 0.0)) throw InvalidInput("sphere_area: radius must be >= 0");
    const double base = space.is_hyperbolic() ? std::sinh(t) : t;
    return space.omega() * std::pow(base, space.dim() - 1);
}

/// Gauss-Legendre panels per unit radius for hyperbolic ball volumes with n >= 4.
inline constexpr double volume_panels_per_unit = 8.0;

inline double ball_volume(const Space& space, double R) {
    if (!(R >= 0.0)) throw InvalidInput("ball_volume: radius must be >= 0");
    const int n = space.dim();
    if (!space.is_hyperbolic()) return space.omega() * std::pow(R, n) / n;
    if (n == 2) return 2.0 * std::numbers::pi * (std::cosh(R) - 1.0);
    if (n == 3) return std::numbers::pi * (std::sinh(2.0 * R) - 2.0 * R);
    if (R == 0.0) return 0.0;
    const auto panels = static_cast<std::size_t>(std::max(4.0, std::ceil(volume_panels_per_unit * R)));
    return quadrature::integrate([&](double t) { return sphere_area(space, t); }, 0.0, R, panels);
}

/// Fraction of the unit (n-1)-sphere within angle theta of a fixed pole.
inline double cap_fraction(int n, double theta) {
    if (theta <= 0.0) return 0.0;
    if (theta >= std::numbers::pi) return 1.0;
    if (n == 1) return 0.5;
    const double s = std::sin(theta);
    const double half = 0.5 * boost::math::ibeta(0.5 * (n - 1), 0.5, s * s);
    return theta <= 0.5 * std::numbers::pi ? half : 1.0 - half;
}

/// vol(B_R(x) cap B_R(y)) for d(x, y) = t. As a function of t this is the
/// autocorrelation of the ball indicator, so its transform is a square.
inline double ball_intersection_volume(const Space& space, double R, double t) {
    if (!(R > 0.0) || !(t >= 0.0)) throw InvalidInput("ball_intersection_volume: need R > 0 and t >= 0");
    if (t >= 2.0 * R) return 0.0;
    const double inner = std::abs(R - t);
    double full = t < R ? ball_volume(space, R - t) : 0.0;
    if (t == 0.0) return full;
    const bool hyp = space.is_hyperbolic();
    const int n = space.dim();
    auto partial = [&](double s) {
        double c;
        if (hyp)
            c = (std::cosh(s) * std::cosh(t) - std::cosh(R)) / (std::sinh(s) * std::sinh(t));
        else
            c = (s * s + t * t - R * R) / (2.0 * s * t);
        return sphere_area(space, s) * cap_fraction(n, std::acos(std::clamp(c, -1.0, 1.0)));
    };
    if (n == 1) return full + 0.5 * ball_volume(space, R) - 0.5 * ball_volume(space, inner);
    // Over a unit parameter: near t = 0 or t = 2R the shell [inner, R] is too
    // thin for its own abscissae to stay distinct from the endpoints.
    const double width = R - inner;
    if (!(width > 0.0)) return full;
    boost::math::quadrature::tanh_sinh<double> integrator;
    return full + width * integrator.integrate([&](double u) { return partial(inner + u * width); }, 0.0, 1.0);
}

/// Radius of the ball of the given volume (bisection on ball_volume).
inline double ball_radius_for_volume(const Space& space, double volume) {
    if (!(volume > 0.0)) throw InvalidInput("ball_radius_for_volume: volume must be > 0");
    double hi = 1.0;
    while (ball_volume(space, hi) < volume) hi *= 2.0;
    double lo = 0.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (ball_volume(space, mid) < volume ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// Uniform direction on the unit (n-1)-sphere from normalized Gaussians.
inline std::vector<double> random_direction(int n, RandomStream& rng) {
    std::vector<double> u(static_cast<std::size_t>(n));
    double norm2 = 0.0;
    do {
        norm2 = 0.0;
        for (double& c : u) {
            c = rng.normal();
            norm2 += c * c;
        }
    } while (norm2 == 0.0);
    const double inv = 1.0 / std::sqrt(norm2);
    for (double& c : u) c *= inv;
    return u;
}

/// Uniform sampler for the ball B_R(o). Hyperbolic radii are drawn by
/// inverting a tabulated radial CDF (linear interpolation between nodes);
/// Euclidean radii use the exact inverse R * u^(1/n).
class BallSampler {
public:
    static constexpr std::size_t table_nodes = 4096;

    BallSampler(const Space& space, double R) : space_(space), R_(R) {
        if (!(R > 0.0)) throw InvalidInput("sample_uniform_ball: radius must be > 0");
        if (!space.is_hyperbolic()) return;
        radii_.resize(table_nodes);
        cdf_.resize(table_nodes);
        const double h = R / static_cast<double>(table_nodes - 1);
        double acc = 0.0;
        radii_[0] = 0.0;
        cdf_[0] = 0.0;
        for (std::size_t i = 1; i < table_nodes; ++i) {
            radii_[i] = h * static_cast<double>(i);
            acc += quadrature::integrate([&](double t) { return sphere_area(space, t); }, radii_[i - 1],
                                         radii_[i], 1);
            cdf_[i] = acc;
        }
        for (double& c : cdf_) c /= acc;
        cdf_.back() = 1.0;
        radii_.back() = R;
    }

    const Space& space() const noexcept { return space_; }
    double radius() const noexcept { return R_; }

    double sample_radius(RandomStream& rng) const {
        const double u = rng.uniform();
        if (!space_.is_hyperbolic()) return R_ * std::pow(u, 1.0 / space_.dim());
        const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
        const auto hi = static_cast<std::size_t>(std::min<std::ptrdiff_t>(
            std::max<std::ptrdiff_t>(it - cdf_.begin(), 1), static_cast<std::ptrdiff_t>(table_nodes - 1)));
        const std::size_t lo = hi - 1;
        const double span = cdf_[hi] - cdf_[lo];
        const double frac = span > 0.0 ? (u - cdf_[lo]) / span : 0.0;
        return radii_[lo] + frac * (radii_[hi] - radii_[lo]);
    }

    Point operator()(RandomStream& rng) const {
        const double t = sample_radius(rng);
        const auto u = random_direction(space_.dim(), rng);
        return polar_point(space_, t, u);
    }

private:
    Space space_;
    double R_;
    std::vector<double> radii_;
    std::vector<double> cdf_;
};

/// One uniform draw from B_R(o). Builds the radial table on every call;
/// hold a BallSampler to draw repeatedly.
inline Point sample_uniform_ball(const Space& space, double R, RandomStream& rng) {
    return BallSampler(space, R)(rng);
}

}  // namespace hypack
