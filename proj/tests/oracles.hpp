#pragma once

// Independent reference computations shared by the unit tests and the
// acceptance run. None of them calls the code path it is used to check.

#include "hypack/geometry.hpp"
#include "hypack/profile.hpp"
#include "hypack/simplex.hpp"

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <vector>

namespace oracle {

using namespace hypack;

inline std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    x.back() = b;
    return x;
}

/// phi_lambda on H^3.
inline double h3_closed_form(double lambda, double t) {
    if (t == 0.0) return 1.0;
    return std::sin(lambda * t) / (lambda * std::sinh(t));
}

/// Adaptive Gauss-Kronrod over each spline segment: independent of the
/// fixed-panel Gauss-Legendre path used by forward_transform.
inline double volume_integral_quadrature(const RadialProfile& f) {
    using gk = boost::math::quadrature::gauss_kronrod<double, 31>;
    double total = 0.0;
    for (std::size_t i = 0; i < f.segment_count(); ++i) {
        const CubicPiece p = f.segment(i);
        total += gk::integrate([&](double t) { return p(t) * sphere_area(f.space(), t); }, p.left, p.right, 6, 1e-13);
    }
    return total;
}

/// Truncated Gaussian on a grid graded towards t = 0, where the natural end
/// condition f''(0) = 0 leaves a boundary layer of width ~ the first step.
inline RadialProfile gaussian_profile(const Space& s, double sigma, double T, double h) {
    std::vector<double> t{0.0};
    for (double x = 1e-4; x < h; x *= 1.5) t.push_back(x);
    const auto m = static_cast<std::size_t>(std::round((T - h) / h));
    for (std::size_t i = 0; i <= m; ++i) t.push_back(h + (T - h) * static_cast<double>(i) / static_cast<double>(m));
    std::vector<double> v;
    for (double x : t) v.push_back(std::exp(-x * x / (2 * sigma * sigma)));
    return RadialProfile(s, t, v);
}

/// Ball autocorrelation t -> vol(B_r(x) cap B_r(y)) sampled on [0, 2r]. Its
/// transform is the square of the ball indicator's transform.
inline RadialProfile ball_autocorrelation(const Space& s, double r, std::size_t segments) {
    std::vector<double> t = linspace(0.0, 2.0 * r, segments + 1);
    std::vector<double> v;
    for (double x : t) v.push_back(ball_intersection_volume(s, r, x));
    v.back() = 0.0;
    return RadialProfile(s, t, v);
}

/// Packing density of a lattice with the given generator rows: the ball of
/// half the minimal distance over the covolume sqrt(det Gram).
inline double lattice_density(const Eigen::MatrixXd& basis, double min_distance) {
    const double covolume = std::sqrt((basis * basis.transpose()).determinant());
    return ball_volume(Space::euclidean(static_cast<int>(basis.cols())), 0.5 * min_distance) / covolume;
}

inline double integer_lattice_floor() { return lattice_density(Eigen::MatrixXd::Identity(1, 1), 1.0); }

inline double hexagonal_floor() {
    Eigen::MatrixXd b(2, 2);
    b << 1.0, 0.0, 0.5, std::sqrt(3.0) / 2.0;
    return lattice_density(b, 1.0);
}

inline double e8_floor() {
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(8, 8);
    b(0, 0) = 2.0;
    for (int i = 1; i < 7; ++i) {
        b(i, i - 1) = -1.0;
        b(i, i) = 1.0;
    }
    b.row(7).setConstant(0.5);
    return lattice_density(b, std::sqrt(2.0));
}

/// Brute force: every choice of n linearly independent rows fixes a candidate
/// vertex; the optimum of a bounded feasible LP is the best feasible one.
inline std::optional<double> vertex_enumeration(const LinearProgram& lp) {
    const std::size_t n = lp.variables(), m = lp.constraints();
    std::optional<double> best;
    std::vector<bool> pick(m, false);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(n), true);
    do {
        Eigen::MatrixXd a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        Eigen::VectorXd b(static_cast<Eigen::Index>(n));
        Eigen::Index k = 0;
        for (std::size_t i = 0; i < m; ++i) {
            if (!pick[i]) continue;
            for (std::size_t j = 0; j < n; ++j) a(k, static_cast<Eigen::Index>(j)) = lp.rows[i][j];
            b(k++) = lp.rhs[i];
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
        if (lu.rank() < static_cast<Eigen::Index>(n)) continue;
        const Eigen::VectorXd x = lu.solve(b);
        bool feasible = true;
        for (std::size_t i = 0; i < m && feasible; ++i) {
            double ax = 0.0;
            for (std::size_t j = 0; j < n; ++j) ax += lp.rows[i][j] * x(static_cast<Eigen::Index>(j));
            feasible = lp.sense[i] == RowSense::equal ? std::abs(ax - lp.rhs[i]) <= 1e-9 : ax <= lp.rhs[i] + 1e-9;
        }
        if (!feasible) continue;
        double obj = 0.0;
        for (std::size_t j = 0; j < n; ++j) obj += lp.objective[j] * x(static_cast<Eigen::Index>(j));
        if (!best || obj < *best) best = obj;
    } while (std::prev_permutation(pick.begin(), pick.end()));
    return best;
}

/// n variables bounded by x_j >= -5 and sum x_j <= 5, plus random cuts.
inline LinearProgram random_bounded_lp(std::mt19937_64& rng, std::size_t n, std::size_t cuts) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    LinearProgram lp;
    for (std::size_t j = 0; j < n; ++j) lp.objective.push_back(u(rng));
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<double> row(n, 0.0);
        row[j] = -1.0;
        lp.add_row(row, RowSense::less_equal, 5.0);
    }
    lp.add_row(std::vector<double>(n, 1.0), RowSense::less_equal, 5.0);
    for (std::size_t i = 0; i < cuts; ++i) {
        std::vector<double> row(n);
        for (double& v : row) v = u(rng);
        lp.add_row(row, RowSense::less_equal, 2.0 * u(rng));
    }
    return lp;
}

}  // namespace oracle
