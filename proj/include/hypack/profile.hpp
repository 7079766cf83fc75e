#pragma once

#include "hypack/errors.hpp"
#include "hypack/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace hypack {

/// Coefficients of a cubic a + b u + c u^2 + d u^3 in the local variable
/// u = t - left on [left, right].
struct CubicPiece {
    double left;
    double right;
    double a, b, c, d;

    double operator()(double t) const noexcept {
        const double u = t - left;
        return a + u * (b + u * (c + u * d));
    }
};

/// A compactly supported radial function f(t), t = d(x, o), given by samples
/// on 0 = t_0 < ... < t_m = T and interpolated by natural cubic splines.
///
/// Break nodes split the grid into independent natural-spline pieces that
/// join continuously, so profiles with kinks (the triangle function, or LP
/// solutions with a corner at 2r) are represented exactly. f == 0 for t > T.
class RadialProfile {
public:
    RadialProfile(Space space, std::vector<double> t, std::vector<double> f, std::vector<double> breaks = {})
        : space_(space), t_(std::move(t)), f_(std::move(f)) {
        if (t_.size() < 2) throw InvalidInput("profile needs at least two nodes");
        if (t_.size() != f_.size()) throw InvalidInput("profile grid and values differ in length");
        if (t_.front() != 0.0) throw InvalidInput("profile grid must start at t = 0");
        for (std::size_t i = 1; i < t_.size(); ++i)
            if (!(t_[i] > t_[i - 1])) throw InvalidInput("profile grid must be strictly increasing");
        for (double v : f_)
            if (!std::isfinite(v)) throw InvalidInput("profile has a non-finite value");
        if (!std::isfinite(t_.back())) throw InvalidInput("profile support must be finite");

        std::sort(breaks.begin(), breaks.end());
        std::vector<std::size_t> cuts{0};
        for (double b : breaks) {
            const auto it = std::lower_bound(t_.begin(), t_.end(), b - 1e-12 * std::max(1.0, std::abs(b)));
            if (it == t_.end() || std::abs(*it - b) > 1e-12 * std::max(1.0, std::abs(b)))
                throw InvalidInput("profile break is not a grid node");
            const auto idx = static_cast<std::size_t>(it - t_.begin());
            if (idx == 0 || idx + 1 == t_.size()) continue;
            if (idx != cuts.back()) cuts.push_back(idx);
        }
        cuts.push_back(t_.size() - 1);
        for (std::size_t k = 1; k + 1 < cuts.size(); ++k) break_nodes_.push_back(cuts[k]);

        m_left_.assign(t_.size() - 1, 0.0);
        m_right_.assign(t_.size() - 1, 0.0);
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) fit_piece(cuts[k], cuts[k + 1]);
    }

    const Space& space() const noexcept { return space_; }
    double support() const noexcept { return t_.back(); }
    std::span<const double> grid() const noexcept { return t_; }
    std::span<const double> values() const noexcept { return f_; }
    std::size_t segment_count() const noexcept { return t_.size() - 1; }

    std::vector<double> breaks() const {
        std::vector<double> out;
        for (std::size_t idx : break_nodes_) out.push_back(t_[idx]);
        return out;
    }

    CubicPiece segment(std::size_t i) const noexcept {
        const double h = t_[i + 1] - t_[i];
        const double ml = m_left_[i];
        const double mr = m_right_[i];
        return CubicPiece{t_[i],
                          t_[i + 1],
                          f_[i],
                          (f_[i + 1] - f_[i]) / h - h * (2.0 * ml + mr) / 6.0,
                          0.5 * ml,
                          (mr - ml) / (6.0 * h)};
    }

    /// f(t); zero beyond the support.
    double operator()(double t) const {
        if (!(t >= 0.0)) throw InvalidInput("profile evaluated at negative radius");
        if (t > t_.back()) return 0.0;
        const auto it = std::upper_bound(t_.begin(), t_.end(), t);
        if (it != t_.begin() && *(it - 1) == t) return f_[static_cast<std::size_t>(it - t_.begin()) - 1];
        const auto i = static_cast<std::size_t>(it - t_.begin()) - 1;
        return eval_segment(i, t);
    }

    /// Real critical points of each cubic piece strictly inside its segment.
    std::vector<double> interior_critical_points() const {
        std::vector<double> out;
        for (std::size_t i = 0; i < segment_count(); ++i) {
            const CubicPiece p = segment(i);
            // f'(u) = b + 2c u + 3d u^2
            const double qa = 3.0 * p.d, qb = 2.0 * p.c, qc = p.b;
            const double h = p.right - p.left;
            auto keep = [&](double u) {
                if (u > 0.0 && u < h) out.push_back(p.left + u);
            };
            if (std::abs(qa) <= 1e-14 * (std::abs(qb) + std::abs(qc))) {
                if (qb != 0.0) keep(-qc / qb);
                continue;
            }
            const double disc = qb * qb - 4.0 * qa * qc;
            if (disc < 0.0) continue;
            const double sq = std::sqrt(disc);
            const double q = -0.5 * (qb + std::copysign(sq, qb));
            if (q != 0.0) {
                keep(q / qa);
                keep(qc / q);
            } else {
                keep(0.0);
            }
        }
        return out;
    }

    /// a*f + b*g for profiles on the same grid.
    friend RadialProfile combine(double a, const RadialProfile& f, double b, const RadialProfile& g) {
        if (f.t_ != g.t_ || f.break_nodes_ != g.break_nodes_ || !(f.space_ == g.space_))
            throw InvalidInput("combine: profiles live on different grids");
        std::vector<double> v(f.f_.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = a * f.f_[i] + b * g.f_[i];
        return RadialProfile(f.space_, f.t_, std::move(v), f.breaks());
    }

    RadialProfile scaled(double c) const {
        std::vector<double> v(f_);
        for (double& x : v) x *= c;
        return RadialProfile(space_, t_, std::move(v), breaks());
    }

private:
    double eval_segment(std::size_t i, double t) const noexcept {
        const double h = t_[i + 1] - t_[i];
        const double A = (t_[i + 1] - t) / h;
        const double B = 1.0 - A;
        return A * f_[i] + B * f_[i + 1] +
               ((A * A * A - A) * m_left_[i] + (B * B * B - B) * m_right_[i]) * h * h / 6.0;
    }

    // Natural cubic spline on nodes [lo, hi]: second derivatives vanish at both
    // ends; interior second derivatives from the tridiagonal continuity system.
    void fit_piece(std::size_t lo, std::size_t hi) {
        const std::size_t m = hi - lo;
        std::vector<double> M(m + 1, 0.0);
        if (m >= 2) {
            const std::size_t k = m - 1;
            std::vector<double> diag(k), upper(k), rhs(k);
            for (std::size_t j = 0; j < k; ++j) {
                const std::size_t i = lo + j + 1;
                const double h0 = t_[i] - t_[i - 1];
                const double h1 = t_[i + 1] - t_[i];
                diag[j] = (h0 + h1) / 3.0;
                upper[j] = h1 / 6.0;
                rhs[j] = (f_[i + 1] - f_[i]) / h1 - (f_[i] - f_[i - 1]) / h0;
            }
            // Thomas algorithm; the system is symmetric and diagonally dominant.
            for (std::size_t j = 1; j < k; ++j) {
                const double lower = upper[j - 1];
                const double w = lower / diag[j - 1];
                diag[j] -= w * upper[j - 1];
                rhs[j] -= w * rhs[j - 1];
            }
            M[k] = rhs[k - 1] / diag[k - 1];
            for (std::size_t j = k - 1; j-- > 0;) M[j + 1] = (rhs[j] - upper[j] * M[j + 2]) / diag[j];
        }
        for (std::size_t j = 0; j < m; ++j) {
            m_left_[lo + j] = M[j];
            m_right_[lo + j] = M[j + 1];
        }
    }

    Space space_;
    std::vector<double> t_;
    std::vector<double> f_;
    std::vector<std::size_t> break_nodes_;
    std::vector<double> m_left_;
    std::vector<double> m_right_;
};

/// Samples `f` on a uniform grid of `segments` intervals over [0, T].
template <class F>
RadialProfile sample_profile(const Space& space, double T, std::size_t segments, F&& f,
                             std::vector<double> breaks = {}) {
    std::vector<double> t(segments + 1), v(segments + 1);
    for (std::size_t i = 0; i <= segments; ++i) {
        t[i] = T * static_cast<double>(i) / static_cast<double>(segments);
        v[i] = f(t[i]);
    }
    t.back() = T;
    return RadialProfile(space, std::move(t), std::move(v), std::move(breaks));
}

}  // namespace hypack
