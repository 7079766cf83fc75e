#pragma once

// Dense two-phase revised simplex for small linear programs
//
//   minimize c.x  subject to  a_i.x <= b_i  or  a_i.x == b_i,  x free.
//
// The LPs built here have few variables and many rows, so the simplex runs on
// the dual in standard form,
//
//   minimize b.y  subject to  A^T y = -c,  y >= 0,
//
// whose basis is only (variables x variables). Equality rows become a pair of
// nonnegative dual parts. Phase 1 starts from one artificial column per dual
// equation. The basis is refactorized from scratch on every iteration, so
// round-off does not accumulate over long degenerate runs. Pivots follow
// Dantzig's rule and switch to Bland's rule after a run of degenerate pivots,
// which rules out cycling. The primal solution x is the simplex multiplier
// vector of the optimal dual basis.

#include "hypack/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

namespace hypack {

enum class RowSense { less_equal, equal };

struct LinearProgram {
    std::vector<double> objective;          // c, one entry per variable
    std::vector<std::vector<double>> rows;  // a_i
    std::vector<double> rhs;                // b_i
    std::vector<RowSense> sense;

    std::size_t variables() const noexcept { return objective.size(); }
    std::size_t constraints() const noexcept { return rows.size(); }

    void add_row(std::vector<double> a, RowSense s, double b) {
        rows.push_back(std::move(a));
        sense.push_back(s);
        rhs.push_back(b);
    }
};

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

inline std::string to_string(LpStatus s) {
    switch (s) {
        case LpStatus::optimal: return "optimal";
        case LpStatus::infeasible: return "infeasible";
        case LpStatus::unbounded: return "unbounded";
        case LpStatus::iteration_limit: return "iteration_limit";
    }
    return "unknown";
}

struct SimplexOptions {
    std::size_t max_iterations = 100000;
    double optimality_tolerance = 1e-12;  // on reduced costs of unit-scaled rows
    double pivot_tolerance = 1e-9;
    double feasibility_tolerance = 1e-8;
    std::size_t degenerate_streak_before_bland = 100;
};

struct LpSolution {
    LpStatus status = LpStatus::infeasible;
    std::vector<double> x;
    double objective = std::numeric_limits<double>::quiet_NaN();
    std::size_t iterations = 0;
    double residual = 0.0;  // max violation over rows scaled to unit max-norm
};

/// Largest violation of a constraint row, each row scaled by its max |a_ij|.
inline double feasibility_residual(const LinearProgram& lp, const std::vector<double>& x) {
    double worst = 0.0;
    for (std::size_t i = 0; i < lp.rows.size(); ++i) {
        double ax = 0.0, scale = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) {
            ax += lp.rows[i][j] * x[j];
            scale = std::max(scale, std::abs(lp.rows[i][j]));
        }
        if (scale == 0.0) scale = std::max(1.0, std::abs(lp.rhs[i]));
        const double d = (ax - lp.rhs[i]) / scale;
        worst = std::max(worst, lp.sense[i] == RowSense::equal ? std::abs(d) : d);
    }
    return worst;
}

namespace detail {

/// minimize g.w subject to M w = h, w >= 0.
class StandardFormSimplex {
public:
    enum class Outcome { optimal, unbounded, infeasible, iteration_limit };

    StandardFormSimplex(Eigen::MatrixXd M, Eigen::VectorXd g, Eigen::VectorXd h, const SimplexOptions& opt)
        : M_(std::move(M)), g_(std::move(g)), h_(std::move(h)), opt_(opt),
          m_(static_cast<std::size_t>(M_.rows())), cols_(static_cast<std::size_t>(M_.cols())),
          flip_(Eigen::VectorXd::Ones(M_.rows())) {
        for (Eigen::Index k = 0; k < M_.rows(); ++k) {
            if (h_(k) < 0.0) {
                flip_(k) = -1.0;
                M_.row(k) *= -1.0;
                h_(k) = -h_(k);
            }
        }
        for (std::size_t k = 0; k < m_; ++k) basis_.push_back(cols_ + k);
        in_basis_.assign(cols_, false);
        // A deterministic perturbation of the right-hand side breaks the heavy
        // degeneracy of h = -c; cleanup() removes it again.
        scale_ = std::max(1.0, h_.lpNorm<Eigen::Infinity>());
        rhs_ = h_;
        for (std::size_t k = 0; k < m_; ++k) {
            const double frac = std::fmod(0.6180339887498949 * static_cast<double>(k + 1), 1.0);
            rhs_(static_cast<Eigen::Index>(k)) += perturbation * scale_ * (1.0 + frac);
        }
    }

    Outcome solve() {
        const Outcome first = run(true);
        if (first == Outcome::iteration_limit) return first;
        double artificial = 0.0;
        for (std::size_t k = 0; k < m_; ++k)
            if (basis_[k] >= cols_) artificial += std::max(0.0, xb_(static_cast<Eigen::Index>(k)));
        if (artificial > phase_one_tolerance * scale_) return Outcome::infeasible;
        const Outcome second = run(false);
        if (second != Outcome::optimal) return second;
        return cleanup();
    }

    /// Simplex multipliers of the final basis, in the caller's row signs.
    Eigen::VectorXd multipliers() const { return flip_.cwiseProduct(pi_); }
    std::size_t iterations() const noexcept { return iterations_; }

private:
    bool artificial(std::size_t j) const noexcept { return j >= cols_; }

    void factorize(bool phase_one) {
        const auto m = static_cast<Eigen::Index>(m_);
        Eigen::MatrixXd B = Eigen::MatrixXd::Zero(m, m);
        Eigen::VectorXd cb(m);
        for (Eigen::Index k = 0; k < m; ++k) {
            const std::size_t j = basis_[static_cast<std::size_t>(k)];
            if (artificial(j)) {
                B(static_cast<Eigen::Index>(j - cols_), k) = 1.0;
                cb(k) = phase_one ? 1.0 : 0.0;
            } else {
                B.col(k) = M_.col(static_cast<Eigen::Index>(j));
                cb(k) = phase_one ? 0.0 : g_(static_cast<Eigen::Index>(j));
            }
        }
        lu_.compute(B);
        lut_.compute(B.transpose());
        xb_ = lu_.solve(rhs_);
        pi_ = lut_.solve(cb);
        // one step of iterative refinement on the multipliers
        const Eigen::VectorXd resid = cb - B.transpose() * pi_;
        pi_ += lut_.solve(resid);
    }

    Outcome run(bool phase_one) {
        std::size_t streak = 0;
        for (;;) {
            factorize(phase_one);
            if (iterations_ >= opt_.max_iterations) return Outcome::iteration_limit;

            const Eigen::VectorXd mtpi = M_.transpose() * pi_;
            const bool bland = streak >= opt_.degenerate_streak_before_bland;
            std::size_t enter = cols_;
            double best = -opt_.optimality_tolerance;
            for (std::size_t j = 0; j < cols_; ++j) {
                if (in_basis_[j]) continue;
                const auto J = static_cast<Eigen::Index>(j);
                const double d = (phase_one ? 0.0 : g_(J)) - mtpi(J);
                if (d >= -opt_.optimality_tolerance) continue;
                if (bland) {
                    enter = j;
                    break;
                }
                if (d < best) {
                    best = d;
                    enter = j;
                }
            }
            if (enter == cols_) return Outcome::optimal;

            const Eigen::VectorXd u = lu_.solve(M_.col(static_cast<Eigen::Index>(enter)));
            // Harris ratio test: bound the step with slightly relaxed ratios,
            // then take the largest pivot among rows within that bound.
            const double slack = bland ? 0.0 : harris_tolerance * scale_;
            double bound = std::numeric_limits<double>::infinity();
            bool blocked = false;
            for (std::size_t k = 0; k < m_; ++k) {
                const auto K = static_cast<Eigen::Index>(k);
                if (!phase_one && artificial(basis_[k])) {
                    // artificial at zero level: any nonzero entry blocks
                    if (std::abs(u(K)) > opt_.pivot_tolerance) blocked = true;
                    continue;
                }
                if (u(K) <= opt_.pivot_tolerance) continue;
                bound = std::min(bound, (std::max(0.0, xb_(K)) + slack) / u(K));
            }
            std::size_t leave = m_;
            double theta = 0.0;
            for (std::size_t k = 0; k < m_; ++k) {
                const auto K = static_cast<Eigen::Index>(k);
                double ratio;
                if (!phase_one && artificial(basis_[k])) {
                    if (std::abs(u(K)) <= opt_.pivot_tolerance) continue;
                    ratio = 0.0;
                } else {
                    if (blocked || u(K) <= opt_.pivot_tolerance) continue;
                    ratio = std::max(0.0, xb_(K)) / u(K);
                    if (ratio > bound) continue;
                }
                bool take = leave == m_;
                if (!take) {
                    const auto L = static_cast<Eigen::Index>(leave);
                    take = bland ? basis_[k] < basis_[leave] : std::abs(u(K)) > std::abs(u(L));
                }
                if (take) {
                    leave = k;
                    theta = ratio;
                }
            }
            if (leave == m_) return Outcome::unbounded;

            streak = theta <= 1e-14 ? streak + 1 : 0;
            if (!artificial(basis_[leave])) in_basis_[basis_[leave]] = false;
            basis_[leave] = enter;
            in_basis_[enter] = true;
            ++iterations_;
        }
    }

    /// Restores the unperturbed right-hand side and repairs primal
    /// feasibility of the (still dual feasible) basis with dual simplex steps.
    Outcome cleanup() {
        rhs_ = h_;
        for (;;) {
            factorize(false);
            std::size_t leave = m_;
            for (std::size_t k = 0; k < m_; ++k) {
                const double v = xb_(static_cast<Eigen::Index>(k));
                if (artificial(basis_[k]) && v > phase_one_tolerance * scale_) return Outcome::infeasible;
                if (v >= -cleanup_tolerance * scale_) continue;
                if (leave == m_ || v < xb_(static_cast<Eigen::Index>(leave))) leave = k;
            }
            if (leave == m_) return Outcome::optimal;
            if (iterations_ >= opt_.max_iterations) return Outcome::iteration_limit;

            Eigen::VectorXd e = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m_));
            e(static_cast<Eigen::Index>(leave)) = 1.0;
            const Eigen::VectorXd rho = lut_.solve(e);
            const Eigen::VectorXd alpha = M_.transpose() * rho;
            const Eigen::VectorXd mtpi = M_.transpose() * pi_;
            const double slack = harris_tolerance;
            double bound = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < cols_; ++j) {
                const auto J = static_cast<Eigen::Index>(j);
                if (in_basis_[j] || alpha(J) >= -opt_.pivot_tolerance) continue;
                bound = std::min(bound, (std::max(0.0, g_(J) - mtpi(J)) + slack) / -alpha(J));
            }
            std::size_t enter = cols_;
            for (std::size_t j = 0; j < cols_; ++j) {
                const auto J = static_cast<Eigen::Index>(j);
                if (in_basis_[j] || alpha(J) >= -opt_.pivot_tolerance) continue;
                if (std::max(0.0, g_(J) - mtpi(J)) / -alpha(J) > bound) continue;
                if (enter == cols_ || std::abs(alpha(J)) > std::abs(alpha(static_cast<Eigen::Index>(enter)))) enter = j;
            }
            if (enter == cols_) return Outcome::infeasible;
            if (!artificial(basis_[leave])) in_basis_[basis_[leave]] = false;
            basis_[leave] = enter;
            in_basis_[enter] = true;
            ++iterations_;
        }
    }

    static constexpr double perturbation = 1e-9;
    static constexpr double phase_one_tolerance = 1e-6;
    static constexpr double cleanup_tolerance = 1e-12;
    static constexpr double harris_tolerance = 1e-11;

    Eigen::MatrixXd M_;
    Eigen::VectorXd g_;
    Eigen::VectorXd h_;
    Eigen::VectorXd rhs_;
    double scale_ = 1.0;
    SimplexOptions opt_;
    std::size_t m_;
    std::size_t cols_;
    Eigen::VectorXd flip_;
    std::vector<std::size_t> basis_;
    std::vector<bool> in_basis_;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
    Eigen::PartialPivLU<Eigen::MatrixXd> lut_;
    Eigen::VectorXd xb_;
    Eigen::VectorXd pi_;
    std::size_t iterations_ = 0;
};

inline void check(const LinearProgram& lp) {
    const std::size_t n = lp.variables();
    if (n == 0) throw InvalidInput("linear program has no variables");
    if (lp.rhs.size() != lp.rows.size() || lp.sense.size() != lp.rows.size())
        throw InvalidInput("linear program rows, rhs and senses differ in length");
    for (const auto& row : lp.rows) {
        if (row.size() != n) throw InvalidInput("linear program row has the wrong width");
        for (double v : row)
            if (!std::isfinite(v)) throw InvalidInput("linear program has a non-finite coefficient");
    }
    for (double v : lp.rhs)
        if (!std::isfinite(v)) throw InvalidInput("linear program has a non-finite right-hand side");
    for (double v : lp.objective)
        if (!std::isfinite(v)) throw InvalidInput("linear program has a non-finite objective");
}

inline StandardFormSimplex dual_of(const LinearProgram& lp, const std::vector<double>& objective,
                                   const SimplexOptions& options) {
    const std::size_t n = lp.variables();
    std::size_t cols = 0;
    for (RowSense s : lp.sense) cols += s == RowSense::equal ? 2 : 1;
    Eigen::MatrixXd M(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(cols));
    Eigen::VectorXd g(static_cast<Eigen::Index>(cols));
    Eigen::Index col = 0;
    for (std::size_t i = 0; i < lp.rows.size(); ++i) {
        double scale = 0.0;
        for (double v : lp.rows[i]) scale = std::max(scale, std::abs(v));
        if (scale == 0.0) scale = 1.0;
        for (double sign : {1.0, -1.0}) {
            if (sign < 0.0 && lp.sense[i] != RowSense::equal) break;
            for (std::size_t j = 0; j < n; ++j) M(static_cast<Eigen::Index>(j), col) = sign * lp.rows[i][j] / scale;
            g(col) = sign * lp.rhs[i] / scale;
            ++col;
        }
    }
    double cscale = 0.0;
    for (double v : objective) cscale = std::max(cscale, std::abs(v));
    if (cscale == 0.0) cscale = 1.0;
    Eigen::VectorXd h(static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j) h(static_cast<Eigen::Index>(j)) = -objective[j] / cscale;
    return StandardFormSimplex(std::move(M), std::move(g), std::move(h), options);
}

}  // namespace detail

/// Solves `lp`. An `optimal` status guarantees a feasibility residual at most
/// options.feasibility_tolerance; otherwise NumericalError is thrown.
inline LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& options = {}) {
    detail::check(lp);
    auto dual = detail::dual_of(lp, lp.objective, options);
    const auto outcome = dual.solve();
    LpSolution sol;
    sol.iterations = dual.iterations();
    switch (outcome) {
        case detail::StandardFormSimplex::Outcome::iteration_limit:
            sol.status = LpStatus::iteration_limit;
            return sol;
        case detail::StandardFormSimplex::Outcome::unbounded:
            sol.status = LpStatus::infeasible;
            return sol;
        case detail::StandardFormSimplex::Outcome::infeasible: {
            // The dual is infeasible, so the primal is unbounded or infeasible.
            // With c = 0 the dual is feasible and decides primal feasibility.
            auto feas = detail::dual_of(lp, std::vector<double>(lp.variables(), 0.0), options);
            const auto f = feas.solve();
            sol.iterations += feas.iterations();
            sol.status = f == detail::StandardFormSimplex::Outcome::optimal     ? LpStatus::unbounded
                         : f == detail::StandardFormSimplex::Outcome::unbounded ? LpStatus::infeasible
                                                                               : LpStatus::iteration_limit;
            return sol;
        }
        case detail::StandardFormSimplex::Outcome::optimal: break;
    }
    const Eigen::VectorXd x = dual.multipliers();
    sol.status = LpStatus::optimal;
    sol.x.assign(x.data(), x.data() + x.size());
    sol.objective = 0.0;
    for (std::size_t j = 0; j < sol.x.size(); ++j) sol.objective += lp.objective[j] * sol.x[j];
    sol.residual = feasibility_residual(lp, sol.x);
    if (sol.residual > options.feasibility_tolerance)
        throw NumericalError("simplex solution violates its constraints", sol.residual);
    return sol;
}

}  // namespace hypack
