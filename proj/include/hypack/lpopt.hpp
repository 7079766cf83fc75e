#pragma once

// Searching for a certificate by linear programming.
//
// The profile is a linear combination of a finite family of natural cubic
// splines sharing one knot vector over [0, T] (see ProfileBasis), so every LP
// solution is exactly a RadialProfile. The coefficients are the LP unknowns.
// The LP minimizes f(0) subject to
//   f^(1) = 1,   f(t_i) <= 0 on sign abscissae in [2r, T],   -f^(p) <= 0 on spectral abscissae.
// After solving, the certificate is verified on refined grids. Violations
// feed a bounded repair loop: sign failures add the Bezier control points of
// every spline segment in [2r, T] (nonpositive control points force f <= 0 on
// the whole segment), spectral failures add the violating abscissae.

#include "hypack/certificate.hpp"
#include "hypack/errors.hpp"
#include "hypack/geometry.hpp"
#include "hypack/parallel.hpp"
#include "hypack/profile.hpp"
#include "hypack/simplex.hpp"
#include "hypack/spherical.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hypack {

enum class BasisKind { spline, polynomial, sampled };

inline std::string to_string(BasisKind k) {
    switch (k) {
        case BasisKind::spline: return "spline";
        case BasisKind::polynomial: return "polynomial";
        case BasisKind::sampled: return "sampled";
    }
    return "unknown";
}

inline BasisKind parse_basis_kind(const std::string& s) {
    if (s == "spline") return BasisKind::spline;
    if (s == "polynomial") return BasisKind::polynomial;
    throw InvalidInput("unknown basis kind '" + s + "' (expected spline or polynomial)");
}

/// Dimension-1 extremal profiles have a corner at 2r, which only the spline
/// family represents; in higher dimensions the smooth family is used.
inline BasisKind default_basis_kind(const Space& space) {
    return !space.is_hyperbolic() && space.dim() == 1 ? BasisKind::spline : BasisKind::polynomial;
}

inline constexpr std::size_t default_polynomial_grid = 128;
inline constexpr int polynomial_cutoff_order = 4;

/// A finite family of profiles on one common spline grid over [0, T], all
/// vanishing at T. Linear combinations of the family are again profiles on
/// that grid, so an LP over the coefficients describes the certificate exactly.
///
/// spline:     cardinal natural splines, knots split between [0, 2r] and
///             [2r, T] with a C0 joint at 2r; function k is 1 at knot k.
/// polynomial: T_k(2 (t/T)^2 - 1) (1 - (t/T)^2)^4 with Chebyshev T_k for
///             k < size - 1, plus the ball autocorrelation t -> vol(B_r(x) cap
///             B_r(y)) as the last function, all sampled on a grid with a C0
///             joint at 2r. The polynomials are smooth at the origin and at T,
///             so their transforms decay quickly in lambda; the autocorrelation
///             has a nonnegative transform and vanishes past 2r, so the LP is
///             never empty.
class ProfileBasis {
public:
    ProfileBasis(Space space, double r, double T, std::size_t size, BasisKind kind,
                 std::size_t grid_segments = default_polynomial_grid)
        : space_(space), kind_(kind) {
        if (!(r > 0.0) || !std::isfinite(r)) throw InvalidInput("basis: packing radius must be > 0");
        if (!(T >= 2.0 * r) || !std::isfinite(T)) throw InvalidInput("basis: support T must be >= 2r");
        if (size < 4) throw InvalidInput("basis: basis_size must be >= 4");
        if (kind == BasisKind::sampled) throw InvalidInput("basis: sampled families are built from values");
        if (kind == BasisKind::spline)
            build_spline(r, T, size);
        else
            build_polynomial(r, T, size, grid_segments);
        for (const auto& v : values_) functions_.emplace_back(space_, knots_, v, breaks_);
    }

    /// Caller-supplied family: one value vector per function on a shared grid.
    ProfileBasis(Space space, std::vector<double> knots, std::vector<std::vector<double>> values,
                 std::vector<double> breaks = {})
        : space_(space), kind_(BasisKind::sampled), knots_(std::move(knots)), breaks_(std::move(breaks)),
          values_(std::move(values)) {
        if (values_.empty()) throw InvalidInput("basis: needs at least one function");
        for (const auto& v : values_) functions_.emplace_back(space_, knots_, v, breaks_);
    }

    const Space& space() const noexcept { return space_; }
    BasisKind kind() const noexcept { return kind_; }
    std::size_t size() const noexcept { return functions_.size(); }
    std::span<const double> knots() const noexcept { return knots_; }
    const std::vector<double>& breaks() const noexcept { return breaks_; }
    const RadialProfile& function(std::size_t k) const { return functions_.at(k); }

    /// f(0) of each basis function.
    std::vector<double> at_origin() const {
        std::vector<double> out;
        for (const auto& v : values_) out.push_back(v.front());
        return out;
    }

    RadialProfile combine(std::span<const double> coefficients) const {
        if (coefficients.size() != size()) throw InvalidInput("basis: coefficient count mismatch");
        std::vector<double> v(knots_.size(), 0.0);
        for (std::size_t k = 0; k < size(); ++k)
            for (std::size_t i = 0; i < v.size(); ++i) v[i] += coefficients[k] * values_[k][i];
        v.back() = 0.0;
        return RadialProfile(space_, knots_, std::move(v), breaks_);
    }

private:
    void build_spline(double r, double T, std::size_t size) {
        const double joint = 2.0 * r;
        if (T > joint * (1.0 + 1e-12)) {
            auto inner = static_cast<std::size_t>(std::lround(static_cast<double>(size) * joint / T));
            inner = std::clamp<std::size_t>(inner, 1, size - 1);
            const std::size_t outer = size - inner;
            for (std::size_t i = 0; i < inner; ++i)
                knots_.push_back(joint * static_cast<double>(i) / static_cast<double>(inner));
            for (std::size_t i = 0; i <= outer; ++i)
                knots_.push_back(joint + (T - joint) * static_cast<double>(i) / static_cast<double>(outer));
            breaks_.push_back(joint);
        } else {
            for (std::size_t i = 0; i <= size; ++i)
                knots_.push_back(T * static_cast<double>(i) / static_cast<double>(size));
        }
        knots_.back() = T;
        for (std::size_t k = 0; k < size; ++k) {
            std::vector<double> v(knots_.size(), 0.0);
            v[k] = 1.0;
            values_.push_back(std::move(v));
        }
    }

    void build_polynomial(double r, double T, std::size_t size, std::size_t segments) {
        if (segments < 2 * size) throw InvalidInput("basis: polynomial grid needs at least 2 segments per function");
        const double joint = 2.0 * r;
        if (T > joint * (1.0 + 1e-12)) {
            auto inner = static_cast<std::size_t>(std::lround(static_cast<double>(segments) * joint / T));
            inner = std::clamp<std::size_t>(inner, 1, segments - 1);
            const std::size_t outer = segments - inner;
            for (std::size_t i = 0; i < inner; ++i)
                knots_.push_back(joint * static_cast<double>(i) / static_cast<double>(inner));
            for (std::size_t i = 0; i <= outer; ++i)
                knots_.push_back(joint + (T - joint) * static_cast<double>(i) / static_cast<double>(outer));
            breaks_.push_back(joint);
        } else {
            for (std::size_t i = 0; i <= segments; ++i)
                knots_.push_back(T * static_cast<double>(i) / static_cast<double>(segments));
        }
        knots_.back() = T;
        values_.assign(size, std::vector<double>(knots_.size(), 0.0));
        for (std::size_t i = 0; i + 1 < knots_.size(); ++i) {
            const double u = knots_[i] / T;
            const double x = 2.0 * u * u - 1.0;
            const double cutoff = std::pow(1.0 - u * u, polynomial_cutoff_order);
            double tm = 1.0, tk = x;  // Chebyshev recurrence
            for (std::size_t k = 0; k + 1 < size; ++k) {
                const double value = k == 0 ? 1.0 : tk;
                values_[k][i] = value * cutoff;
                if (k >= 1) {
                    const double next = 2.0 * x * tk - tm;
                    tm = tk;
                    tk = next;
                }
            }
            // Ball autocorrelation, scaled to 1 at the origin.
            values_[size - 1][i] = ball_intersection_volume(space_, r, knots_[i]) / ball_volume(space_, r);
        }
    }

    Space space_;
    BasisKind kind_;
    std::vector<double> knots_;
    std::vector<double> breaks_;
    std::vector<std::vector<double>> values_;
    std::vector<RadialProfile> functions_;
};

enum class RowFamily { normalization, sign, sign_hull, principal, complementary };

inline std::string to_string(RowFamily f) {
    switch (f) {
        case RowFamily::normalization: return "normalization";
        case RowFamily::sign: return "sign";
        case RowFamily::sign_hull: return "sign_hull";
        case RowFamily::principal: return "principal";
        case RowFamily::complementary: return "complementary";
    }
    return "unknown";
}

/// An assembled LP together with what each row means.
struct LpProblem {
    Space space;
    double r;
    ProfileBasis basis;
    LinearProgram program;
    std::vector<RowFamily> family;  // per row
    std::vector<double> abscissa;   // t, lambda or s per row (0 for normalization)

    std::size_t rows() const noexcept { return program.constraints(); }
    std::size_t columns() const noexcept { return program.variables(); }
};

/// Builds LP rows for one basis. All transform rows share a single quadrature
/// engine, so the columns are consistent with each other and with verify().
class LpAssembler {
public:
    LpAssembler(ProfileBasis basis, double r, double lambda_max)
        : space_(basis.space()), r_(r), basis_(std::move(basis)), engine_(space_, basis_.knots(), lambda_max) {
        for (std::size_t k = 0; k < basis_.size(); ++k) {
            const RadialProfile& b = basis_.function(k);
            samples_.push_back(engine_.sample([&](double t) { return b(t); }));
        }
    }

    const ProfileBasis& basis() const noexcept { return basis_; }

    LpProblem start(std::span<const double> sign_abscissae, const SpectralGrid& grid) const {
        validate(space_, grid);
        LpProblem lp{space_, r_, basis_, {}, {}, {}};
        const std::size_t K = basis_.size();
        lp.program.objective = basis_.at_origin();
        lp.program.add_row(transform_row(engine_.volume_kernel()), RowSense::equal, 1.0);
        lp.family.push_back(RowFamily::normalization);
        lp.abscissa.push_back(0.0);
        add_sign_rows(lp, sign_abscissae);
        add_spectral_rows(lp, grid.params());
        for (std::size_t k = 0; k < K; ++k) {
            bool zero = true;
            for (const auto& row : lp.program.rows) zero = zero && row[k] == 0.0;
            if (zero) throw InvalidInput("degenerate basis: a column of the LP is identically zero");
        }
        return lp;
    }

    void add_sign_rows(LpProblem& lp, std::span<const double> ts) const {
        for (double t : ts) {
            if (!(t >= 2.0 * r_ * (1.0 - 1e-12)) || t > basis_.knots().back())
                throw InvalidInput("sign abscissae must lie in [2r, T]");
            std::vector<double> row(basis_.size());
            for (std::size_t k = 0; k < row.size(); ++k) row[k] = basis_.function(k)(t);
            lp.program.add_row(std::move(row), RowSense::less_equal, 0.0);
            lp.family.push_back(RowFamily::sign);
            lp.abscissa.push_back(t);
        }
    }

    /// Bezier control points of every segment in [2r, T], each constrained <= 0.
    void add_hull_rows(LpProblem& lp) const {
        const auto knots = basis_.knots();
        const std::size_t K = basis_.size();
        for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
            if (knots[i] < 2.0 * r_ * (1.0 - 1e-12)) continue;
            const double h = knots[i + 1] - knots[i];
            std::vector<std::vector<double>> ctrl(4, std::vector<double>(K));
            for (std::size_t k = 0; k < K; ++k) {
                const CubicPiece p = basis_.function(k).segment(i);
                const double a0 = p.a, a1 = p.b * h, a2 = p.c * h * h, a3 = p.d * h * h * h;
                ctrl[0][k] = a0;
                ctrl[1][k] = a0 + a1 / 3.0;
                ctrl[2][k] = a0 + 2.0 * a1 / 3.0 + a2 / 3.0;
                ctrl[3][k] = a0 + a1 + a2 + a3;
            }
            for (int c = 0; c < 4; ++c) {
                lp.program.add_row(ctrl[static_cast<std::size_t>(c)], RowSense::less_equal, 0.0);
                lp.family.push_back(RowFamily::sign_hull);
                lp.abscissa.push_back(knots[i] + h * c / 3.0);
            }
        }
    }

    void add_spectral_rows(LpProblem& lp, const std::vector<SpectralParam>& params) const {
        std::vector<std::vector<double>> rows(params.size());
        parallel_for(params.size(), [&](std::size_t i) {
            validate(space_, params[i]);
            rows[i] = transform_row(engine_.kernel(params[i]));
            for (double& v : rows[i]) v = -v;
        });
        for (std::size_t i = 0; i < params.size(); ++i) {
            lp.program.add_row(std::move(rows[i]), RowSense::less_equal, 0.0);
            lp.family.push_back(params[i].series == Series::principal ? RowFamily::principal
                                                                        : RowFamily::complementary);
            lp.abscissa.push_back(params[i].value);
        }
    }

private:
    std::vector<double> transform_row(const TransformEngine::Kernel& kernel) const {
        std::vector<double> row(basis_.size());
        for (std::size_t k = 0; k < row.size(); ++k)
            row[k] = TransformEngine::apply(kernel, samples_[k].first, samples_[k].second);
        return row;
    }

    Space space_;
    double r_;
    ProfileBasis basis_;
    TransformEngine engine_;
    std::vector<std::pair<std::vector<double>, std::vector<double>>> samples_;
};

inline std::vector<double> uniform_sign_abscissae(double r, double T, std::size_t count) {
    if (count < 2) throw InvalidInput("need at least two sign abscissae");
    std::vector<double> ts(count);
    for (std::size_t i = 0; i < count; ++i)
        ts[i] = 2.0 * r + (T - 2.0 * r) * static_cast<double>(i) / static_cast<double>(count - 1);
    ts.back() = T;
    return ts;
}

/// Support radius used when none is given: 4r in hyperbolic space, 3r in Euclidean space.
inline double default_support(const Space& space, double r) { return (space.is_hyperbolic() ? 4.0 : 3.0) * r; }

struct OptimizeOptions {
    std::optional<double> support;  // T
    std::optional<BasisKind> basis_kind;
    std::optional<std::size_t> basis_size;
    std::size_t grid_segments = default_polynomial_grid;  // polynomial family only
    std::size_t sign_points = 200;
    std::size_t principal_points = default_principal_count;
    std::size_t complementary_points = default_complementary_count;
    std::optional<double> lambda_max;
    std::size_t max_repair_rounds = 5;
    VerifyOptions verify;
    SimplexOptions simplex;
};

/// OptimizeOptions with every default filled in.
struct ResolvedOptions {
    double support;
    BasisKind basis_kind;
    std::size_t basis_size;
    std::size_t grid_segments;
    double lambda_max;
    std::size_t sign_points;
    std::size_t principal_points;
    std::size_t complementary_points;
};

inline ResolvedOptions resolve(const Space& space, double r, const OptimizeOptions& opt) {
    ResolvedOptions out;
    out.support = opt.support.value_or(default_support(space, r));
    out.basis_kind = opt.basis_kind.value_or(default_basis_kind(space));
    out.basis_size = opt.basis_size.value_or(out.basis_kind == BasisKind::spline ? 24 : 12);
    out.grid_segments = opt.grid_segments;
    out.sign_points = opt.sign_points;
    out.principal_points = opt.principal_points;
    out.complementary_points = space.is_hyperbolic() ? opt.complementary_points : 0;
    if (opt.lambda_max) {
        out.lambda_max = *opt.lambda_max;
    } else {
        out.lambda_max = default_lambda_max_factor / out.support;
        if (out.basis_kind == BasisKind::spline) {
            // A cardinal spline basis resolves frequencies up to about pi/h; the
            // positivity check must reach past that or the LP hides negative
            // transform mass above lambda_max.
            const ProfileBasis probe(space, r, out.support, out.basis_size, out.basis_kind);
            double h = out.support;
            const auto knots = probe.knots();
            for (std::size_t i = 0; i + 1 < knots.size(); ++i) h = std::min(h, knots[i + 1] - knots[i]);
            out.lambda_max = std::max(out.lambda_max, 2.0 * std::numbers::pi / h);
        }
    }
    return out;
}

inline ProfileBasis make_basis(const Space& space, double r, const ResolvedOptions& o) {
    return ProfileBasis(space, r, o.support, o.basis_size, o.basis_kind, o.grid_segments);
}

inline SpectralGrid construction_grid(const Space& space, const ResolvedOptions& o) {
    return SpectralGrid::uniform(space, o.lambda_max, o.principal_points, o.complementary_points);
}

/// LP for the given configuration before any repair rows.
inline LpProblem assemble_lp(const Space& space, double r, const OptimizeOptions& opt = {}) {
    const ResolvedOptions o = resolve(space, r, opt);
    const LpAssembler assembler(make_basis(space, r, o), r, o.lambda_max);
    return assembler.start(uniform_sign_abscissae(r, o.support, o.sign_points), construction_grid(space, o));
}

struct RepairRound {
    std::size_t rows;
    double objective;
    double sign_margin;
    double spectral_margin;
    std::size_t iterations;
    std::size_t added_sign_rows;
    std::size_t added_spectral_rows;
};

struct OptimizationResult {
    Certificate certificate;
    VerificationReport report;
    DensityBound bound;
    LpSolution solution;
    std::vector<RepairRound> rounds;
    ResolvedOptions options;
    double seconds;
};

namespace detail {

inline constexpr std::size_t repair_patch_half_width = 8;
inline constexpr double repair_patch_shrink = 8.0;

/// Spectral abscissae added after a failed verification: a symmetric patch of
/// points around each violator. Near a double zero of f^ a dip between
/// constraint points has depth of order (spacing)^2, so the patch spacing
/// shrinks geometrically with the round.
inline std::vector<SpectralParam> repair_patch(const Space& space, const VerificationReport& rep, std::size_t round) {
    const double shrink = std::pow(repair_patch_shrink, static_cast<double>(round + 1));
    const double principal_step =
        rep.principal_points > 1 ? rep.lambda_max / static_cast<double>(rep.principal_points - 1) / shrink : 0.0;
    const double complementary_step =
        rep.complementary_points > 0 ? space.rho() / static_cast<double>(rep.complementary_points) / shrink : 0.0;
    std::vector<SpectralParam> out;
    for (const SpectralParam& p : rep.spectral_violations) {
        const bool principal = p.series == Series::principal;
        const double step = principal ? principal_step : complementary_step;
        const double hi = principal ? rep.lambda_max : space.rho();
        const auto half = static_cast<int>(repair_patch_half_width);
        for (int k = -half; k <= half; ++k) {
            const double x = p.value + k * step;
            if (principal ? x < 0.0 || x > hi : x <= 0.0 || x > hi) continue;
            if (k != 0 && step == 0.0) continue;
            out.push_back(principal ? SpectralParam::principal(x) : SpectralParam::complementary(x));
        }
    }
    return out;
}

}  // namespace detail

inline OptimizationResult optimize_bound(const Space& space, double r, const OptimizeOptions& opt = {}) {
    const auto started = std::chrono::steady_clock::now();
    const ResolvedOptions o = resolve(space, r, opt);
    const LpAssembler assembler(make_basis(space, r, o), r, o.lambda_max);
    const SpectralGrid grid = construction_grid(space, o);
    LpProblem lp = assembler.start(uniform_sign_abscissae(r, o.support, o.sign_points), grid);

    std::vector<RepairRound> rounds;
    bool have_hull = false;
    double sign_margin = 0.0, spectral_margin = 0.0;
    for (std::size_t round = 0; round <= opt.max_repair_rounds; ++round) {
        const LpSolution sol = solve_lp(lp.program, opt.simplex);
        if (sol.status != LpStatus::optimal)
            throw OptimizationFailed("LP solve ended with status " + to_string(sol.status), sign_margin,
                                     spectral_margin);
        Certificate cert(r, assembler.basis().combine(sol.x), grid, "lp-optimizer");
        VerificationReport rep = verify(cert, opt.verify);
        sign_margin = rep.sign_margin;
        spectral_margin = rep.spectral_margin;
        RepairRound log{lp.rows(), sol.objective, rep.sign_margin, rep.spectral_margin, sol.iterations, 0, 0};
        if (rep.admissible) {
            rounds.push_back(log);
            const DensityBound b = bound(cert, rep);
            const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
            return {std::move(cert), std::move(rep), b, sol, std::move(rounds), o, secs};
        }
        const std::size_t before = lp.rows();
        if (!rep.sign_violations.empty() && !have_hull) {
            assembler.add_hull_rows(lp);
            have_hull = true;
            log.added_sign_rows = lp.rows() - before;
        }
        const std::size_t mid = lp.rows();
        if (!rep.spectral_violations.empty())
            assembler.add_spectral_rows(lp, detail::repair_patch(space, rep, round));
        log.added_spectral_rows = lp.rows() - mid;
        rounds.push_back(log);
        if (lp.rows() == before) break;
    }
    throw OptimizationFailed("certificate failed verification after the repair budget", sign_margin, spectral_margin);
}

}  // namespace hypack
