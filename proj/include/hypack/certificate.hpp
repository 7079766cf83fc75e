#pragma once

// LP certificates: a radial profile f supported in [0, T], checked for
//   (i)  f(t) <= 0 for t >= 2r, and
//   (ii) f^ >= 0 on the spectrum and f^(1) > 0,
// and the density bound vol(B_r) f(0) / f^(1) they imply.
//
// Admissibility is established on finite grids in floating point. A passing
// report is numerical evidence, not a proof.

#include "hypack/errors.hpp"
#include "hypack/geometry.hpp"
#include "hypack/parallel.hpp"
#include "hypack/profile.hpp"
#include "hypack/spherical.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace hypack {

inline constexpr std::size_t default_principal_count = 400;
inline constexpr std::size_t default_complementary_count = 50;
inline constexpr double default_lambda_max_factor = 40.0;

/// Principal series on [0, 40/T] (400 points) and complementary series on (0, rho] (50 points).
inline SpectralGrid default_spectral_grid(const Space& space, double T) {
    return SpectralGrid::uniform(space, default_lambda_max_factor / T, default_principal_count,
                                 space.is_hyperbolic() ? default_complementary_count : 0);
}

struct Certificate {
    Space space;
    double r;
    RadialProfile profile;
    SpectralGrid spectral_grid;
    std::string provenance;

    Certificate(double r_, RadialProfile profile_, SpectralGrid grid, std::string provenance_ = {})
        : space(profile_.space()), r(r_), profile(std::move(profile_)), spectral_grid(std::move(grid)),
          provenance(std::move(provenance_)) {
        if (!(r > 0.0) || !std::isfinite(r)) throw InvalidInput("certificate: packing radius must be > 0");
        if (profile.support() < 2.0 * r * (1.0 - 1e-12))
            throw InvalidInput("certificate: profile support must be >= 2r");
        validate(space, spectral_grid);
    }

    Certificate(double r_, RadialProfile profile_, std::string provenance_ = {})
        : Certificate(r_, profile_, default_spectral_grid(profile_.space(), profile_.support()),
                      std::move(provenance_)) {}

    double support() const noexcept { return profile.support(); }
};

/// f(t), zero beyond the support.
inline double evaluate(const Certificate& cert, double t) { return cert.profile(t); }

enum class RequiredSeries { principal_and_complementary, principal_only };

struct VerifyOptions {
    double tol_sign = 1e-9;
    double tol_spec = 1e-8;
    std::size_t refinement = 8;
    RequiredSeries required = RequiredSeries::principal_and_complementary;
};

struct VerificationReport {
    double sign_margin = -std::numeric_limits<double>::infinity();  // max f on [2r, T]
    double sign_argmax = 0.0;
    double spectral_margin = std::numeric_limits<double>::infinity();  // min f^ over checked abscissae
    SpectralParam spectral_argmin{};
    double principal_margin = std::numeric_limits<double>::infinity();
    double complementary_margin = std::numeric_limits<double>::infinity();
    double at_one = 0.0;
    bool admissible = false;

    VerifyOptions options;
    double lambda_max = 0.0;
    std::size_t sign_points = 0;
    std::size_t principal_points = 0;
    std::size_t complementary_points = 0;

    /// Verification abscissae where condition (i) or (ii) fails; consumed by
    /// the optimizer's repair loop.
    std::vector<double> sign_violations;
    std::vector<SpectralParam> spectral_violations;
};

namespace detail {

/// Abscissae checked for condition (i): a grid `refinement` times denser than
/// the profile's segments over [2r, T], the knots and 2r itself, and every
/// interior critical point of the cubic pieces.
inline std::vector<double> sign_abscissae(const Certificate& cert, std::size_t refinement) {
    const double lo = 2.0 * cert.r;
    const double hi = cert.support();
    std::vector<double> ts{lo, hi};
    const auto knots = cert.profile.grid();
    std::size_t segments = 0;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i)
        if (knots[i + 1] > lo) ++segments;
    const std::size_t count = refinement * std::max<std::size_t>(segments, 25);
    for (std::size_t k = 1; k < count; ++k) ts.push_back(lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(count));
    for (double t : knots)
        if (t >= lo) ts.push_back(t);
    for (double t : cert.profile.interior_critical_points())
        if (t >= lo && t <= hi) ts.push_back(t);
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    return ts;
}

/// Grid minima of f^ below this fraction of |f^(1)| are refined by Brent's method.
inline constexpr double local_minimum_threshold = 1e-3;
inline constexpr int local_minimum_bits = 40;

}  // namespace detail

inline VerificationReport verify(const Certificate& cert, const VerifyOptions& options = {}) {
    if (options.refinement < 1) throw InvalidInput("verify: refinement must be >= 1");
    VerificationReport rep;
    rep.options = options;

    const auto ts = detail::sign_abscissae(cert, options.refinement);
    rep.sign_points = ts.size();
    for (double t : ts) {
        const double v = cert.profile(t);
        if (v > rep.sign_margin) {
            rep.sign_margin = v;
            rep.sign_argmax = t;
        }
        if (v > options.tol_sign) rep.sign_violations.push_back(t);
    }

    SpectralGrid grid = cert.spectral_grid.refined(options.refinement);
    if (options.required == RequiredSeries::principal_only) grid.complementary.clear();
    rep.lambda_max = grid.lambda_max();
    rep.principal_points = grid.principal.size();
    rep.complementary_points = grid.complementary.size();

    const TransformEngine engine(cert.space, cert.profile.grid(), rep.lambda_max);
    const auto [fc, ff] = engine.sample([&](double t) { return cert.profile(t); });
    auto transform = [&](SpectralParam p) { return TransformEngine::apply(engine.kernel(p), fc, ff); };
    rep.at_one = TransformEngine::apply(engine.volume_kernel(), fc, ff);

    auto scan = [&](SpectralParam p, double v, double& family_margin) {
        family_margin = std::min(family_margin, v);
        if (v < rep.spectral_margin) {
            rep.spectral_margin = v;
            rep.spectral_argmin = p;
        }
        if (v < -options.tol_spec) rep.spectral_violations.push_back(p);
    };
    auto check_series = [&](const std::vector<double>& xs, Series series, double& family_margin) {
        auto param = [series](double x) {
            return series == Series::principal ? SpectralParam::principal(x) : SpectralParam::complementary(x);
        };
        std::vector<double> values(xs.size());
        parallel_for(xs.size(), [&](std::size_t i) { values[i] = transform(param(xs[i])); });
        for (std::size_t i = 0; i < xs.size(); ++i) scan(param(xs[i]), values[i], family_margin);
        // A transform that touches zero between two abscissae can dip below
        // it unseen, so every low local minimum is located exactly.
        const double low = detail::local_minimum_threshold * std::abs(rep.at_one) + options.tol_spec;
        std::vector<std::size_t> candidates;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const bool left = i == 0 || values[i] <= values[i - 1];
            const bool right = i + 1 == xs.size() || values[i] <= values[i + 1];
            if (left && right && values[i] < low) candidates.push_back(i);
        }
        std::vector<std::pair<double, double>> minima(candidates.size());
        parallel_for(candidates.size(), [&](std::size_t c) {
            const std::size_t i = candidates[c];
            const double a = xs[i == 0 ? 0 : i - 1], b = xs[i + 1 == xs.size() ? i : i + 1];
            minima[c] = boost::math::tools::brent_find_minima([&](double x) { return transform(param(x)); }, a, b,
                                                              detail::local_minimum_bits);
        });
        for (const auto& [x, v] : minima) scan(param(x), v, family_margin);
    };
    check_series(grid.principal, Series::principal, rep.principal_margin);
    check_series(grid.complementary, Series::complementary, rep.complementary_margin);

    rep.admissible = rep.sign_margin <= options.tol_sign && rep.spectral_margin >= -options.tol_spec &&
                     rep.at_one > 0.0;
    return rep;
}

struct DensityBound {
    double value;
    double ball_volume;  // vol(B_r)
    double f_at_origin;  // f(0)
    double at_one;       // f^(1)
};

/// vol(B_r) f(0) / f^(1). Only defined for an admissible report.
inline DensityBound bound(const Certificate& cert, const VerificationReport& report) {
    if (!report.admissible) throw ContractViolation("bound requested for a non-admissible certificate");
    const double vol = ball_volume(cert.space, cert.r);
    const double f0 = evaluate(cert, 0.0);
    return {vol * f0 / report.at_one, vol, f0, report.at_one};
}

}  // namespace hypack
