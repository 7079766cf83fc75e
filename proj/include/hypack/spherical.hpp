#pragma once

// Spherical functions of hyperbolic space (and the Euclidean Bessel kernels),
// the spherical transform of radial profiles, and its numerical inverse.

#include "hypack/errors.hpp"
#include "hypack/geometry.hpp"
#include "hypack/parallel.hpp"
#include "hypack/profile.hpp"
#include "hypack/quadrature.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

namespace hypack {

enum class Series { principal, complementary };

/// A spectral parameter: real lambda (principal series, phi_lambda) or
/// lambda = i s with 0 < s <= rho (complementary series, hyperbolic only).
struct SpectralParam {
    Series series = Series::principal;
    double value = 0.0;

    static SpectralParam principal(double lambda) { return {Series::principal, lambda}; }
    static SpectralParam complementary(double s) { return {Series::complementary, s}; }

    /// lambda^2, negative on the complementary series.
    double lambda_squared() const noexcept {
        return series == Series::principal ? value * value : -value * value;
    }
};

inline void validate(const Space& space, SpectralParam p) {
    if (!std::isfinite(p.value)) throw InvalidInput("spectral parameter must be finite");
    if (p.series == Series::complementary) {
        if (!space.is_hyperbolic()) throw InvalidInput("Euclidean space has no complementary series");
        if (!(p.value > 0.0 && p.value <= space.rho()))
            throw InvalidInput("complementary parameter must lie in (0, rho]");
    }
}

namespace detail {

inline constexpr double series_switch_radius = 1e-2;
inline constexpr double ode_relative_tolerance = 1e-10;
inline constexpr double ode_absolute_tolerance = 1e-14;

struct PhiValue {
    double value;
    double derivative;
};

/// phi(t) = 2F1((rho + i lambda)/2, (rho - i lambda)/2; n/2; -sinh^2 t) summed
/// as a power series in z = -sinh^2 t. The coefficient ratio
/// (a+k)(b+k) = k^2 + rho k + (rho^2 + lambda^2)/4 is real for every lambda^2.
inline PhiValue hypergeometric_series(int n, double lambda_squared, double t) {
    const double rho = 0.5 * (n - 1);
    const double c = 0.5 * n;
    const double ab = 0.25 * (rho * rho + lambda_squared);
    const double sh = std::sinh(t);
    const double z = -sh * sh;
    double term = 1.0;
    double sum = 1.0;
    double dsum = 0.0;  // dF/dz
    for (int k = 0; k < 500; ++k) {
        const double kk = k;
        const double ratio = (kk * kk + rho * kk + ab) / ((kk + 1.0) * (c + kk));
        const double next = term * ratio * z;
        dsum += (kk + 1.0) * term * ratio;  // (k+1) c_{k+1} z^k
        term = next;
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum) && k > 1) break;
    }
    return {sum, -std::sinh(2.0 * t) * dsum};
}

/// Continues phi from (t0, phi0, dphi0) through the sorted times with an
/// adaptive Dormand-Prince 5(4) integrator.
inline void integrate_radial_ode(int n, double lambda_squared, double t0, PhiValue start,
                                 std::span<const double> sorted_times, std::span<double> out) {
    namespace odeint = boost::numeric::odeint;
    using State = std::array<double, 2>;
    const double rho = 0.5 * (n - 1);
    const double k2 = lambda_squared + rho * rho;
    const double damping = n - 1.0;
    auto rhs = [&](const State& y, State& dy, double t) {
        dy[0] = y[1];
        dy[1] = -damping * y[1] / std::tanh(t) - k2 * y[0];
    };
    std::vector<double> times;
    times.reserve(sorted_times.size() + 1);
    times.push_back(t0);
    times.insert(times.end(), sorted_times.begin(), sorted_times.end());
    State y{start.value, start.derivative};
    std::size_t seen = 0;
    auto observer = [&](const State& s, double) {
        if (seen > 0) out[seen - 1] = s[0];
        ++seen;
    };
    auto stepper = odeint::make_dense_output(ode_absolute_tolerance, ode_relative_tolerance,
                                             odeint::runge_kutta_dopri5<State>());
    const double first_step = std::min(1e-3, times.size() > 1 ? times[1] - t0 : 1e-3);
    odeint::integrate_times(stepper, rhs, y, times.begin(), times.end(), std::max(first_step, 1e-8), observer);
}

inline double euclidean_kernel_series(double nu, double x) {
    // sum_k (-x^2/4)^k Gamma(nu+1) / (k! Gamma(nu+k+1))
    const double q = -0.25 * x * x;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 200; ++k) {
        term *= q / (k * (nu + k));
        sum += term;
        if (std::abs(term) < 1e-18 * std::max(1.0, std::abs(sum))) break;
    }
    return sum;
}

/// Normalized Bessel kernel Gamma(n/2) (2/x)^(n/2-1) J_{n/2-1}(x), equal to 1 at x = 0.
///
/// Up to n = 12 the Bessel function comes from upward recurrence, started at
/// J_0, J_1 (even n) or at the spherical Bessel functions j_0, j_1 (odd n);
/// recurrence is only used for x > nu + 1, where it is stable, and the power
/// series covers smaller arguments.
inline double euclidean_kernel(int n, double x) {
    x = std::abs(x);
    const double nu = 0.5 * n - 1.0;
    if (x < 0.1) return euclidean_kernel_series(nu, x);
    if (n == 1) return std::cos(x);
    if (n == 3) return std::sin(x) / x;
    if (n > 12) return std::tgamma(0.5 * n) * std::pow(2.0 / x, nu) * std::cyl_bessel_j(nu, x);
    if (x <= nu + 1.0) return euclidean_kernel_series(nu, x);
    // Gamma(n/2) for n = 1..12
    static constexpr std::array<double, 13> gamma_half{0.0, 1.7724538509055160, 1.0, 0.88622692545275801, 1.0,
                                                       1.3293403881791370, 2.0, 3.3233509704478426, 6.0,
                                                       11.631728396567449, 24.0, 52.342777784553520, 120.0};
    const double u = 2.0 / x;
    if (n % 2 == 0) {
        const int order = n / 2 - 1;
        double jm = ::j0(x), j = ::j1(x);
        if (order == 0) return jm;
        double pw = u;
        for (int k = 1; k < order; ++k) {
            const double next = 2.0 * k / x * j - jm;
            jm = j;
            j = next;
            pw *= u;
        }
        return gamma_half[static_cast<std::size_t>(n)] * pw * j;
    }
    // J_{l+1/2}(x) = sqrt(2x/pi) j_l(x), l = (n-3)/2, so the kernel is
    // Gamma(n/2) (2/x)^l (2/sqrt(pi)) j_l(x).
    const int l = (n - 3) / 2;
    const double s = std::sin(x), c = std::cos(x);
    double jm = s / x, j = s / (x * x) - c / x;
    double pw = u;
    for (int k = 1; k < l; ++k) {
        const double next = (2.0 * k + 1.0) / x * j - jm;
        jm = j;
        j = next;
        pw *= u;
    }
    return gamma_half[static_cast<std::size_t>(n)] * pw * (2.0 / std::sqrt(std::numbers::pi)) * j;
}

}  // namespace detail

/// phi_lambda(t) at each abscissa. Hyperbolic: the radial eigenfunction with
/// phi'' + (n-1) coth(t) phi' + (lambda^2 + rho^2) phi = 0, phi(0) = 1; a power
/// series below t = 1e-2, an adaptive ODE integration beyond. Euclidean: the
/// normalized Bessel kernel j_n(lambda t).
inline std::vector<double> spherical_function(const Space& space, SpectralParam lambda,
                                              std::span<const double> t) {
    validate(space, lambda);
    for (double ti : t)
        if (!(ti >= 0.0) || !std::isfinite(ti)) throw InvalidInput("spherical_function: t must be finite and >= 0");
    std::vector<double> out(t.size());
    const int n = space.dim();
    if (!space.is_hyperbolic()) {
        for (std::size_t i = 0; i < t.size(); ++i) out[i] = detail::euclidean_kernel(n, lambda.value * t[i]);
        return out;
    }
    const double lam2 = lambda.lambda_squared();
    std::vector<std::size_t> far;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] <= detail::series_switch_radius)
            out[i] = detail::hypergeometric_series(n, lam2, t[i]).value;
        else
            far.push_back(i);
    }
    if (far.empty()) return out;
    std::sort(far.begin(), far.end(), [&](std::size_t a, std::size_t b) { return t[a] < t[b]; });
    std::vector<double> times;
    for (std::size_t i : far)
        if (times.empty() || t[i] != times.back()) times.push_back(t[i]);
    std::vector<double> values(times.size());
    const double t0 = detail::series_switch_radius;
    detail::integrate_radial_ode(n, lam2, t0, detail::hypergeometric_series(n, lam2, t0), times, values);
    for (std::size_t i : far) {
        const auto k = static_cast<std::size_t>(std::lower_bound(times.begin(), times.end(), t[i]) - times.begin());
        out[i] = values[k];
    }
    return out;
}

inline double spherical_function(const Space& space, SpectralParam lambda, double t) {
    const std::array<double, 1> ts{t};
    return spherical_function(space, lambda, std::span<const double>(ts))[0];
}

/// Discretization of the spectrum: principal abscissae in [0, lambda_max] and
/// complementary abscissae in (0, rho] (empty for Euclidean space).
struct SpectralGrid {
    std::vector<double> principal;
    std::vector<double> complementary;

    static SpectralGrid uniform(const Space& space, double lambda_max, std::size_t principal_count,
                                std::size_t complementary_count) {
        if (!(lambda_max > 0.0)) throw InvalidInput("lambda_max must be > 0");
        if (principal_count < 2) throw InvalidInput("principal grid needs at least two points");
        SpectralGrid g;
        for (std::size_t k = 0; k < principal_count; ++k)
            g.principal.push_back(lambda_max * static_cast<double>(k) / static_cast<double>(principal_count - 1));
        g.principal.back() = lambda_max;
        if (space.is_hyperbolic())
            for (std::size_t j = 1; j <= complementary_count; ++j)
                g.complementary.push_back(space.rho() * static_cast<double>(j) /
                                          static_cast<double>(complementary_count));
        return g;
    }

    double lambda_max() const {
        return principal.empty() ? 0.0 : *std::max_element(principal.begin(), principal.end());
    }

    /// Each interval (including (0, s_1] on the complementary side) split into `factor` parts.
    SpectralGrid refined(std::size_t factor) const {
        if (factor < 1) throw InvalidInput("refinement must be >= 1");
        auto refine = [factor](std::vector<double> xs, bool from_zero) {
            std::sort(xs.begin(), xs.end());
            xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
            std::vector<double> out;
            double prev = 0.0;
            bool have_prev = from_zero;
            for (double x : xs) {
                if (have_prev && x > prev)
                    for (std::size_t k = 1; k < factor; ++k)
                        out.push_back(prev + (x - prev) * static_cast<double>(k) / static_cast<double>(factor));
                out.push_back(x);
                prev = x;
                have_prev = true;
            }
            return out;
        };
        return SpectralGrid{refine(principal, false), refine(complementary, true)};
    }

    std::vector<SpectralParam> params() const {
        std::vector<SpectralParam> out;
        for (double l : principal) out.push_back(SpectralParam::principal(l));
        for (double s : complementary) out.push_back(SpectralParam::complementary(s));
        return out;
    }
};

inline void validate(const Space& space, const SpectralGrid& grid) {
    for (double l : grid.principal)
        if (!(l >= 0.0) || !std::isfinite(l)) throw InvalidInput("principal abscissae must be finite and >= 0");
    if (!space.is_hyperbolic() && !grid.complementary.empty())
        throw InvalidInput("Euclidean space has no complementary series");
    for (double s : grid.complementary)
        if (!(s > 0.0 && s <= space.rho())) throw InvalidInput("complementary abscissae must lie in (0, rho]");
}

/// Values of the spherical transform on a spectral grid, plus f^(1) = int f dvol.
struct TransformTable {
    SpectralGrid grid;
    std::vector<double> principal_values;
    std::vector<double> complementary_values;
    double at_one = 0.0;
};

/// Composite Gauss-Legendre rules aligned with a profile's nodes, at panel
/// counts P and 2P per segment. Every transform integral is evaluated with
/// both rules; disagreement beyond `refinement_tolerance` relative to
/// int |integrand| raises NumericalError.
class TransformEngine {
public:
    static constexpr double refinement_tolerance = 1e-9;

    struct Kernel {
        std::vector<double> coarse;  // w_j phi(t_j) A(t_j) on the coarse rule
        std::vector<double> fine;
    };

    TransformEngine(Space space, std::span<const double> knots, double lambda_max) : space_(space) {
        if (knots.size() < 2) throw InvalidInput("transform needs at least one segment");
        const double growth = space.is_hyperbolic() ? 0.25 * (space.dim() - 1) : 0.0;
        for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
            const double h = knots[i + 1] - knots[i];
            const auto panels = static_cast<std::size_t>(
                std::max({1.0, std::ceil(lambda_max * h / 6.0), std::ceil(growth * h)}));
            quadrature::append_composite(coarse_, knots[i], knots[i + 1], panels);
            quadrature::append_composite(fine_, knots[i], knots[i + 1], 2 * panels);
        }
        nodes_ = coarse_.nodes;
        nodes_.insert(nodes_.end(), fine_.nodes.begin(), fine_.nodes.end());
        std::sort(nodes_.begin(), nodes_.end());
        nodes_.erase(std::unique(nodes_.begin(), nodes_.end()), nodes_.end());
        area_.resize(nodes_.size());
        for (std::size_t i = 0; i < nodes_.size(); ++i) area_[i] = sphere_area(space, nodes_[i]);
        coarse_index_ = index_of(coarse_.nodes);
        fine_index_ = index_of(fine_.nodes);
    }

    const Space& space() const noexcept { return space_; }
    const quadrature::Rule& coarse_rule() const noexcept { return coarse_; }
    const quadrature::Rule& fine_rule() const noexcept { return fine_; }

    Kernel kernel(SpectralParam p) const { return make_kernel(spherical_function(space_, p, nodes_)); }

    /// Kernel of f^(1): phi == 1.
    Kernel volume_kernel() const { return make_kernel(std::vector<double>(nodes_.size(), 1.0)); }

    /// int f phi A dt given f sampled on the coarse and fine nodes.
    static double apply(const Kernel& k, std::span<const double> f_coarse, std::span<const double> f_fine) {
        double coarse = 0.0, fine = 0.0, scale = 0.0;
        for (std::size_t j = 0; j < k.coarse.size(); ++j) coarse += k.coarse[j] * f_coarse[j];
        for (std::size_t j = 0; j < k.fine.size(); ++j) {
            fine += k.fine[j] * f_fine[j];
            scale += std::abs(k.fine[j] * f_fine[j]);
        }
        const double diff = std::abs(fine - coarse);
        if (diff > refinement_tolerance * scale && diff > 1e-300)
            throw NumericalError("transform quadrature did not converge under panel doubling", diff / scale);
        return fine;
    }

    template <class F>
    std::pair<std::vector<double>, std::vector<double>> sample(F&& f) const {
        std::vector<double> c(coarse_.size()), fi(fine_.size());
        for (std::size_t j = 0; j < c.size(); ++j) c[j] = f(coarse_.nodes[j]);
        for (std::size_t j = 0; j < fi.size(); ++j) fi[j] = f(fine_.nodes[j]);
        return {std::move(c), std::move(fi)};
    }

private:
    std::vector<std::size_t> index_of(const std::vector<double>& xs) const {
        std::vector<std::size_t> idx(xs.size());
        for (std::size_t j = 0; j < xs.size(); ++j)
            idx[j] = static_cast<std::size_t>(std::lower_bound(nodes_.begin(), nodes_.end(), xs[j]) - nodes_.begin());
        return idx;
    }

    Kernel make_kernel(const std::vector<double>& phi) const {
        Kernel k;
        k.coarse.resize(coarse_.size());
        k.fine.resize(fine_.size());
        for (std::size_t j = 0; j < coarse_.size(); ++j) {
            const std::size_t i = coarse_index_[j];
            k.coarse[j] = coarse_.weights[j] * phi[i] * area_[i];
        }
        for (std::size_t j = 0; j < fine_.size(); ++j) {
            const std::size_t i = fine_index_[j];
            k.fine[j] = fine_.weights[j] * phi[i] * area_[i];
        }
        return k;
    }

    Space space_;
    quadrature::Rule coarse_;
    quadrature::Rule fine_;
    std::vector<double> nodes_;
    std::vector<double> area_;
    std::vector<std::size_t> coarse_index_;
    std::vector<std::size_t> fine_index_;
};

/// f^(lambda) = int_0^T f(t) phi_lambda(t) A(t) dt on every grid abscissa, and
/// f^(1) = int_0^T f(t) A(t) dt.
inline TransformTable forward_transform(const RadialProfile& f, const SpectralGrid& grid) {
    const Space& space = f.space();
    validate(space, grid);
    const TransformEngine engine(space, f.grid(), grid.lambda_max());
    const auto [fc, ff] = engine.sample([&](double t) { return f(t); });
    const auto params = grid.params();
    std::vector<double> values(params.size());
    parallel_for(params.size(), [&](std::size_t i) { values[i] = TransformEngine::apply(engine.kernel(params[i]), fc, ff); });
    TransformTable table;
    table.grid = grid;
    table.principal_values.assign(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(grid.principal.size()));
    table.complementary_values.assign(values.begin() + static_cast<std::ptrdiff_t>(grid.principal.size()), values.end());
    table.at_one = TransformEngine::apply(engine.volume_kernel(), fc, ff);
    return table;
}

/// f^(1) = int f dvol.
inline double volume_integral(const RadialProfile& f) {
    const TransformEngine engine(f.space(), f.grid(), 0.0);
    const auto [fc, ff] = engine.sample([&](double t) { return f(t); });
    return TransformEngine::apply(engine.volume_kernel(), fc, ff);
}

/// Single transform value.
inline double forward_transform(const RadialProfile& f, SpectralParam p) {
    validate(f.space(), p);
    const TransformEngine engine(f.space(), f.grid(), p.series == Series::principal ? std::abs(p.value) : 0.0);
    const auto [fc, ff] = engine.sample([&](double t) { return f(t); });
    return TransformEngine::apply(engine.kernel(p), fc, ff);
}

// ---------------------------------------------------------------------------
// Plancherel inversion

/// log Gamma(z) for Re z >= 1/2 (Lanczos, g = 7, nine coefficients).
inline std::complex<double> log_gamma(std::complex<double> z) {
    static constexpr std::array<double, 9> coef{0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                                                771.32342877765313,   -176.61502916214059,   12.507343278686905,
                                                -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    if (z.real() < 0.5) throw InvalidInput("log_gamma: Re z must be >= 1/2");
    z -= 1.0;
    std::complex<double> x = coef[0];
    for (std::size_t i = 1; i < coef.size(); ++i) x += coef[i] / (z + static_cast<double>(i));
    const std::complex<double> t = z + 7.5;
    return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

/// Unnormalized Plancherel density |c(lambda)|^-2 = |Gamma(rho + i lambda) / Gamma(i lambda)|^2
/// for hyperbolic space; lambda^(n-1) for Euclidean space.
inline double plancherel_density(const Space& space, double lambda) {
    lambda = std::abs(lambda);
    if (!space.is_hyperbolic()) return std::pow(lambda, space.dim() - 1);
    if (lambda == 0.0) return 0.0;
    // |Gamma(i lambda)|^2 = pi / (lambda sinh(pi lambda)), in logs to avoid overflow.
    const double x = std::numbers::pi * lambda;
    const double log_sinh = x + std::log1p(-std::exp(-2.0 * x)) - std::numbers::ln2;
    const double log_abs_gamma_i2 = std::log(std::numbers::pi) - std::log(lambda) - log_sinh;
    const double log_abs_gamma_rho2 = 2.0 * log_gamma({space.rho(), lambda}).real();
    return std::exp(log_abs_gamma_rho2 - log_abs_gamma_i2);
}

namespace detail {

/// Composite rule over [0, lambda_max] aligned with the given breakpoints.
inline quadrature::Rule spectral_rule(std::span<const double> breakpoints, double t_max) {
    quadrature::Rule rule;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        const double h = breakpoints[i + 1] - breakpoints[i];
        const auto panels = static_cast<std::size_t>(std::max(1.0, std::ceil(t_max * h / 6.0)));
        quadrature::append_composite(rule, breakpoints[i], breakpoints[i + 1], panels);
    }
    return rule;
}

}  // namespace detail

/// Overall constant C of the inversion f(t) = C int_0^oo f^(lambda) phi_lambda(t) |c(lambda)|^-2 d lambda.
///
/// Calibrated by demanding exact reconstruction of f(0) for the reference
/// profile exp(-t^2) truncated at T = n + 6, whose transform is negligible
/// beyond lambda = 14. Deterministic for each (kind, n).
inline double plancherel_constant(const Space& space) {
    const double T = space.dim() + 6.0;
    const double lambda_max = 14.0;
    std::vector<double> knots;
    for (int i = 0; i <= static_cast<int>(T); ++i) knots.push_back(i);
    if (knots.back() < T) knots.push_back(T);
    const TransformEngine engine(space, knots, lambda_max);
    const auto [fc, ff] = engine.sample([](double t) { return std::exp(-t * t); });
    std::vector<double> breaks;
    for (int i = 0; i <= 28; ++i) breaks.push_back(0.5 * i);
    const auto rule = detail::spectral_rule(breaks, T);
    std::vector<double> contrib(rule.size());
    parallel_for(rule.size(), [&](std::size_t i) {
        const double l = rule.nodes[i];
        contrib[i] = rule.weights[i] * plancherel_density(space, l) *
                     TransformEngine::apply(engine.kernel(SpectralParam::principal(l)), fc, ff);
    });
    const double integral = std::accumulate(contrib.begin(), contrib.end(), 0.0);
    return 1.0 / integral;
}

struct InverseOptions {
    /// Maximum allowed contribution of the top 10% of the spectral band,
    /// relative to the largest reconstructed value.
    double band_edge_tolerance = 1e-5;
    /// Overrides the calibrated Plancherel constant when set.
    std::optional<double> constant;
};

/// Reconstructs f on `t_grid` from densely sampled principal-series values
/// (interpolated by a natural cubic spline in lambda) by Plancherel inversion
/// truncated at the table's lambda_max.
inline RadialProfile inverse_transform(const Space& space, const TransformTable& table,
                                       std::span<const double> t_grid, const InverseOptions& options = {}) {
    const auto& lambdas = table.grid.principal;
    if (lambdas.size() < 2 || lambdas.size() != table.principal_values.size())
        throw InvalidInput("inverse_transform: table needs at least two principal samples");
    if (lambdas.front() != 0.0) throw InvalidInput("inverse_transform: principal grid must start at 0");
    if (t_grid.empty()) throw InvalidInput("inverse_transform: empty t grid");
    // The profile class doubles as a natural spline in lambda here.
    const RadialProfile spectrum(Space::euclidean(1), lambdas, table.principal_values);
    const double lambda_max = lambdas.back();
    const double t_max = *std::max_element(t_grid.begin(), t_grid.end());
    const auto rule = detail::spectral_rule(lambdas, t_max);
    const double C = options.constant ? *options.constant : plancherel_constant(space);

    const std::size_t nt = t_grid.size();
    std::vector<double> contrib(rule.size() * nt);
    parallel_for(rule.size(), [&](std::size_t i) {
        const double l = rule.nodes[i];
        const double w = C * rule.weights[i] * plancherel_density(space, l) * spectrum(l);
        const auto phi = spherical_function(space, SpectralParam::principal(l), t_grid);
        for (std::size_t k = 0; k < nt; ++k) contrib[i * nt + k] = w * phi[k];
    });
    std::vector<double> f(nt, 0.0), edge(nt, 0.0);
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const bool in_edge = rule.nodes[i] >= 0.9 * lambda_max;
        for (std::size_t k = 0; k < nt; ++k) {
            f[k] += contrib[i * nt + k];
            if (in_edge) edge[k] += contrib[i * nt + k];
        }
    }
    double fmax = 0.0, emax = 0.0;
    for (std::size_t k = 0; k < nt; ++k) {
        fmax = std::max(fmax, std::abs(f[k]));
        emax = std::max(emax, std::abs(edge[k]));
    }
    if (emax > options.band_edge_tolerance * fmax && emax > 0.0)
        throw NumericalError("inverse_transform: spectral truncation too tight", emax / fmax);
    return RadialProfile(space, std::vector<double>(t_grid.begin(), t_grid.end()), std::move(f));
}

}  // namespace hypack
