#pragma once

// Hard-sphere point processes in a ball B_R(o): Matern type II samples,
// unthinned Poisson samples for testing, and window estimators of intensity,
// packing density and the autocorrelation functional, plus an audit of the
// inequality chain behind the certificate bound.

#include "hypack/certificate.hpp"
#include "hypack/errors.hpp"
#include "hypack/geometry.hpp"
#include "hypack/profile.hpp"
#include "hypack/random.hpp"
#include "hypack/spherical.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

namespace hypack {

enum class ProcessKind { matern_ii, poisson };

inline std::string to_string(ProcessKind p) { return p == ProcessKind::matern_ii ? "matern-ii" : "poisson"; }

inline ProcessKind parse_process_kind(const std::string& s) {
    if (s == "matern-ii") return ProcessKind::matern_ii;
    if (s == "poisson") return ProcessKind::poisson;
    throw InvalidInput("unknown process '" + s + "' (expected matern-ii or poisson)");
}

struct PackingSample {
    Space space;
    double r = 0.0;
    double window_radius = 0.0;
    std::vector<Point> points;
    std::uint64_t seed = 0;
    ProcessKind process = ProcessKind::matern_ii;
    double proposal_intensity = 0.0;

    std::size_t size() const noexcept { return points.size(); }
};

struct SimulationOptions {
    double max_expected_proposals = 1e7;
};

namespace detail {

struct Proposals {
    std::vector<Point> points;
    std::vector<double> radius;  // d(o, x)
};

/// Poisson(lambda vol(B_R)) uniform points in B_R(o). Stream order: the count,
/// then per point its radius, its direction and (if `marks`) its mark.
inline Proposals draw_proposals(const Space& space, double lambda, double R, RandomStream& rng,
                                std::vector<double>* marks, const SimulationOptions& opt) {
    const double expected = lambda * ball_volume(space, R);
    if (expected > opt.max_expected_proposals)
        throw ResourceLimit("expected proposal count " + std::to_string(expected) + " exceeds the cap " +
                            std::to_string(opt.max_expected_proposals));
    Proposals out;
    if (expected == 0.0) return out;
    const BallSampler sampler(space, R);
    const std::uint64_t count = rng.poisson(expected);
    out.points.reserve(count);
    out.radius.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        const double t = sampler.sample_radius(rng);
        const auto u = random_direction(space.dim(), rng);
        out.points.push_back(polar_point(space, t, u));
        out.radius.push_back(t);
        if (marks) marks->push_back(rng.uniform());
    }
    return out;
}

inline void check_sampling_input(double r, double lambda, double R) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InvalidInput("sample: proposal intensity must be >= 0");
    if (!(R > 0.0) || !std::isfinite(R)) throw InvalidInput("sample: window radius must be > 0");
    if (!(r >= 0.0) || !std::isfinite(r)) throw InvalidInput("sample: packing radius must be >= 0");
}

}  // namespace detail

/// Matern type II: a proposal survives iff no other proposal within distance
/// 2r carries a strictly smaller mark.
inline PackingSample sample_matern(const Space& space, double r, double lambda, double R, std::uint64_t seed,
                                   const SimulationOptions& opt = {}) {
    detail::check_sampling_input(r, lambda, R);
    if (!(r > 0.0)) throw InvalidInput("sample_matern: packing radius must be > 0");
    RandomStream rng(seed);
    std::vector<double> marks;
    detail::Proposals prop = detail::draw_proposals(space, lambda, R, rng, &marks, opt);

    // |d(o,x) - d(o,y)| <= d(x,y), so conflicts are searched in a radius window.
    std::vector<std::size_t> order(prop.points.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return prop.radius[a] != prop.radius[b] ? prop.radius[a] < prop.radius[b] : a < b;
    });
    const double reach = 2.0 * r;
    std::vector<bool> keep(prop.points.size(), true);
    for (std::size_t a = 0; a < order.size(); ++a) {
        const std::size_t i = order[a];
        auto conflicts = [&](std::size_t b) {
            const std::size_t j = order[b];
            return marks[j] < marks[i] &&
                   detail::distance_unchecked(space, prop.points[i].coords, prop.points[j].coords) < reach;
        };
        for (std::size_t b = a; b-- > 0 && prop.radius[order[b]] >= prop.radius[i] - reach;)
            if (conflicts(b)) {
                keep[i] = false;
                break;
            }
        if (!keep[i]) continue;
        for (std::size_t b = a + 1; b < order.size() && prop.radius[order[b]] <= prop.radius[i] + reach; ++b)
            if (conflicts(b)) {
                keep[i] = false;
                break;
            }
    }
    PackingSample s{space, r, R, {}, seed, ProcessKind::matern_ii, lambda};
    for (std::size_t i = 0; i < prop.points.size(); ++i)
        if (keep[i]) s.points.push_back(std::move(prop.points[i]));
    return s;
}

/// Unthinned Poisson process (r = 0); for testing the estimators.
inline PackingSample sample_poisson(const Space& space, double lambda, double R, std::uint64_t seed,
                                    const SimulationOptions& opt = {}) {
    detail::check_sampling_input(0.0, lambda, R);
    RandomStream rng(seed);
    detail::Proposals prop = detail::draw_proposals(space, lambda, R, rng, nullptr, opt);
    return {space, 0.0, R, std::move(prop.points), seed, ProcessKind::poisson, lambda};
}

/// Closed-form Matern II intensity (1 - exp(-lambda v)) / v, v = vol(B_2r).
inline double matern_intensity(const Space& space, double r, double lambda) {
    const double v = ball_volume(space, 2.0 * r);
    return -std::expm1(-lambda * v) / v;
}

/// Pairs closer than 2r and points outside the window, by an exhaustive scan.
struct SeparationCheck {
    std::size_t close_pairs = 0;
    std::size_t outside = 0;
    double min_distance = std::numeric_limits<double>::infinity();

    bool passed() const noexcept { return close_pairs == 0 && outside == 0; }
};

inline SeparationCheck check_separation(const PackingSample& s) {
    SeparationCheck out;
    for (std::size_t i = 0; i < s.points.size(); ++i) {
        if (distance(s.space, origin(s.space), s.points[i]) > s.window_radius * (1.0 + 1e-12)) ++out.outside;
        for (std::size_t j = i + 1; j < s.points.size(); ++j) {
            const double d = distance(s.space, s.points[i], s.points[j]);
            out.min_distance = std::min(out.min_distance, d);
            if (d < 2.0 * s.r) ++out.close_pairs;
        }
    }
    return out;
}

namespace detail {

inline std::vector<double> radii(const PackingSample& s) {
    std::vector<double> out;
    out.reserve(s.points.size());
    for (const Point& p : s.points) out.push_back(radius_unchecked(s.space, p.coords));
    return out;
}

inline std::size_t count_within(std::span<const double> radii, double R) {
    return static_cast<std::size_t>(std::count_if(radii.begin(), radii.end(), [R](double t) { return t <= R; }));
}

}  // namespace detail

/// #(points with d(o, x) <= R_obs) / vol(B_R_obs).
inline double estimate_intensity(const PackingSample& s, double R_obs) {
    if (!(R_obs > 0.0) || R_obs > s.window_radius)
        throw InvalidInput("estimate_intensity: need 0 < R_obs <= window radius");
    return static_cast<double>(detail::count_within(detail::radii(s), R_obs)) / ball_volume(s.space, R_obs);
}

/// Observation radius whose points all have their full exclusion ball B_2r
/// inside the window: R - 2r (R for a Poisson sample).
inline double interior_radius(const PackingSample& s) {
    const double R = s.window_radius - 2.0 * s.r;
    if (!(R > 0.0)) throw InvalidInput("window radius must exceed 2r for an interior window");
    return R;
}

struct DensityEstimate {
    double lower;          // balls entirely inside B_R_obs
    double upper;          // balls meeting B_R_obs
    double intensity_hat;  // points in B_R_obs / vol(B_R_obs)
    double R_obs;
};

/// Fraction of B_R_obs covered by the packing balls, bracketed by counting
/// only balls inside the observation ball and all balls meeting it.
inline DensityEstimate estimate_density(const PackingSample& s, double R_obs) {
    if (!(R_obs > 0.0) || R_obs + s.r > s.window_radius * (1.0 + 1e-12))
        throw InvalidInput("estimate_density: need 0 < R_obs <= R - r");
    const auto rad = detail::radii(s);
    const double vol_obs = ball_volume(s.space, R_obs);
    const double ball = ball_volume(s.space, s.r);
    const double inner = static_cast<double>(detail::count_within(rad, R_obs - s.r));
    const double meeting = static_cast<double>(detail::count_within(rad, R_obs + s.r));
    return {inner * ball / vol_obs, meeting * ball / vol_obs,
            static_cast<double>(detail::count_within(rad, R_obs)) / vol_obs, R_obs};
}

/// Radial step weight b: value levels[k] on [edges[k-1], edges[k]) with
/// edges[-1] = 0, zero beyond the last edge.
struct RadialWeight {
    std::vector<double> edges;
    std::vector<double> levels;

    /// Indicator of B_T(o) divided by vol(B_T).
    static RadialWeight normalized_ball(const Space& space, double T) {
        if (!(T > 0.0)) throw InvalidInput("weight: window radius must be > 0");
        return {{T}, {1.0 / ball_volume(space, T)}};
    }

    double support() const { return edges.back(); }

    double operator()(double t) const {
        for (std::size_t k = 0; k < edges.size(); ++k)
            if (t <= edges[k]) return levels[k];
        return 0.0;
    }

    double mass(const Space& space) const {
        double total = 0.0, prev = 0.0;
        for (std::size_t k = 0; k < edges.size(); ++k) {
            total += levels[k] * (ball_volume(space, edges[k]) - ball_volume(space, prev));
            prev = edges[k];
        }
        return total;
    }
};

inline void validate(const Space& space, const RadialWeight& b) {
    if (b.edges.empty() || b.edges.size() != b.levels.size()) throw InvalidInput("weight: edges and levels differ");
    for (std::size_t k = 0; k < b.edges.size(); ++k) {
        if (!(b.edges[k] > (k == 0 ? 0.0 : b.edges[k - 1]))) throw InvalidInput("weight: edges must increase");
        if (!(b.levels[k] >= 0.0) || !std::isfinite(b.levels[k])) throw InvalidInput("weight: levels must be >= 0");
    }
    if (std::abs(b.mass(space) - 1.0) > 1e-9) throw InvalidInput("weight: total mass must be 1");
}

struct AutocorrelationEstimate {
    double value;     // sum_x b(x) sum_y F(d(x, y))
    double T_window;  // support of b
    std::size_t pair_count;
    double intensity_hat;  // over the interior window
    double at_one;         // F^(1)
    double reduced;        // value - intensity_hat^2 F^(1)
};

/// Empirical autocorrelation functional of F with weight b. Every pair with
/// b(x) > 0 and d(x, y) <= supp F is seen because supp b + supp F <= R.
inline AutocorrelationEstimate estimate_autocorrelation(const PackingSample& s, const RadialProfile& F,
                                                        const RadialWeight& b) {
    if (!(F.space() == s.space)) throw InvalidInput("estimate_autocorrelation: profile lives in another space");
    validate(s.space, b);
    const double T = b.support();
    if (T + F.support() > s.window_radius * (1.0 + 1e-12))
        throw InvalidInput("estimate_autocorrelation: window plus profile support exceeds the sample window");
    const auto rad = detail::radii(s);
    const double reach = F.support();
    double value = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < s.points.size(); ++i) {
        const double w = rad[i] <= T ? b(rad[i]) : 0.0;
        if (w == 0.0 && rad[i] > T) continue;
        double inner = 0.0;
        for (std::size_t j = 0; j < s.points.size(); ++j) {
            if (std::abs(rad[i] - rad[j]) > reach) continue;
            const double d = i == j ? 0.0 : detail::distance_unchecked(s.space, s.points[i].coords, s.points[j].coords);
            if (d > reach) continue;
            inner += F(d);
            ++pairs;
        }
        value += w * inner;
    }
    AutocorrelationEstimate out;
    out.value = value;
    out.T_window = T;
    out.pair_count = pairs;
    out.intensity_hat = estimate_intensity(s, s.process == ProcessKind::poisson ? s.window_radius : interior_radius(s));
    out.at_one = volume_integral(F);
    out.reduced = value - out.intensity_hat * out.intensity_hat * out.at_one;
    return out;
}

inline AutocorrelationEstimate estimate_autocorrelation(const PackingSample& s, const RadialProfile& F,
                                                        double T_window) {
    return estimate_autocorrelation(s, F, RadialWeight::normalized_ball(s.space, T_window));
}

struct AuditReport {
    double lhs;             // empirical autocorrelation of F over B_T
    double diagonal_bound;  // F(0) #(P cap B_T) / vol(B_T)
    double diagonal_allowance;
    double plancherel_floor;  // intensity_hat^2 F^(1)
    double intensity_hat;
    double intensity_bound;  // F(0) / F^(1)
    double slack;
    std::size_t points_in_window;
    bool passed_diagonal;
    bool passed_intensity;
};

inline constexpr double default_audit_slack = 0.10;

/// Checks the two steps of the bound's proof on one sample. Off-diagonal pairs
/// are 2r-separated, where F <= 0, so the autocorrelation cannot exceed its
/// diagonal part; the sign check tolerates F up to tol_sign past 2r, which
/// enters as an explicit allowance. The intensity step compares the interior
/// intensity with F(0) / F^(1) up to a finite-window slack.
inline AuditReport audit_proof_chain(const PackingSample& s, const Certificate& cert, const VerificationReport& rep,
                                     double T_window, double slack = default_audit_slack) {
    if (!rep.admissible) throw ContractViolation("audit requires an admissible certificate");
    if (!(cert.space == s.space)) throw InvalidInput("audit: certificate lives in another space");
    if (cert.r > s.r * (1.0 + 1e-12) && s.process == ProcessKind::matern_ii)
        throw InvalidInput("audit: certificate radius exceeds the sample's packing radius");
    if (!(slack >= 0.0)) throw InvalidInput("audit: slack must be >= 0");
    const AutocorrelationEstimate est = estimate_autocorrelation(s, cert.profile, T_window);
    const double vol_T = ball_volume(s.space, T_window);
    const auto in_window = detail::count_within(detail::radii(s), T_window);
    const double f0 = cert.profile(0.0);
    AuditReport a;
    a.lhs = est.value;
    a.diagonal_bound = f0 * static_cast<double>(in_window) / vol_T;
    const double off_pairs = static_cast<double>(est.pair_count - in_window);
    a.diagonal_allowance =
        (off_pairs * std::max(rep.options.tol_sign, rep.sign_margin) + 1e-12 * std::abs(f0) * static_cast<double>(est.pair_count)) / vol_T;
    a.intensity_hat = est.intensity_hat;
    a.plancherel_floor = est.intensity_hat * est.intensity_hat * rep.at_one;
    a.intensity_bound = f0 / rep.at_one;
    a.slack = slack;
    a.points_in_window = in_window;
    a.passed_diagonal = a.lhs <= a.diagonal_bound + a.diagonal_allowance;
    a.passed_intensity = a.intensity_hat <= a.intensity_bound * (1.0 + slack);
    return a;
}

/// Ordered pairs (x, y), x != y, by distance bin; edges must increase.
inline std::vector<std::size_t> distance_histogram(const PackingSample& s, std::span<const double> edges) {
    if (edges.size() < 2) throw InvalidInput("histogram: need at least two edges");
    for (std::size_t k = 1; k < edges.size(); ++k)
        if (!(edges[k] > edges[k - 1])) throw InvalidInput("histogram: edges must increase");
    std::vector<std::size_t> counts(edges.size() - 1, 0);
    for (std::size_t i = 0; i < s.points.size(); ++i)
        for (std::size_t j = 0; j < s.points.size(); ++j) {
            if (i == j) continue;
            const double d = detail::distance_unchecked(s.space, s.points[i].coords, s.points[j].coords);
            if (d < edges.front() || d >= edges.back()) continue;
            const auto k = static_cast<std::size_t>(std::upper_bound(edges.begin(), edges.end(), d) - edges.begin()) - 1;
            ++counts[k];
        }
    return counts;
}

/// Mean and standard error over seeds, summed in seed order with Neumaier
/// compensation so the result does not depend on how samples were produced.
struct SeedSummary {
    double mean = 0.0;
    double standard_error = 0.0;
    std::size_t count = 0;
};

inline double compensated_sum(std::span<const double> xs) {
    double sum = 0.0, c = 0.0;
    for (double x : xs) {
        const double t = sum + x;
        c += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
        sum = t;
    }
    return sum + c;
}

inline SeedSummary summarize(std::span<const double> xs) {
    SeedSummary s;
    s.count = xs.size();
    if (xs.empty()) return s;
    s.mean = compensated_sum(xs) / static_cast<double>(xs.size());
    if (xs.size() > 1) {
        std::vector<double> sq;
        sq.reserve(xs.size());
        for (double x : xs) sq.push_back((x - s.mean) * (x - s.mean));
        const double var = compensated_sum(sq) / static_cast<double>(xs.size() - 1);
        s.standard_error = std::sqrt(var / static_cast<double>(xs.size()));
    }
    return s;
}

}  // namespace hypack
