#include "hypack/spherical.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

using namespace hypack;
using oracle::gaussian_profile;
using oracle::h3_closed_form;
using oracle::linspace;

namespace {

constexpr double pi = std::numbers::pi;

RadialProfile triangle(const Space& s) { return RadialProfile(s, {0.0, 1.0}, {1.0, 0.0}); }

}  // namespace

TEST(SphericalFunction, NormalizedAtOrigin) {
    for (const auto& s : {Space::hyperbolic(2), Space::hyperbolic(3), Space::hyperbolic(7), Space::euclidean(1),
                          Space::euclidean(4)}) {
        for (double l : {0.0, 0.3, 1.0, 7.5}) EXPECT_EQ(spherical_function(s, SpectralParam::principal(l), 0.0), 1.0);
    }
}

TEST(SphericalFunction, TrivialFunctionIsConstant) {
    for (int n : {2, 3, 5, 8}) {
        const auto s = Space::hyperbolic(n);
        const auto t = linspace(0.0, 8.0, 161);
        const auto phi = spherical_function(s, SpectralParam::complementary(s.rho()), t);
        for (double v : phi) EXPECT_NEAR(v, 1.0, 1e-8) << n;
    }
}

TEST(SphericalFunction, H3ClosedForm) {
    const auto s = Space::hyperbolic(3);
    EXPECT_NEAR(spherical_function(s, SpectralParam::principal(2.0), 1.0), std::sin(2.0) / (2.0 * std::sinh(1.0)), 1e-9);
    EXPECT_NEAR(spherical_function(s, SpectralParam::principal(2.0), 1.0), 0.386869, 1e-6);
    const auto t = linspace(0.0, 10.0, 1001);
    double worst = 0.0;
    for (double l : {0.5, 1.0, 2.0, 5.0}) {
        const auto phi = spherical_function(s, SpectralParam::principal(l), t);
        for (std::size_t i = 1; i < t.size(); ++i) worst = std::max(worst, std::abs(phi[i] - h3_closed_form(l, t[i])));
    }
    EXPECT_LT(worst, 1e-8);
}

TEST(SphericalFunction, H3ComplementaryClosedForm) {
    // phi_{is}(t) = sinh(s t) / (s sinh t) on H^3.
    const auto s = Space::hyperbolic(3);
    const auto t = linspace(0.0, 6.0, 121);
    for (double sv : {0.25, 0.5, 0.9}) {
        const auto phi = spherical_function(s, SpectralParam::complementary(sv), t);
        for (std::size_t i = 1; i < t.size(); ++i)
            EXPECT_NEAR(phi[i], std::sinh(sv * t[i]) / (sv * std::sinh(t[i])), 1e-9);
    }
}

TEST(SphericalFunction, SeriesAgreesWithOdeAtSwitchRadius) {
    RandomStream rng(1);
    const double t0 = detail::series_switch_radius;
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform() * 7);
        const double lam2 = std::pow(20.0 * rng.uniform(), 2) - 0.25 * (n - 1) * (n - 1) * rng.uniform();
        const double start = 1e-3;
        double out = 0.0;
        const std::array<double, 1> times{t0};
        detail::integrate_radial_ode(n, lam2, start, detail::hypergeometric_series(n, lam2, start), times,
                                     std::span<double>(&out, 1));
        EXPECT_NEAR(out, detail::hypergeometric_series(n, lam2, t0).value, 1e-9);
    }
}

TEST(SphericalFunction, EvenInLambda) {
    RandomStream rng(2);
    for (int trial = 0; trial < 30; ++trial) {
        const auto s = trial % 2 ? Space::hyperbolic(2 + trial % 5) : Space::euclidean(1 + trial % 6);
        const double l = 15.0 * rng.uniform();
        const std::vector<double> t{0.005, 0.3, 1.7, 4.2};
        const auto a = spherical_function(s, SpectralParam::principal(l), t);
        const auto b = spherical_function(s, SpectralParam::principal(-l), t);
        for (std::size_t i = 0; i < t.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-9);
    }
}

TEST(SphericalFunction, BoundedByOneOnPrincipalSeries) {
    const auto t = linspace(0.0, 8.0, 81);
    for (const auto& s : {Space::hyperbolic(2), Space::hyperbolic(4), Space::euclidean(2), Space::euclidean(8)}) {
        for (double l = 0.0; l <= 20.0; l += 0.5) {
            for (double v : spherical_function(s, SpectralParam::principal(l), t)) EXPECT_LE(std::abs(v), 1.0 + 1e-12);
        }
    }
}

TEST(SphericalFunction, EuclideanKernels) {
    const auto t = linspace(0.0, 5.0, 51);
    for (double l : {0.01, 1.0, 3.7}) {
        const auto e1 = spherical_function(Space::euclidean(1), SpectralParam::principal(l), t);
        const auto e2 = spherical_function(Space::euclidean(2), SpectralParam::principal(l), t);
        const auto e3 = spherical_function(Space::euclidean(3), SpectralParam::principal(l), t);
        for (std::size_t i = 0; i < t.size(); ++i) {
            const double x = l * t[i];
            EXPECT_NEAR(e1[i], std::cos(x), 1e-13);
            EXPECT_NEAR(e3[i], x == 0 ? 1.0 : std::sin(x) / x, 1e-13);
            // J0(x) = (1/pi) int_0^pi cos(x sin th) d th
            const double j0 = quadrature::integrate([x](double th) { return std::cos(x * std::sin(th)); }, 0, pi, 8) / pi;
            EXPECT_NEAR(e2[i], j0, 1e-12);
        }
    }
    // continuity across the small-argument series switch
    for (int n : {2, 5, 8}) {
        const double below = detail::euclidean_kernel(n, 0.1 - 1e-12);
        const double above = detail::euclidean_kernel(n, 0.1 + 1e-12);
        EXPECT_NEAR(below, above, 1e-12);
    }
}

TEST(SphericalFunction, RejectsInvalidParameters) {
    const auto h2 = Space::hyperbolic(2);
    const std::vector<double> t{0.0, 1.0};
    EXPECT_THROW(spherical_function(h2, SpectralParam::complementary(0.6), t), InvalidInput);
    EXPECT_THROW(spherical_function(h2, SpectralParam::complementary(0.0), t), InvalidInput);
    EXPECT_THROW(spherical_function(Space::euclidean(3), SpectralParam::complementary(0.1), t), InvalidInput);
    EXPECT_THROW(spherical_function(h2, SpectralParam::principal(1.0), std::vector<double>{-1.0}), InvalidInput);
}

TEST(ForwardTransform, AtOneIsVolumeIntegral) {
    RandomStream rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const auto s = trial % 3 == 0 ? Space::euclidean(1 + trial % 8) : Space::hyperbolic(2 + trial % 6);
        const double T = 0.5 + 4.0 * rng.uniform();
        const std::size_t m = 3 + static_cast<std::size_t>(20 * rng.uniform());
        const auto f = sample_profile(s, T, m, [&](double) { return rng.uniform() - 0.3; });
        const auto table = forward_transform(f, SpectralGrid::uniform(s, 5.0, 4, s.is_hyperbolic() ? 3 : 0));
        const double oracle = oracle::volume_integral_quadrature(f);
        EXPECT_NEAR(table.at_one, oracle, 1e-9 * std::abs(oracle)) << trial;
        if (s.is_hyperbolic()) {
            EXPECT_NEAR(table.complementary_values.back(), table.at_one, 1e-8 * std::abs(oracle));
        }
    }
}

TEST(ForwardTransform, Linear) {
    const auto s = Space::hyperbolic(3);
    const auto f = sample_profile(s, 2.0, 16, [](double t) { return std::cos(3 * t); });
    const auto g = sample_profile(s, 2.0, 16, [](double t) { return 1.0 - t * t; });
    const auto grid = SpectralGrid::uniform(s, 10.0, 21, 5);
    const double a = 1.7, b = -0.4;
    const auto tf = forward_transform(f, grid), tg = forward_transform(g, grid);
    const auto tc = forward_transform(combine(a, f, b, g), grid);
    for (std::size_t i = 0; i < grid.principal.size(); ++i)
        EXPECT_NEAR(tc.principal_values[i], a * tf.principal_values[i] + b * tg.principal_values[i], 1e-10);
    for (std::size_t i = 0; i < grid.complementary.size(); ++i)
        EXPECT_NEAR(tc.complementary_values[i], a * tf.complementary_values[i] + b * tg.complementary_values[i], 1e-10);
    EXPECT_NEAR(tc.at_one, a * tf.at_one + b * tg.at_one, 1e-10);
}

TEST(ForwardTransform, H3TentMatchesTrapezoidOracle) {
    const auto s = Space::hyperbolic(3);
    const auto f = triangle(s);
    // int_0^1 (1 - t) sin(t)/sinh(t) 4 pi sinh^2(t) dt on a fine trapezoid grid
    const int N = 200000;
    double sum = 0.0;
    for (int i = 0; i <= N; ++i) {
        const double t = static_cast<double>(i) / N;
        const double v = (1 - t) * std::sin(t) * 4 * pi * std::sinh(t);
        sum += (i == 0 || i == N) ? 0.5 * v : v;
    }
    const double oracle = sum / N;
    EXPECT_NEAR(forward_transform(f, SpectralParam::principal(1.0)), oracle, 1e-9);
}

TEST(ForwardTransform, EuclideanTriangleIsFejerKernel) {
    const auto s = Space::euclidean(1);
    const auto grid = SpectralGrid::uniform(s, 60.0, 241, 0);
    const auto table = forward_transform(triangle(s), grid);
    EXPECT_NEAR(table.at_one, 1.0, 1e-14);
    for (std::size_t i = 1; i < grid.principal.size(); ++i) {
        const double l = grid.principal[i];
        EXPECT_NEAR(table.principal_values[i], 2 * (1 - std::cos(l)) / (l * l), 1e-13);
    }
}

TEST(ForwardTransform, NonnegativeProfileHasPositiveMass) {
    RandomStream rng(8);
    for (int trial = 0; trial < 10; ++trial) {
        const auto s = Space::hyperbolic(2 + trial % 4);
        const auto f = sample_profile(s, 3.0, 12, [&](double) { return rng.uniform(); });
        EXPECT_GT(forward_transform(f, SpectralGrid::uniform(s, 1.0, 2, 1)).at_one, 0.0);
    }
}

TEST(ForwardTransform, RefinementDisagreementIsReported) {
    const TransformEngine::Kernel k{{1.0}, {0.5, 0.5}};
    EXPECT_NO_THROW(TransformEngine::apply(k, std::vector<double>{2.0}, std::vector<double>{2.0, 2.0}));
    EXPECT_THROW(TransformEngine::apply(k, std::vector<double>{2.0}, std::vector<double>{2.0, 2.1}), NumericalError);
}

TEST(Plancherel, DensityClosedForms) {
    for (double l : {0.1, 0.7, 2.0, 9.0}) {
        EXPECT_NEAR(plancherel_density(Space::hyperbolic(2), l), l * std::tanh(pi * l), 1e-12 * l);
        EXPECT_NEAR(plancherel_density(Space::hyperbolic(3), l), l * l, 1e-12 * l * l);
        // rho = 2: |Gamma(2 + i l)/Gamma(i l)|^2 = l^2 (1 + l^2)
        EXPECT_NEAR(plancherel_density(Space::hyperbolic(5), l), l * l * (1 + l * l), 1e-11 * l * l * (1 + l * l));
        EXPECT_NEAR(plancherel_density(Space::euclidean(4), l), l * l * l, 1e-12);
    }
    EXPECT_EQ(plancherel_density(Space::hyperbolic(2), 0.0), 0.0);
}

TEST(Plancherel, CalibratedConstantsMatchKnownNormalizations) {
    EXPECT_NEAR(plancherel_constant(Space::hyperbolic(3)), 1.0 / (2 * pi * pi), 1e-10);
    EXPECT_NEAR(plancherel_constant(Space::hyperbolic(2)), 1.0 / (2 * pi), 1e-10);
    for (int n : {1, 2, 3, 8}) {
        const auto e = Space::euclidean(n);
        const double expected = e.omega() / std::pow(2 * pi, n);
        EXPECT_NEAR(plancherel_constant(e) / expected, 1.0, 1e-9) << n;
    }
}

TEST(InverseTransform, ZeroTableGivesZeroProfile) {
    const auto s = Space::hyperbolic(2);
    TransformTable table;
    table.grid = SpectralGrid::uniform(s, 5.0, 11, 0);
    table.principal_values.assign(11, 0.0);
    const auto t = linspace(0.0, 2.0, 9);
    const auto f = inverse_transform(s, table, t);
    for (double v : f.values()) EXPECT_EQ(v, 0.0);
}

TEST(InverseTransform, RoundTripHyperbolic) {
    for (int n : {2, 3}) {
        const auto s = Space::hyperbolic(n);
        const double T = 6.0;
        const auto f = gaussian_profile(s, 0.6, T, 0.025);
        const auto t = linspace(0.0, T / 2, 61);
        double previous = 0.0;
        for (double lambda_max : {9.0, 18.0}) {
            const auto grid = SpectralGrid::uniform(s, lambda_max, static_cast<std::size_t>(lambda_max / 0.05) + 1, 0);
            const auto g = inverse_transform(s, forward_transform(f, grid), t, {.band_edge_tolerance = 1e-3, .constant = std::nullopt});
            double residual = 0.0;
            for (std::size_t i = 0; i < t.size(); ++i) residual = std::max(residual, std::abs(g.values()[i] - f(t[i])));
            EXPECT_LT(residual, 1e-5) << n << " " << lambda_max;
            if (previous > 0.0) {
                EXPECT_LE(residual, 0.5 * previous) << n;
            }
            previous = residual;
        }
    }
}

TEST(InverseTransform, EuclideanFejerRoundTrip) {
    const auto s = Space::euclidean(1);
    const auto grid = SpectralGrid::uniform(s, 1000.0, 10001, 0);
    const auto table = forward_transform(triangle(s), grid);
    const auto t = linspace(0.25, 0.5, 11);
    std::vector<double> tt{0.0};
    tt.insert(tt.end(), t.begin(), t.end());
    // t = 0 sits on the slowly converging 1/lambda tail; only the interior is checked.
    const auto g = inverse_transform(s, table, tt, {.band_edge_tolerance = 1e-3, .constant = std::nullopt});
    for (std::size_t i = 1; i < tt.size(); ++i) EXPECT_NEAR(g.values()[i], 1.0 - tt[i], 1e-5) << tt[i];
}

TEST(InverseTransform, TightTruncationIsReported) {
    const auto s = Space::hyperbolic(3);
    const auto f = gaussian_profile(s, 0.6, 6.0, 0.05);
    const auto grid = SpectralGrid::uniform(s, 3.0, 61, 0);
    const auto t = linspace(0.0, 1.0, 5);
    EXPECT_THROW(inverse_transform(s, forward_transform(f, grid), t), NumericalError);
}
