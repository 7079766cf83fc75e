#include "hypack/geometry.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

using namespace hypack;

namespace {

constexpr double pi = std::numbers::pi;

// Poincare-ball coordinates of a hyperboloid point and the ball-model metric.
std::vector<double> to_ball(const Point& p) {
    std::vector<double> y(p.coords.size() - 1);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = p.coords[i + 1] / (1.0 + p.coords[0]);
    return y;
}

double ball_model_distance(const std::vector<double>& y, const std::vector<double>& z) {
    double diff = 0.0, ny = 0.0, nz = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        diff += (y[i] - z[i]) * (y[i] - z[i]);
        ny += y[i] * y[i];
        nz += z[i] * z[i];
    }
    return std::acosh(1.0 + 2.0 * diff / ((1.0 - ny) * (1.0 - nz)));
}

double sinh_series(double x) {
    double term = x, sum = x;
    for (int k = 1; k < 40; ++k) {
        term *= x * x / ((2.0 * k) * (2.0 * k + 1.0));
        sum += term;
    }
    return sum;
}

}  // namespace

TEST(Space, DerivedConstants) {
    for (int n = 1; n <= 10; ++n) {
        const auto e = Space::euclidean(n);
        EXPECT_EQ(e.rho(), 0.0);
        EXPECT_NEAR(e.omega(), 2.0 * std::pow(pi, n / 2.0) / std::tgamma(n / 2.0), 1e-14);
    }
    EXPECT_EQ(Space::hyperbolic(2).rho(), 0.5);
    EXPECT_EQ(Space::hyperbolic(8).rho(), 3.5);
    EXPECT_NEAR(Space::euclidean(1).omega(), 2.0, 1e-15);
    EXPECT_NEAR(Space::euclidean(3).omega(), 4.0 * pi, 1e-14);
    EXPECT_THROW(Space::hyperbolic(1), InvalidInput);
    EXPECT_THROW(Space::euclidean(0), InvalidInput);
}

TEST(Distance, EuclideanPythagoras) {
    const auto s = Space::euclidean(2);
    EXPECT_DOUBLE_EQ(distance(s, Point{{0, 0}}, Point{{3, 4}}), 5.0);
}

TEST(Distance, HyperbolicGeodesic) {
    const auto s = Space::hyperbolic(2);
    const Point y{{std::cosh(1.0), std::sinh(1.0), 0.0}};
    EXPECT_NEAR(distance(s, origin(s), y), 1.0, 1e-14);
    EXPECT_EQ(distance(s, y, y), 0.0);
}

TEST(Distance, AgreesWithBallModel) {
    const auto s = Space::hyperbolic(2);
    RandomStream rng(7);
    const BallSampler sampler(s, 3.0);
    for (int i = 0; i < 200; ++i) {
        const Point x = sampler(rng), y = sampler(rng);
        EXPECT_NEAR(distance(s, x, y), ball_model_distance(to_ball(x), to_ball(y)), 1e-9);
    }
}

TEST(Distance, RejectsInvalidPoints) {
    const auto s = Space::hyperbolic(2);
    EXPECT_THROW(distance(s, Point{{1.0, 0.5, 0.0}}, origin(s)), InvalidInput);
    EXPECT_THROW(distance(s, Point{{-1.0, 0.0, 0.0}}, origin(s)), InvalidInput);
    EXPECT_THROW(distance(s, Point{{1.0, 0.0}}, origin(s)), InvalidInput);
}

TEST(Distance, SymmetricAndTriangleInequality) {
    for (const auto& s : {Space::hyperbolic(2), Space::hyperbolic(5), Space::euclidean(3)}) {
        RandomStream rng(11);
        const BallSampler sampler(s, 4.0);
        for (int i = 0; i < 500; ++i) {
            const Point x = sampler(rng), y = sampler(rng), z = sampler(rng);
            const double xy = distance(s, x, y), yz = distance(s, y, z), xz = distance(s, x, z);
            EXPECT_EQ(xy, distance(s, y, x));
            EXPECT_LE(xz, xy + yz + 1e-9);
        }
    }
}

TEST(SphereArea, KnownValues) {
    EXPECT_NEAR(sphere_area(Space::euclidean(3), 1.0), 4.0 * pi, 1e-14);
    EXPECT_EQ(sphere_area(Space::euclidean(3), 0.0), 0.0);
    EXPECT_EQ(sphere_area(Space::hyperbolic(4), 0.0), 0.0);
    EXPECT_NEAR(sphere_area(Space::hyperbolic(2), 1.0), 2.0 * pi * sinh_series(1.0), 1e-13);
    EXPECT_NEAR(sphere_area(Space::hyperbolic(2), 1.0), 7.38401, 1e-5);
    EXPECT_THROW(sphere_area(Space::hyperbolic(2), -0.1), InvalidInput);
}

TEST(BallVolume, KnownValues) {
    EXPECT_NEAR(ball_volume(Space::euclidean(2), 1.0), pi, 1e-14);
    EXPECT_EQ(ball_volume(Space::hyperbolic(2), 0.0), 0.0);
    EXPECT_EQ(ball_volume(Space::hyperbolic(6), 0.0), 0.0);
    EXPECT_EQ(ball_volume(Space::euclidean(4), 0.0), 0.0);
    EXPECT_THROW(ball_volume(Space::euclidean(2), -1.0), InvalidInput);

    const auto h2 = Space::hyperbolic(2);
    const double quad = quadrature::integrate([](double t) { return 2.0 * pi * std::sinh(t); }, 0.0, 1.0, 4);
    EXPECT_NEAR(ball_volume(h2, 1.0), quad, 1e-12);
    EXPECT_NEAR(ball_volume(h2, 1.0), 3.41228, 1e-5);

    // int_0^R sinh^4 = sinh(4R)/32 - sinh(2R)/4 + 3R/8
    const auto h5 = Space::hyperbolic(5);
    for (double R : {0.3, 1.0, 2.5, 6.0}) {
        const double exact = h5.omega() * (std::sinh(4 * R) / 32 - std::sinh(2 * R) / 4 + 3 * R / 8);
        EXPECT_NEAR(ball_volume(h5, R), exact, 1e-10 * exact) << R;
    }
}

TEST(BallVolume, DerivativeMatchesSphereAreaAndIsIncreasing) {
    for (const auto& s : {Space::hyperbolic(2), Space::hyperbolic(3), Space::hyperbolic(4), Space::hyperbolic(7),
                          Space::euclidean(1), Space::euclidean(8)}) {
        double prev = 0.0;
        for (double R = 0.1; R <= 5.0; R += 0.1) {
            const double h = 1e-5 * R;
            const double deriv = (ball_volume(s, R + h) - ball_volume(s, R - h)) / (2 * h);
            EXPECT_NEAR(deriv / sphere_area(s, R), 1.0, 1e-6) << s.dim() << " " << R;
            const double v = ball_volume(s, R);
            EXPECT_GT(v, prev);
            prev = v;
        }
    }
}

TEST(BallVolume, SmallBallsAreEuclidean) {
    for (int n = 2; n <= 8; ++n) {
        const double ratio = ball_volume(Space::hyperbolic(n), 1e-3) / ball_volume(Space::euclidean(n), 1e-3);
        EXPECT_NEAR(ratio, 1.0, 1e-4) << n;
    }
}

TEST(BallVolume, RadiusForVolumeInverts) {
    const auto h2 = Space::hyperbolic(2);
    const double T = ball_radius_for_volume(h2, 1.0);
    EXPECT_NEAR(ball_volume(h2, T), 1.0, 1e-12);
    EXPECT_NEAR(T, std::acosh(1.0 + 1.0 / (2 * pi)), 1e-12);
}

TEST(Sampling, ShrinkingBallConvergesToOrigin) {
    const auto s = Space::hyperbolic(3);
    RandomStream rng(3);
    for (double R : {1e-2, 1e-5, 1e-9}) {
        const Point p = sample_uniform_ball(s, R, rng);
        EXPECT_NO_THROW(validate(s, p));
        EXPECT_LE(distance(s, origin(s), p), R * (1 + 1e-9));
    }
    EXPECT_THROW(sample_uniform_ball(s, 0.0, rng), InvalidInput);
}

TEST(Sampling, MeanCoshMatchesQuadrature) {
    const auto s = Space::hyperbolic(2);
    const BallSampler sampler(s, 1.0);
    RandomStream rng(2024);
    const int draws = 100000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < draws; ++i) {
        const double c = sampler(rng).coords[0];  // cosh d(x, o)
        sum += c;
        sum2 += c * c;
    }
    const double mean = sum / draws;
    const double se = std::sqrt((sum2 / draws - mean * mean) / draws);
    const double oracle =
        quadrature::integrate([](double t) { return std::cosh(t) * std::sinh(t); }, 0.0, 1.0, 4) / (std::cosh(1.0) - 1.0);
    EXPECT_NEAR(mean, oracle, 3.0 * se);
}

TEST(Sampling, RadialFractionMatchesVolumeRatio) {
    for (const auto& s : {Space::hyperbolic(2), Space::hyperbolic(4), Space::euclidean(3)}) {
        const double R = 2.0;
        const BallSampler sampler(s, R);
        RandomStream rng(99);
        const int draws = 100000;
        int inside = 0;
        for (int i = 0; i < draws; ++i)
            if (distance(s, origin(s), sampler(rng)) <= R / 2) ++inside;
        const double p = ball_volume(s, R / 2) / ball_volume(s, R);
        const double sigma = std::sqrt(p * (1 - p) / draws);
        EXPECT_NEAR(static_cast<double>(inside) / draws, p, 3.0 * sigma) << s.dim();
    }
}

TEST(Sampling, Deterministic) {
    const auto s = Space::hyperbolic(2);
    RandomStream a(5), b(5);
    const BallSampler sampler(s, 2.0);
    for (int i = 0; i < 10; ++i) EXPECT_EQ(sampler(a).coords, sampler(b).coords);
}

TEST(BallIntersection, EuclideanClosedForms) {
    const double R = 0.7;
    for (double t : {0.0, 1e-13, 0.1, 0.7, 1.3, 1.4, 2.0}) {
        const double lens2 = t >= 2 * R ? 0.0 : 2 * R * R * std::acos(t / (2 * R)) - 0.5 * t * std::sqrt(4 * R * R - t * t);
        const double lens3 = t >= 2 * R ? 0.0 : pi * (4 * R + t) * (2 * R - t) * (2 * R - t) / 12.0;
        EXPECT_NEAR(ball_intersection_volume(Space::euclidean(1), R, t), std::max(0.0, 2 * R - t), 1e-14) << t;
        EXPECT_NEAR(ball_intersection_volume(Space::euclidean(2), R, t), lens2, 1e-13) << t;
        EXPECT_NEAR(ball_intersection_volume(Space::euclidean(3), R, t), lens3, 1e-13) << t;
    }
}

TEST(BallIntersection, IntegratesToSquaredVolume) {
    // int vol(B_R(o) cap B_R(x)) dx = vol(B_R)^2.
    using gk = boost::math::quadrature::gauss_kronrod<double, 31>;
    for (const auto& s : {Space::hyperbolic(2), Space::hyperbolic(3), Space::hyperbolic(5), Space::euclidean(4)}) {
        const double R = 0.8;
        const double total = gk::integrate(
            [&](double t) { return ball_intersection_volume(s, R, t) * sphere_area(s, t); }, 0.0, 2 * R, 8, 1e-12);
        const double v = ball_volume(s, R);
        EXPECT_NEAR(total, v * v, 1e-9 * v * v) << s.dim();
    }
}

TEST(BallIntersection, ContinuousAtBothEnds) {
    const Space s = Space::hyperbolic(4);
    const double R = 0.6;
    EXPECT_NEAR(ball_intersection_volume(s, R, 1e-14), ball_volume(s, R), 1e-12);
    const double near_touch = ball_intersection_volume(s, R, 2 * R * (1.0 - 1e-15));
    EXPECT_GE(near_touch, 0.0);
    EXPECT_LT(near_touch, 1e-12);
}
