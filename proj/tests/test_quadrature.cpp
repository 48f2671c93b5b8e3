#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "halfharm/errors.hpp"
#include "halfharm/quadrature.hpp"

using namespace halfharm;

namespace {

// direct spherical-coordinate product rule on the upper hemisphere (independent of the chart)
double spherical_oracle(const std::function<double(const Vec3&)>& h) {
    std::vector<double> th, wt;
    gauss_legendre_on(80, 0, kPi / 2, th, wt);
    const int nphi = 160;
    double s = 0;
    for (std::size_t i = 0; i < th.size(); ++i) {
        for (int k = 0; k < nphi; ++k) {
            double phi = 2 * kPi * k / nphi;
            Vec3 p{std::sin(th[i]) * std::cos(phi), std::sin(th[i]) * std::sin(phi), std::cos(th[i])};
            s += wt[i] * std::sin(th[i]) * (2 * kPi / nphi) * h(p);
        }
    }
    return s;
}

double integrate_rule(const QuadRule& q, const std::function<double(const Vec3&)>& f) {
    double s = 0;
    for (std::size_t i = 0; i < q.size(); ++i) s += q.weights[i] * f(q.nodes[i]);
    return s;
}

// Euler integral after t = u^(1/x), so the t^(x-1) endpoint singularity disappears
double gamma_oracle(double x) {
    auto f = [x](double u) { return std::exp(-std::pow(u, 1 / x)) / x; };
    return adaptive_integrate(f, 0, kInf, {1e-14, 1e-14, 60}).value;
}

}  // namespace

TEST(GaussLegendre, SmallRules) {
    QuadRule q1 = gauss_legendre(1);
    EXPECT_DOUBLE_EQ(q1.nodes[0].x, 0.0);
    EXPECT_DOUBLE_EQ(q1.weights[0], 2.0);
    QuadRule q2 = gauss_legendre(2);
    EXPECT_NEAR(q2.nodes[0].x, -1 / std::sqrt(3.0), 1e-15);
    EXPECT_NEAR(q2.nodes[1].x, 1 / std::sqrt(3.0), 1e-15);
    EXPECT_NEAR(q2.weights[0], 1.0, 1e-15);
    EXPECT_THROW(gauss_legendre(0), InvalidArgument);
}

TEST(GaussLegendre, PolynomialExactness) {
    QuadRule q4 = gauss_legendre(4);
    EXPECT_NEAR(integrate_rule(q4, [](const Vec3& p) { return std::pow(p.x, 6); }), 2.0 / 7, 1e-14);
    for (int n = 1; n <= 10; ++n) {
        QuadRule q = gauss_legendre(n);
        for (int k = 0; k <= 2 * n - 1; ++k) {
            double exact = (k % 2) ? 0.0 : 2.0 / (k + 1);
            double v = integrate_rule(q, [k](const Vec3& p) { return std::pow(p.x, k); });
            EXPECT_NEAR(v, exact, 1e-13 * std::max(1.0, exact)) << "n=" << n << " k=" << k;
        }
    }
}

TEST(Rules, WeightSums) {
    EXPECT_NEAR(gauss_legendre(17).weight_sum(), 2.0, 1e-12);
    EXPECT_NEAR(circle_rule(13).weight_sum(), 2 * kPi, 1e-12);
    EXPECT_NEAR(disc_rule(12, 20).weight_sum(), kPi, 1e-12);
    EXPECT_NEAR(hemisphere_rule(48, 64).weight_sum(), 2 * kPi, 1e-12);
    for (const QuadRule& q : {gauss_legendre(9), circle_rule(9), disc_rule(5, 7), hemisphere_rule(20, 16)})
        for (double w : q.weights) EXPECT_GT(w, 0);
    EXPECT_THROW(circle_rule(1), InvalidArgument);
    EXPECT_THROW(disc_rule(0, 4), InvalidArgument);
    EXPECT_THROW(disc_rule(3, 1), InvalidArgument);
}

TEST(Rules, CircleAndDisc) {
    QuadRule c = circle_rule(16);
    EXPECT_NEAR(integrate_rule(c, [](const Vec3& p) { return p.x * p.x; }), kPi, 1e-12);
    QuadRule d = disc_rule(16, 16);
    EXPECT_NEAR(integrate_rule(d, [](const Vec3& p) { return p.x * p.x + p.y * p.y; }), kPi / 2, 1e-10);
    EXPECT_NEAR(integrate_rule(d, [](const Vec3& p) { return p.x; }), 0.0, 1e-12);
    EXPECT_NEAR(integrate_rule(d, [](const Vec3& p) { return p.y; }), 0.0, 1e-12);
}

TEST(Rules, Hemisphere) {
    QuadRule h = hemisphere_rule(48, 64);
    EXPECT_NEAR(integrate_rule(h, [](const Vec3& p) { return 1 / ((1 + p.z) * (1 + p.z)); }), kPi, 1e-12);
    EXPECT_NEAR(integrate_rule(h, [](const Vec3& p) { return p.z; }), kPi, 1e-10);
}

TEST(Rules, HemisphereMatchesSphericalCoordinates) {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> U(-1, 1);
    QuadRule h = hemisphere_rule(64, 96);
    for (int trial = 0; trial < 20; ++trial) {
        double a = U(rng), b = U(rng), c = U(rng), e = U(rng);
        auto f = [=](const Vec3& p) { return std::exp(a * p.x + b * p.y) * std::cos(c * p.z + e) + p.z * p.z; };
        EXPECT_NEAR(integrate_rule(h, f), spherical_oracle(f), 1e-8) << trial;
    }
}

TEST(Gamma, Values) {
    EXPECT_NEAR(gamma_fn(1.0), 1.0, 1e-14);
    EXPECT_NEAR(gamma_fn(0.5), std::sqrt(kPi), 1e-13);
    EXPECT_NEAR(gamma_fn(0.25), 3.625609908221908, 1e-12);
    EXPECT_THROW(gamma_fn(0.0), InvalidArgument);
    EXPECT_THROW(gamma_fn(-1.5), InvalidArgument);
}

TEST(Gamma, AgainstIntegralDefinition) {
    for (double x : {0.25, 0.75, 1.3, 2.5, 4.2}) {
        double o = gamma_oracle(x);
        EXPECT_NEAR(gamma_fn(x) / o, 1.0, 1e-12) << x;
    }
}

TEST(Gamma, Recurrence) {
    for (int i = 1; i <= 50; ++i) {
        double x = 0.1 * i;
        EXPECT_NEAR(gamma_fn(x + 1) / (x * gamma_fn(x)), 1.0, 1e-11) << x;
    }
}

TEST(InvertMonotone, Basic) {
    auto id = [](double x) { return x; };
    EXPECT_NEAR(invert_monotone(id, 0, 1, 0.3), 0.3, 1e-15);
    auto cube = [](double x) { return x * x * x; };
    EXPECT_NEAR(invert_monotone(cube, 0, 2, 8), 2.0, 1e-14);
    EXPECT_THROW(invert_monotone(cube, 0, 2, 9), OutOfRange);
    auto bumpy = [](double x) { return std::sin(6 * x); };
    EXPECT_THROW(invert_monotone(bumpy, 0, 2, 0.1), PreconditionViolation);
}

TEST(InvertMonotone, RandomCubics) {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> U(0.1, 2);
    for (int t = 0; t < 50; ++t) {
        double a = U(rng), b = U(rng), c = U(rng);
        auto f = [=](double x) { return a * x + b * x * x * x + c * std::pow(x, 5); };
        double x = U(rng) / 2;
        EXPECT_NEAR(invert_monotone(f, 0, 1, f(x)), x, 1e-13);
    }
}

TEST(Adaptive, Examples) {
    auto one = [](double) { return 1.0; };
    EXPECT_NEAR(adaptive_integrate(one, 0, 1).value, 1.0, 1e-14);
    IntegrateOptions sing;
    sing.singular = {0.0};
    auto rs = [](double x) { return 1 / std::sqrt(x); };
    IntegrationResult r = adaptive_integrate(rs, 0, 1, {}, sing);
    EXPECT_NEAR(r.value, 2.0, 1e-8);
    EXPECT_TRUE(r.converged);
    auto cauchy = [](double x) { return 1 / (kPi * (1 + x * x)); };
    EXPECT_NEAR(adaptive_integrate(cauchy, -kInf, kInf).value, 1.0, 1e-10);
    EXPECT_NEAR(adaptive_integrate(cauchy, 0, kInf).value, 0.5, 1e-10);
    EXPECT_NEAR(adaptive_integrate(cauchy, -kInf, 0).value, 0.5, 1e-10);
    EXPECT_NEAR(adaptive_integrate(one, 1, 0).value, -1.0, 1e-14);
}

TEST(Adaptive, InteriorSingularityAndFailure) {
    IntegrateOptions o;
    o.singular = {0.5};
    auto f = [](double x) { return 1 / std::sqrt(std::abs(x - 0.5)); };
    EXPECT_NEAR(adaptive_integrate(f, 0, 1, {}, o).value, 2 * std::sqrt(2.0), 1e-8);
    auto bad = [](double x) { return x > 0.3 ? std::nan("") : 1.0; };
    EXPECT_THROW(adaptive_integrate(bad, 0, 1), NumericalFailure);
}

TEST(Adaptive, Deterministic) {
    auto f = [](double x) { return std::sin(30 * x) * std::exp(-x); };
    double a = adaptive_integrate(f, 0, 5).value, b = adaptive_integrate(f, 0, 5).value;
    EXPECT_EQ(a, b);
}

TEST(Graded, LogEndpoint) {
    auto f = [](double x) { return -std::log(1 - x); };
    EXPECT_NEAR(graded_integrate(f, 0, 1, 40), 1.0, 1e-10);
}

TEST(AdaptiveDisc, Moments) {
    auto f = [](cplx z) { return std::norm(z) * std::norm(z); };
    EXPECT_NEAR(adaptive_disc(f).value, kPi / 3, 1e-10);
}
