#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "halfharm/conformal.hpp"
#include "halfharm/errors.hpp"
#include "halfharm/quadrature.hpp"

using namespace halfharm;

namespace {

cplx random_disc_point(std::mt19937& rng) {
    std::uniform_real_distribution<double> U(0, 1);
    double r = std::sqrt(U(rng)) * (1 - 1e-9), t = 2 * kPi * U(rng);
    return std::polar(r, t);
}

}  // namespace

TEST(Stereo, Examples) {
    Vec3 n = stereo(0.0);
    EXPECT_DOUBLE_EQ(n.x, 0);
    EXPECT_DOUBLE_EQ(n.z, 1);
    Vec3 e = stereo(1.0);
    EXPECT_NEAR(e.x, 1, 1e-15);
    EXPECT_NEAR(e.z, 0, 1e-15);
    Vec3 p = stereo(0.6);
    EXPECT_NEAR(p.x, 1.2 / 1.36, 1e-15);
    EXPECT_NEAR(p.z, 0.64 / 1.36, 1e-15);
    EXPECT_NEAR(norm(p), 1, 1e-15);
    EXPECT_THROW(stereo(cplx(1.1, 0)), DomainViolation);
}

TEST(Stereo, InverseExamples) {
    EXPECT_EQ(stereo_inv({0, 0, 1}), cplx(0, 0));
    EXPECT_NEAR(std::abs(stereo_inv({1, 0, 0}) - cplx(1, 0)), 0, 1e-15);
    EXPECT_THROW(stereo_inv({0, 0.6, -0.8}), DomainViolation);
    EXPECT_THROW(stereo_inv({0, 0, 1.1}), DomainViolation);
}

TEST(Stereo, RoundTrip) {
    std::mt19937 rng(1);
    for (int i = 0; i < 1000; ++i) {
        cplx z = random_disc_point(rng);
        Vec3 p = stereo(z);
        EXPECT_NEAR(norm(p), 1, 1e-14);
        EXPECT_GE(p.z, 0);
        EXPECT_NEAR(std::abs(stereo_inv(p) - z), 0, 1e-12);
    }
}

TEST(Stereo, Conformality) {
    std::mt19937 rng(2);
    for (int i = 0; i < 100; ++i) {
        cplx z = random_disc_point(rng) * 0.99;
        double h = 1e-6 * std::max(1.0, std::abs(z));
        Vec3 dx = (stereo(z + h) - stereo(z - h)) / (2 * h);
        Vec3 dy = (stereo(z + cplx(0, h)) - stereo(z - cplx(0, h))) / (2 * h);
        double lam = stereo_density(z);
        EXPECT_NEAR(dot(dx, dx), lam, 1e-6);
        EXPECT_NEAR(dot(dy, dy), lam, 1e-6);
        EXPECT_NEAR(dot(dx, dy), 0, 1e-6);
    }
}

TEST(Cayley, Examples) {
    EXPECT_NEAR(std::abs(cayley(cplx(0, 1))), 0, 1e-15);
    EXPECT_NEAR(std::abs(cayley(cplx(0, 0)) - cplx(-1, 0)), 0, 1e-15);
    EXPECT_EQ(cayley(PlanePoint::infinity()), cplx(1, 0));
    EXPECT_THROW(cayley(cplx(0, -0.1)), DomainViolation);
    EXPECT_NEAR(std::abs(cayley_inv(0.0).z - cplx(0, 1)), 0, 1e-15);
    EXPECT_FALSE(cayley_inv(0.0).infinite);
    EXPECT_TRUE(cayley_inv(1.0).infinite);
    EXPECT_THROW(cayley_inv(cplx(0, 1.01)), DomainViolation);
}

TEST(Cayley, RoundTripAndCircle) {
    std::mt19937 rng(3);
    for (int i = 0; i < 100; ++i) {
        cplx z = random_disc_point(rng) * 0.999;
        PlanePoint w = cayley_inv(z);
        ASSERT_FALSE(w.infinite);
        EXPECT_GE(w.z.imag(), 0);
        EXPECT_NEAR(std::abs(cayley(w) - z), 0, 1e-12);
    }
    std::cauchy_distribution<double> C(0, 3);
    for (int i = 0; i < 1000; ++i) {
        double x = C(rng);
        EXPECT_NEAR(std::abs(cayley(cplx(x, 0))), 1, 1e-12);
    }
}

TEST(Densities, Values) {
    EXPECT_DOUBLE_EQ(stereo_density(0.0), 4);
    EXPECT_DOUBLE_EQ(stereo_density(std::polar(1.0, 0.7)), 1);
    EXPECT_DOUBLE_EQ(cayley_line_density(0), 2);
}

TEST(Densities, StereoTotalArea) {
    // radial integral 2 pi int_0^inf r * 4/(1+r^2)^2 dr
    auto f = [](double r) { return 2 * kPi * r * stereo_density(cplx(r, 0)); };
    EXPECT_NEAR(adaptive_integrate(f, 0, kInf, {1e-13, 1e-13, 50}).value, 4 * kPi, 1e-10);
}

TEST(Densities, CayleyLineLength) {
    EXPECT_NEAR(adaptive_integrate(cayley_line_density, -kInf, kInf, {1e-13, 1e-13, 50}).value, 2 * kPi,
                1e-10);
}

TEST(Densities, LineAverageMatchesCircleAverage) {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> U(-1, 1);
    QuadRule c = circle_rule(64);
    for (int t = 0; t < 10; ++t) {
        double a = U(rng), b = U(rng), k = U(rng);
        auto h = [=](cplx z) { return std::exp(a * z.real()) * std::cos(b * z.imag() + k); };
        double circ = 0;
        for (std::size_t i = 0; i < c.size(); ++i) circ += c.weights[i] * h(planar(c.nodes[i]));
        auto g = [&](double x) { return h(cayley(cplx(x, 0))) * cayley_line_density(x); };
        double line = adaptive_integrate(g, -kInf, kInf, {1e-13, 1e-13, 50}).value;
        EXPECT_NEAR(line, circ, 1e-10) << t;
    }
}

TEST(PushForward, HemisphereEqualsDisc) {
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> U(-1, 1);
    QuadRule hr = hemisphere_rule(64, 96), dr = disc_rule(64, 96);
    for (int t = 0; t < 10; ++t) {
        double a = U(rng), b = U(rng), c = U(rng);
        auto h = [=](const Vec3& p) { return std::sin(a * p.x + b) * std::exp(c * p.y) + p.z * p.x; };
        double sh = 0, sd = 0;
        for (std::size_t i = 0; i < hr.size(); ++i) sh += hr.weights[i] * h(hr.nodes[i]);
        for (std::size_t i = 0; i < dr.size(); ++i) {
            cplx z = planar(dr.nodes[i]);
            sd += dr.weights[i] * h(stereo(z)) * stereo_density(z);
        }
        EXPECT_NEAR(sh, sd, 1e-8) << t;
    }
}
