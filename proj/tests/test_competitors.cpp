#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "halfharm/certificates.hpp"
#include "halfharm/competitors.hpp"
#include "halfharm/errors.hpp"
#include "halfharm/quadrature.hpp"

using namespace halfharm;

namespace {

double composite(const std::function<double(double)>& f, double a, double b, int panels) {
    std::vector<double> x, w;
    double s = 0;
    for (int p = 0; p < panels; ++p) {
        gauss_legendre_on(16, a + (b - a) * p / panels, a + (b - a) * (p + 1) / panels, x, w);
        for (int i = 0; i < 16; ++i) s += w[i] * f(x[i]);
    }
    return s;
}

BlaschkeProduct z_pow(int d) { return BlaschkeProduct(0, std::vector<cplx>(d, cplx(0, 0))); }

const UnwindingReport& unwinding_z2() {
    static const UnwindingReport rep = [] {
        auto U = UnwindingFamily::make(z_pow(2), Profile::smooth_step(0, 1, 0.1, 1, 1024), 0.1);
        return unwinding_family_energy(U, 16);
    }();
    return rep;
}

const ZeroPullReport& zero_pull_z2() {
    static const ZeroPullReport rep =
        zero_pull_family_energy(z_pow(1), Profile::smooth_step(1, 0, 0.1, 1, 1024), 0.1, 16);
    return rep;
}

}  // namespace

TEST(G, EndpointsAndMonotone) {
    EXPECT_EQ(G_of(0), 0);
    double prev = 0;
    for (int k = 1; k <= 200; ++k) {
        double g = G_of(k / 200.0);
        EXPECT_GT(g, prev);
        prev = g;
    }
    EXPECT_THROW(G_of(1.5), InvalidArgument);
}

TEST(G, MatchesIndependentQuadrature) {
    auto f = [](double t) { return std::sqrt(F_closed(t * t)); };
    for (double s : {0.2, 0.5, 0.9})
        EXPECT_NEAR(G_of(s), composite(f, 0, s, 64), 1e-12);
}

TEST(G, DeltaCertificateRoute) {
    EXPECT_NEAR(std::sqrt(2.0) * (G_of(1) - G_of(1.0 / 3)), delta_certificate(1.0 / 3), 1e-9);
    EXPECT_NEAR(std::sqrt(2.0) * (G_of(1) - G_of(1.0 / 3)), 0.971, 5e-4);
}

TEST(G, InverseRoundTrip) {
    for (double s : {0.0, 0.1, 0.5, 0.99}) EXPECT_NEAR(G_inverse(G_of(s)), s, 1e-12);
}

TEST(Profile, HermiteReproducesCubics) {
    auto f = [](double t) { return 0.2 + 0.3 * t - 0.1 * t * t + 0.4 * t * t * t; };
    auto df = [](double t) { return 0.3 - 0.2 * t + 1.2 * t * t; };
    Profile p = Profile::from_function(f, df, 9);
    for (double t : {0.0, 0.05, 0.37, 0.5, 0.999, 1.0}) {
        EXPECT_NEAR(p(t), f(t), 1e-14);
        EXPECT_NEAR(p.deriv(t), df(t), 1e-13);
    }
}

TEST(OptimalProfile, EnergyMatchesClosedForm) {
    for (double d : {0.0, 1.0 / 3, 0.5}) {
        Profile g = optimal_profile(d);
        EXPECT_DOUBLE_EQ(g.front(), d);
        EXPECT_DOUBLE_EQ(g.back(), 1.0);
        double ex = 2 * std::pow(G_of(1) - G_of(d), 2);
        EXPECT_NEAR(profile_energy(g), ex, 1e-4) << "delta " << d;
    }
    double c = delta_certificate(1.0 / 3);
    EXPECT_NEAR(profile_energy(optimal_profile(1.0 / 3)), c * c, 1e-4);
    EXPECT_NEAR(c * c, 0.943, 1e-3);
    EXPECT_EQ(profile_energy(optimal_profile(1)), 0);
}

TEST(OptimalProfile, EnergyDensityIsFlat) {
    Profile g = optimal_profile(0.2);
    double c2 = std::pow(G_of(1) - G_of(0.2), 2);
    for (double t : {0.1, 0.3, 0.6, 0.9}) EXPECT_NEAR(F_closed(g(t) * g(t)) * g.deriv(t) * g.deriv(t), c2, 1e-6);
}

TEST(OptimalProfile, BumpsNeverLowerEnergy) {
    const double delta = 1.0 / 3;
    Profile g = optimal_profile(delta);
    double e0 = profile_energy(g);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> amp(-0.05, 0.05);
    std::uniform_int_distribution<int> freq(1, 6);
    for (int trial = 0; trial < 20; ++trial) {
        double A = amp(rng);
        int k = freq(rng);
        auto b = [=](double t) { return A * std::sin(k * kPi * t) * t * (1 - t) * (1 - t); };
        auto db = [=](double t) {
            return A * (k * kPi * std::cos(k * kPi * t) * t * (1 - t) * (1 - t) +
                        std::sin(k * kPi * t) * ((1 - t) * (1 - t) - 2 * t * (1 - t)));
        };
        std::vector<double> y = g.values(), m = g.derivs();
        for (int i = 0; i < g.n(); ++i) {
            double t = static_cast<double>(i) / (g.n() - 1);
            y[i] += b(t);
            m[i] += db(t);
        }
        EXPECT_GE(profile_energy(Profile(y, m)), e0 - 1e-6) << "A=" << A << " k=" << k;
    }
}

TEST(ProfileEnergy, Basics) {
    EXPECT_EQ(profile_energy(Profile::constant(0.4)), 0);
    EXPECT_GE(profile_energy(Profile::linear(0, 1)), 2 * std::pow(G_of(1), 2));
    // sits at 1 from t = 1/2 on
    EXPECT_THROW(profile_energy(Profile::smooth_step(0, 1, 0, 0.5, 1025)), DomainViolation);
}

TEST(ZeroPull, TangentialAndDegrees) {
    const ZeroPullReport& r = zero_pull_z2();
    EXPECT_EQ(r.d, 2);
    EXPECT_NEAR(r.tangential, kPi * (2 - 0.1), 1e-6);
    EXPECT_NEAR(r.tangential_exact, kPi * 1.9, 1e-15);
    for (const ShellRow& s : r.shells) EXPECT_EQ(s.degree, s.r <= 0.1 ? 1 : 2) << "r=" << s.r;
    EXPECT_LT(r.max_modulus_defect, 1e-10);
    EXPECT_TRUE(r.bound_holds);
    EXPECT_LE(r.radial, r.radial_bound);
    EXPECT_DOUBLE_EQ(r.threshold, 2 * kPi);
}

TEST(ZeroPull, RadialBoundRandomProfiles) {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> dd(0, 0.9), tt(0.4, 1);
    for (int trial = 0; trial < 10; ++trial) {
        double delta = dd(rng), t1 = tt(rng);
        ZeroPullReport r = zero_pull_family_energy(z_pow(1), Profile::smooth_step(1, delta, 0.1, t1, 1024), 0.1, 8);
        EXPECT_TRUE(r.bound_holds) << "delta=" << delta << " t1=" << t1;
    }
}

TEST(ZeroPull, RejectsBadProfiles) {
    EXPECT_THROW(zero_pull_family_energy(z_pow(1), Profile::linear(0.5, 0), 0.1), PreconditionViolation);
    EXPECT_THROW(zero_pull_family_energy(z_pow(1), Profile::smooth_step(1, 0, 0.1, 1, 64), 1.5), InvalidArgument);
}

TEST(Unwinding, LevelSetsOfZSquared) {
    auto U = UnwindingFamily::make(z_pow(2), Profile::smooth_step(0, 1, 0.1, 1, 1024), 0.1);
    ASSERT_EQ(U.poles.size(), 2u);
    ASSERT_EQ(U.minus.size(), 2u);
    EXPECT_NEAR(U.poles[0], 0, 1e-12);
    EXPECT_NEAR(U.poles[1], kPi, 1e-9);
    EXPECT_NEAR(U.minus[0], kPi / 2, 1e-9);
    EXPECT_NEAR(U.minus[1], 3 * kPi / 2, 1e-9);
    for (double r : {0.05, 0.2, 0.5, 1.0})
        for (int k = 0; k < 64; ++k) EXPECT_NEAR(std::abs(U.eval(std::polar(1.0, 0.1 * k), r)), 1, 1e-10);
}

TEST(Unwinding, ShellsAndRadialRoutes) {
    const UnwindingReport& r = unwinding_z2();
    for (const ShellRow& s : r.shells) {
        if (s.r <= 0.1) continue;
        EXPECT_NEAR(s.tangential, 2 * kPi, 1e-5) << "r=" << s.r;
        EXPECT_EQ(s.degree, 2);
    }
    EXPECT_NEAR(r.tangential, 2 * kPi * 0.9, 1e-5);
    EXPECT_NEAR(r.radial_printed, r.radial, 1e-7 * r.radial);
    EXPECT_NEAR(r.radial_via_H, r.radial, 1e-3 * r.radial);
    EXPECT_GE(r.int_H_alpha, r.pi_d_over_8);
    EXPECT_TRUE(r.admissible);
    EXPECT_LT(r.max_modulus_defect, 1e-10);
}

TEST(Unwinding, ConstantThetaHasNoRadialPart) {
    auto U = UnwindingFamily::make(z_pow(2), Profile::constant(1), 0.1);
    UnwindingReport r = unwinding_family_energy(U, 8);
    EXPECT_FALSE(r.admissible);
    EXPECT_EQ(r.radial, 0);
    EXPECT_NEAR(r.total, 2 * kPi * 0.9, 1e-6);
}

TEST(Unwinding, HFunctionals) {
    BlaschkeProduct w = z_pow(2);
    auto U = UnwindingFamily::make(w, Profile::smooth_step(0, 1, 0.1, 1, 64), 0.1);
    for (double a : {0.05, 0.3, 1.0}) {
        double h = H_f(w, a);
        EXPECT_NEAR(H_f_printed(U, a), h, 1e-8 * h);
        // rotating the phase of z^2 is a rotation of the disc
        EXPECT_NEAR(H_tilde(w, a), h, 1e-8 * h);
        EXPECT_LE(H_tilde(w, a), 2 * kPi * F1_closed_or_quad(a));
    }
}

TEST(Direct, MatchesDecomposition) {
    const ZeroPullReport& z = zero_pull_z2();
    double dz = direct_energy(zero_pull_field(z_pow(1), Profile::smooth_step(1, 0, 0.1, 1, 1024), 0.1), 16);
    EXPECT_NEAR(dz, z.total, 0.02 * z.total);
    auto U = UnwindingFamily::make(z_pow(2), Profile::smooth_step(0, 1, 0.1, 1, 1024), 0.1);
    const UnwindingReport& u = unwinding_z2();
    double du = direct_energy(unwinding_field(U), 16);
    EXPECT_NEAR(du, u.total, 0.02 * u.total);
}

TEST(Direct, FieldPartialsMatchDifferences) {
    auto U = UnwindingFamily::make(z_pow(2), Profile::smooth_step(0, 1, 0.1, 1, 1024), 0.1);
    FamilyField F = unwinding_field(U);
    Profile beta = Profile::smooth_step(1, 0.2, 0.1, 0.8, 1024);
    FamilyField G = zero_pull_field(z_pow(1), beta, 0.1);
    const double h = 1e-6;
    for (cplx z : {cplx(0.3, 0.2), cplx(-0.5, 0.4)}) {
        for (double r : {0.3, 0.7}) {
            cplx fz = (U.eval(z + h, r) - U.eval(z - h, r)) / (2 * h);
            cplx fr = (U.eval(z, r + h) - U.eval(z, r - h)) / (2 * h);
            EXPECT_LT(std::abs(F.dz(z, r) - fz), 1e-7);
            EXPECT_LT(std::abs(F.dr(z, r) - fr), 1e-7);
            auto g = [&](cplx q, double s) { return zero_pull_eval(z_pow(1), beta, q, s); };
            EXPECT_LT(std::abs(G.dz(z, r) - (g(z + h, r) - g(z - h, r)) / (2 * h)), 1e-7);
            EXPECT_LT(std::abs(G.dr(z, r) - (g(z, r + h) - g(z, r - h)) / (2 * h)), 1e-7);
        }
    }
}
