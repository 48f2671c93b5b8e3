#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "halfharm/errors.hpp"
#include "halfharm/jacobian.hpp"
#include "halfharm/quadrature.hpp"

using namespace halfharm;

namespace {

AtomMeasure measure(std::initializer_list<Atom> a) {
    AtomMeasure m;
    m.atoms = a;
    return m;
}

AtomMeasure rotated(const AtomMeasure& m, double eps) {
    AtomMeasure r = m;
    for (Atom& a : r.atoms) a.a *= std::polar(1.0, eps);
    return r;
}

}  // namespace

TEST(Wedge, ConstantAndLinear) {
    Grad3 zero{};
    Vec3 H = wedge(zero);
    EXPECT_EQ(H.x, 0);
    EXPECT_EQ(H.y, 0);
    EXPECT_EQ(H.z, 0);
    Grad3 lin{cplx(1, 0), cplx(0, 1), cplx(0, 0)};
    H = wedge(lin);
    EXPECT_EQ(H.x, 0);
    EXPECT_EQ(H.y, 0);
    EXPECT_EQ(H.z, 2);

    auto g = build_grid(0.2);
    for (const CellWedge& c : wedge_field(HalfBallField::from_function(g, [](const Vec3& x) { return cplx(x.x, x.y); }))) {
        EXPECT_NEAR(c.H.z, 2, 1e-12);
        EXPECT_NEAR(c.H.x, 0, 1e-12);
    }
}

TEST(Wedge, PointwiseBoundRandom) {
    auto g = build_grid(0.2);
    std::mt19937 rng(7);
    std::normal_distribution<double> n(0, 1);
    for (int rep = 0; rep < 5; ++rep) {
        HalfBallField f = HalfBallField::from_function(g, [&](const Vec3&) { return cplx(n(rng), n(rng)); });
        for (const CellWedge& c : wedge_field(f)) EXPECT_LE(norm(c.H), c.grad_sq * (1 + 1e-12));
    }
}

TEST(Lipschitz, DeclaredConstants) {
    for (const LipschitzTest& t : lipschitz_dictionary(0.5)) EXPECT_LE(t.sampled_lip(500), t.lip * (1 + 1e-6));
    EXPECT_EQ(LipschitzTest::constant(2).sampled_lip(), 0);
}

TEST(PairingDiscrete, DependsOnlyOnBoundary) {
    auto g = build_grid(0.1);
    HalfBallField a = HalfBallField::from_function(g, closed_xstar_ext);
    HalfBallField b = a;
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(0, 2 * kPi);
    for (std::size_t i = 0; i < g->size(); ++i)
        if (g->kind[i] == NodeKind::interior) b.v[i] = std::polar(1.0, u(rng));
    for (const LipschitzTest& t : {LipschitzTest::coordinate(2), LipschitzTest::distance({0.2, 0.1, 0})}) {
        double pa = pairing_volume(a, t), pb = pairing_volume(b, t);
        EXPECT_NEAR(pa, pb, 1e-12 * std::abs(pa));
    }
    EXPECT_NEAR(pairing_volume(b, LipschitzTest::constant(1)), 0, 1e-14);
}

TEST(Pairing, VortexVolumeEqualsSurface) {
    AtomMeasure one = measure({{cplx(0, 0), 1}});
    AnalyticField vx = AnalyticField::vortex();
    BoundaryField g = BoundaryField::from_field(vx, one);
    EXPECT_NEAR(pairing_surface(g, LipschitzTest::constant(1)), 0, 1e-9);
    EXPECT_NEAR(surface_term(g, LipschitzTest::constant(1)), kPi, 1e-8);
    for (const LipschitzTest& t : {LipschitzTest::coordinate(2), LipschitzTest::coordinate(0),
                                   LipschitzTest::distance({0, 0, 0}), LipschitzTest::distance({0.3, -0.2, 0}),
                                   LipschitzTest::distance({0.1, 0.2, 0.5})}) {
        double pv = pairing_volume(vx, t, one), ps = pairing_surface(g, t);
        EXPECT_NEAR(pv, ps, 1e-6) << t.name;
    }
    // |x| restricted to the boundary: 1 on the sphere, the flat part pairs to 2 pi
    EXPECT_NEAR(pairing_surface(g, LipschitzTest::distance({0, 0, 0})), 2 * kPi, 1e-7);
}

TEST(Pairing, ProductFieldsVolumeEqualsSurface) {
    std::vector<AtomMeasure> fields = {
        measure({{cplx(0.3, 0.1), 1}}),
        measure({{cplx(-0.2, 0.4), -1}}),
        measure({{cplx(0.1, -0.3), 2}}),
        measure({{cplx(0.4, 0.2), -2}}),
        measure({{cplx(0.3, 0.1), 1}, {cplx(-0.4, 0.2), -1}}),
        measure({{cplx(0.2, 0.2), 2}, {cplx(-0.3, -0.1), -1}}),
        measure({{cplx(0, 0), 1}, {cplx(0.5, 0), 1}}),
        measure({{cplx(-0.1, 0.5), -2}, {cplx(0.2, -0.3), 1}}),
        measure({{cplx(0.3, 0.1), 1}, {cplx(-0.4, 0.2), -1}, {cplx(0.1, -0.5), 2}}),
        measure({{cplx(0.6, 0), 1}, {cplx(-0.3, 0.3), 1}, {cplx(0, -0.4), -1}}),
    };
    LipschitzTest phi = LipschitzTest::coordinate(0);
    for (const AtomMeasure& m : fields) {
        BoundaryField g = BoundaryField::from_field(vortex_product(m), m);
        EXPECT_NO_THROW(g.check_atoms());
        double ps = pairing_surface(g, phi);
        double pv = pairing_volume(vortex_product(m), phi, m);
        EXPECT_NEAR(pv, ps, 1e-5) << "total degree " << m.total();
        EXPECT_NEAR(pairing_surface(g, LipschitzTest::constant(1)), 0, 1e-7);
    }
}

TEST(Pairing, BlaschkeDegreeTwoConstantTest) {
    BoundaryField g = BoundaryField::from_blaschke(BlaschkeProduct(0, {cplx(0, 0), cplx(0, 0)}));
    EXPECT_EQ(g.atoms.total(), 2);
    EXPECT_NEAR(pairing_surface(g, LipschitzTest::constant(1)), 0, 1e-7);
}

TEST(Atoms, MismatchThrows) {
    AtomMeasure m = measure({{cplx(0.2, 0), 1}});
    BoundaryField g = BoundaryField::from_field(vortex_product(m), m);
    g.atoms.atoms[0].d = 2;
    EXPECT_THROW(g.check_atoms(), PreconditionViolation);
}

TEST(Continuity, EqualTracesAndRotation) {
    AtomMeasure m = measure({{cplx(0.3, 0.1), 1}, {cplx(-0.2, -0.3), 1}});
    BoundaryField g1 = BoundaryField::from_field(vortex_product(m), m);
    LipschitzTest phi = LipschitzTest::coordinate(0);
    ContinuityReport same = continuity_gap(g1, g1, phi);
    EXPECT_EQ(same.gap, 0);

    std::vector<double> eps = {0.1, 0.05, 0.025}, gap;
    for (double e : eps) {
        AtomMeasure mr = rotated(m, e);
        BoundaryField g2 = BoundaryField::from_field(vortex_product(mr), mr);
        ContinuityReport r = continuity_gap(g1, g2, phi);
        EXPECT_TRUE(std::isfinite(r.ratio));
        EXPECT_GT(r.bound, 0);
        gap.push_back(r.gap);
    }
    for (int i = 0; i < 2; ++i) {
        double slope = std::log(gap[i] / gap[i + 1]) / std::log(eps[i] / eps[i + 1]);
        EXPECT_NEAR(slope, 1, 0.1);
    }
}

TEST(Bcl, PiForUnitDegree) {
    for (const AtomMeasure& m : {measure({{cplx(0, 0), 1}}), measure({{cplx(0.3, 0.2), 2}, {cplx(-0.5, 0), -1}}),
                                 measure({{cplx(0.7, 0), 1}, {cplx(0, 0.4), 1}, {cplx(-0.2, -0.2), -1}})}) {
        BclReport r = bcl_lower_bound_report(m);
        EXPECT_NEAR(r.value, kPi, 1e-6);
        EXPECT_LE(std::abs(r.argmin), r.grid_spacing);
    }
    EXPECT_THROW(bcl_lower_bound(measure({{cplx(0, 0), 2}})), PreconditionViolation);
}

TEST(Bcl, OriginMinimisesPotential) {
    double v0 = bcl_potential(0);
    EXPECT_NEAR(v0, kPi, 1e-10);
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-1, 1);
    int n = 0;
    while (n < 20) {
        cplx c(u(rng), u(rng));
        if (std::abs(c) > 1 || std::abs(c) < 1e-3) continue;
        EXPECT_GT(bcl_potential(c), v0);
        ++n;
    }
}

TEST(LowerBound, InterpolatedVortex) {
    auto g = build_grid(0.05);
    LowerBoundReport r = energy_lower_bound_check(HalfBallField::from_function(g, closed_xstar_ext));
    EXPECT_TRUE(r.bound_holds);
    EXPECT_TRUE(r.near_pi);
    EXPECT_NEAR(r.energy_weighted, kPi, 0.05 * kPi);
    EXPECT_EQ(r.sup_test_name, "|x-(0,0,0)|");
}

TEST(LowerBound, MovedAtomAndScramble) {
    auto g = build_grid(0.1);
    // Psi fixes the sphere and moves the zero of the vortex to t e1 with t = (sqrt(1 + 4 s^2) - 1) / (2 s)
    const double s = 0.4;
    const double t = (std::sqrt(1 + 4 * s * s) - 1) / (2 * s);
    auto psi = [s](const Vec3& X) { return X - Vec3(s, 0, 0) * (1 - dot(X, X)); };
    HalfBallField v = HalfBallField::from_function(g, [&](const Vec3& X) { return closed_xstar_ext(psi(X)); });
    std::vector<LipschitzTest> extra = {LipschitzTest::distance({t, 0, 0})};
    LowerBoundReport r = energy_lower_bound_check(v, 0.1, extra);
    EXPECT_TRUE(r.bound_holds);
    EXPECT_TRUE(r.near_pi);

    HalfBallField w = v;
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(0, 2 * kPi);
    for (std::size_t i = 0; i < g->size(); ++i)
        if (g->kind[i] == NodeKind::interior) w.v[i] = std::polar(1.0, u(rng));
    LowerBoundReport q = energy_lower_bound_check(w, 0.1, extra);
    EXPECT_GT(q.energy_p1, r.energy_p1);
    EXPECT_NEAR(q.sup_bound, r.sup_bound, 1e-12 * std::abs(r.sup_bound));
    EXPECT_TRUE(q.bound_holds);
}

TEST(LowerBound, RelaxedDegreeOne) {
    auto g = build_grid(0.1);
    HalfBallField F = set_boundary_data(g, BlaschkeProduct(0, {cplx(0, 0)}));
    relax(F, 4000, 1e-10);
    LowerBoundReport r = energy_lower_bound_check(F, 0.1);
    EXPECT_TRUE(r.bound_holds) << r.energy_p1 << " vs " << r.sup_bound;
    EXPECT_TRUE(r.near_pi);
}
