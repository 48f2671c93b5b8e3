#pragma once

#include <functional>
#include <string>
#include <vector>

#include "halfharm/half_ball.hpp"
#include "halfharm/nonlocal_energy.hpp"
#include "halfharm/vec3.hpp"

namespace halfharm {

// H(v) = 2 grad v^1 x grad v^2
Vec3 wedge(const Grad3& g);

struct CellWedge {
    Vec3 H;          // average over the six Kuhn simplices of the cell
    double grad_sq;  // average of |grad v|^2 over the same simplices
};

// P1 interpolation on the Kuhn subdivision of every cell (weights ignored)
std::vector<CellWedge> wedge_field(const HalfBallField& v);

struct LipschitzTest {
    std::string name;
    std::function<double(const Vec3&)> f;
    std::function<Vec3(const Vec3&)> grad;  // a.e. gradient
    double lip = 1;
    std::vector<Vec3> kinks;  // points where grad is discontinuous

    double operator()(const Vec3& x) const { return f(x); }

    static LipschitzTest constant(double c);
    static LipschitzTest coordinate(int j);
    static LipschitzTest distance(const Vec3& c);
    // random pairs in the closed half ball; largest |f(x) - f(y)| / |x - y|
    double sampled_lip(int pairs = 2000, unsigned seed = 1) const;
};

// traces on the two parts of the boundary of B_1^+
struct BoundaryField {
    std::function<cplx(const Vec3&)> hemi;  // on |x| = 1, x3 >= 0
    std::function<cplx(cplx)> flat;         // on the flat disc
    std::function<Grad3(const Vec3&)> grad; // optional: gradient of an extension, for the tangential part
    AtomMeasure atoms;

    cplx chart(cplx z) const;  // hemi o S
    static BoundaryField from_field(const AnalyticField& u, const AtomMeasure& atoms);
    static BoundaryField from_blaschke(const BlaschkeProduct& B);
    // on the flat disc: winding of small circles around each atom equals its degree
    void check_atoms() const;
};

// prod_i V_{a_i}^{d_i}, V_a(X) = (x - a) / (|X - (a, 0)| + x3); negative degrees use the conjugate
AnalyticField vortex_product(const AtomMeasure& atoms);

// discrete pairing: P1 fields and test on the Kuhn simplices; depends only on the boundary nodes
double pairing_volume(const HalfBallField& v, const LipschitzTest& phi);
// quadrature over B_1^+ for a field with point singularities at the atoms
double pairing_volume(const AnalyticField& v, const LipschitzTest& phi, const AtomMeasure& singular = {},
                      double tol = 1e-7);
// 2 int det(grad_tau g) phi - 2 pi sum d_i phi(a_i)
double pairing_surface(const BoundaryField& g, const LipschitzTest& phi);
// int_{d+ B_1} det(grad_tau g) phi only
double surface_term(const BoundaryField& g, const LipschitzTest& phi);

// (1/2) int |grad v|^2 of the P1 interpolant over all cells, unweighted
double p1_energy(const HalfBallField& v);

struct ContinuityReport {
    double gap = 0;
    double seminorm1 = 0, seminorm2 = 0, seminorm_diff = 0;
    double lip = 1;
    double bound = 0;  // ([g1] + [g2]) [g1 - g2] [phi]_lip, constant left out
    double ratio = 0;  // gap / bound
};

// [g] is the square root of twice the discrete harmonic-extension energy on a grid of spacing h
double boundary_seminorm(const BoundaryField& g, double h = 0.1);
ContinuityReport continuity_gap(const BoundaryField& g1, const BoundaryField& g2, const LipschitzTest& phi,
                                double h = 0.1);

// V(c) = int_{d+ B_1} |x - c| / (1 + x3)^2
double bcl_potential(cplx c);

struct BclReport {
    double value = 0;
    cplx argmin{0, 0};
    double grid_spacing = 0.1;
};

BclReport bcl_lower_bound_report(const AtomMeasure& nu, double grid_spacing = 0.1);
double bcl_lower_bound(const AtomMeasure& nu);

struct LowerBoundReport {
    double energy_p1 = 0;        // the energy the bound controls
    double energy_weighted = 0;  // discrete_energy, cut-cell weights
    double sup_bound = 0;         // sup over the dictionary of (1/2) <T, phi_h> / lip(phi)
    double sup_bound_strict = 0;  // same with lip(phi_h) over the simplices
    std::string sup_test_name;
    bool bound_holds = false;
    bool near_pi = false;
    std::vector<std::pair<std::string, double>> entries;
};

std::vector<LipschitzTest> lipschitz_dictionary(double spacing = 0.25);
LowerBoundReport energy_lower_bound_check(const HalfBallField& v, double pi_tol = 0.05,
                                          const std::vector<LipschitzTest>& extra = {});

}  // namespace halfharm
