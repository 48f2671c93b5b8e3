#pragma once

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "halfharm/blaschke.hpp"
#include "halfharm/quadrature.hpp"
#include "halfharm/vec3.hpp"

namespace halfharm {

// pi^{-(n+1)/2} Gamma((n+1)/2), n in {1, 2}
double gamma_n(int n);

struct SingularPoint {
    cplx z;
    std::optional<int> degree;  // local degree data, required by frac_energy_plane
};

enum class FarField { constant, homogeneous };

// Bounded map R^2 -> R^2 (scalar maps use the real part). Outside the disc
// D(support_center, support_radius) it equals its far field: a constant, or a
// 0-homogeneous map b(y/|y|) about the origin.
struct PlaneMap {
    std::function<cplx(cplx)> eval;
    double bound = 0;
    FarField far_kind = FarField::constant;
    cplx far_constant{0, 0};
    std::function<cplx(cplx)> far_dir;  // b(omega), |omega| = 1
    cplx support_center{0, 0};
    double support_radius = 0;
    std::vector<SingularPoint> singular;
    double feature = 1;                          // smallest length scale of u
    std::function<double(cplx)> feature_at;      // optional local scale
    bool radial = false;  // |u(x)-u(y)| invariant under rotations about support_center
    std::vector<std::pair<cplx, double>> edges;  // circles where u is only finitely smooth

    cplx operator()(cplx x) const { return eval(x); }
    cplx far_value(cplx y) const;
    double local_feature(cplx x) const;

    static PlaneMap constant(cplx c);
    // A (1-s^2)^4 (1 + Re(conj(tilt)(x-c))/R), s = |x-c|/R
    static PlaneMap bump(cplx center, double radius, cplx amplitude, cplx tilt = 0);
    static PlaneMap xstar();  // x/|x|
    static PlaneMap spiral();  // exp(i/|x|)
    static PlaneMap add(const PlaneMap& a, const PlaneMap& b);
};

struct ExtensionSample {
    cplx value;
    Grad3 grad;
};

cplx poisson_extend(const PlaneMap& u, const Vec3& X);
Grad3 poisson_extend_gradient(const PlaneMap& u, const Vec3& X);
ExtensionSample poisson_sample(const PlaneMap& u, const Vec3& X, bool with_grad);

cplx closed_xstar_ext(const Vec3& X);

cplx disc_extend(const CircleSample& g, cplx z);

// (gamma_1/4) double integral over S^1 x S^1 with chordal distance; `deriv_sq` are
// |g'|^2 samples for the diagonal; if empty they come from the spectral derivative.
double circle_energy_numeric(const CircleSample& g, const std::vector<double>& deriv_sq = {});
double circle_energy_numeric(const BlaschkeProduct& B, int n);
// n doubled from 64(d+1) until two levels agree to 1e-11 relative
double circle_energy_numeric(const BlaschkeProduct& B);
// pi sum |k| |g_k|^2 from the DFT
double circle_energy_spectral(const CircleSample& g);

// int_D |w'|^2 = (1/2) int_D |grad w|^2 for the holomorphic product
double disc_dirichlet_energy(const BlaschkeProduct& B);

struct FracEnergyResult {
    double value = 0;
    bool divergent = false;
    double tail_bound = 0;               // bound on the part beyond R_out
    std::vector<double> level_contrib;   // dyadic annuli around a singular point
    bool converged = true;
};

struct FracOptions {
    double R = 1;         // Omega = D_R about the origin
    double R_out = 1e3;   // used for homogeneous far fields
    int n_omega = 64;
    int max_levels = 40;
};

FracEnergyResult frac_energy_plane(const PlaneMap& u, const FracOptions& opt = {});
double half_laplacian_pairing(const PlaneMap& u, const PlaneMap& phi, const FracOptions& opt = {});

// (1/2) int over R^3_+ of |grad u^e|^2 and the bilinear version int grad u^e . grad phi^e,
// for constant far fields
double halfspace_dirichlet_energy(const PlaneMap& u);
double halfspace_dirichlet_pairing(const PlaneMap& u, const PlaneMap& phi);

struct AnalyticField {
    std::function<cplx(const Vec3&)> value;
    std::function<Grad3(const Vec3&)> grad;
    bool homogeneous0 = false;

    static AnalyticField vortex();  // x/(|x|+x3)
    static AnalyticField from_blaschke(const BlaschkeProduct& B);
    static AnalyticField constant(cplx c);
};

// (1/2) int_{B_r^+} |grad v|^2; 0-homogeneous fields use (r/2) int_{S^2_+} |grad v|^2
double dirichlet_energy_halfball(const AnalyticField& v, double r = 1);
// same via a volume rule in (rho, direction) that ignores homogeneity
double dirichlet_energy_halfball_volume(const AnalyticField& v, double r = 1);
// hemisphere_rule(n_r, n_t) version of the surface formula
double dirichlet_energy_halfball_rule(const AnalyticField& v, double r, int n_r, int n_t);

struct L2BoundRow {
    double x3;
    double ext_l2_sq;   // int |u^e(., x3)|^2
    double u_l2_sq;     // ||u||_2^2
    double u_l1;        // ||u||_1
    double c_empirical; // ext_l2_sq x3^2 / ||u||_1^2
    bool l2_bound_ok;
    bool l1_bound_ok;
};

struct L2BoundsReport {
    std::vector<L2BoundRow> rows;
    double c_theory = 0;  // 1/(8 pi), sharp Young constant for n = 2
    bool all_ok = true;
};

L2BoundsReport extension_l2_bounds_check(const PlaneMap& u, const std::vector<double>& heights);

struct MonotoneReport {
    std::vector<double> radii;
    std::vector<double> density;
    double theta = 0;
    bool nondecreasing = true;
};

MonotoneReport monotone_density(const BlaschkeProduct& B, const std::vector<double>& radii);

// slice x2 = const: n1 x n3 points over [x1a, x1b] x [x3a, x3b]
void write_extension_slice_csv(std::ostream& os, const PlaneMap& u, double x2, double x1a, double x1b,
                               int n1, double x3a, double x3b, int n3);

}  // namespace halfharm
