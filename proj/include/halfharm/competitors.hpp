#pragma once

#include <functional>
#include <vector>

#include "halfharm/blaschke.hpp"
#include "halfharm/vec3.hpp"

namespace halfharm {

// C^1 piecewise-cubic Hermite function on a uniform grid of [0, 1]
class Profile {
public:
    Profile() = default;
    Profile(std::vector<double> values, std::vector<double> derivs);

    static Profile from_function(const std::function<double(double)>& f, const std::function<double(double)>& df,
                                 int n = 1024);
    static Profile constant(double c, int n = 1024);
    static Profile linear(double a, double b, int n = 1024);
    // `from` on [0, t0], `to` on [t1, 1], quintic smoothstep in between
    static Profile smooth_step(double from, double to, double t0, double t1, int n = 1024);

    double operator()(double t) const;
    double deriv(double t) const;
    int n() const { return static_cast<int>(y_.size()); }
    double front() const { return y_.front(); }
    double back() const { return y_.back(); }
    const std::vector<double>& values() const { return y_; }
    const std::vector<double>& derivs() const { return m_; }

private:
    std::vector<double> y_, m_;
};

// int_0^s sqrt(F(t^2)) dt
double G_of(double s);
double G_inverse(double g);

// G^{-1}(G(1) t + G(delta)(1 - t)): gamma(0) = delta, gamma(1) = 1
Profile optimal_profile(double delta, int n = 1024);
// 2 int_0^1 F(gamma^2) gamma'^2 dt
double profile_energy(const Profile& gamma);

struct ShellRow {
    double r = 0;
    double tangential = 0;  // (1/2) int_D |grad_z w(., r)|^2
    double radial = 0;      // (r^2/2) int over the hemisphere of |d_r v|^2
    int degree = 0;
};

struct ZeroPullReport {
    int d = 0;
    double delta = 0, eps = 0;
    double tangential = 0;        // quadrature over shells
    double tangential_exact = 0;  // pi (d - eps)
    double radial = 0;
    double radial_bound = 0;      // 2 pi int_eps^1 r^2 F(beta^2) beta'^2 dr
    double total = 0;
    double threshold = 0;         // pi d
    bool bound_holds = false;
    bool below_threshold = false;
    double max_modulus_defect = 0;
    std::vector<ShellRow> shells;
};

// w_hat(z, r) = (z - beta(r)) / (1 - beta(r) z) * w_tilde(z)
cplx zero_pull_eval(const BlaschkeProduct& w_tilde, const Profile& beta, cplx z, double r);
ZeroPullReport zero_pull_family_energy(const BlaschkeProduct& w_tilde, const Profile& beta, double eps,
                                       int n_shells = 48);

struct UnwindingFamily {
    BlaschkeProduct w;
    Profile theta;
    double eps = 0.1;
    std::vector<double> poles;   // angles of w^{-1}(1) on the circle
    std::vector<double> minus;   // angles of w^{-1}(-1)

    static UnwindingFamily make(const BlaschkeProduct& w, const Profile& theta, double eps);
    // C(f(z) / theta(r)) written as (w + c) / (1 + c w), c = (1 - theta) / (1 + theta)
    cplx eval(cplx z, double r) const;
};

// H_f(a) = int_D K_a(w(z)) / (1 + |z|^2)^2 dz
double H_f(const BlaschkeProduct& w, double a);
// same integrand written through f = C^{-1}(w) with poles on the circle
double H_f_printed(const UnwindingFamily& U, double a);
// rotation average: int_D J(a, |w(z)|) / (1 + |z|^2)^2 dz
double H_tilde(const BlaschkeProduct& w, double a);
// angles phi in [0, 2 pi) with w(e^{i phi}) = target, |target| = 1
std::vector<double> level_angles(const BlaschkeProduct& w, cplx target);

struct UnwindingReport {
    int d = 0;
    double eps = 0;
    double tangential = 0;        // int_eps^1 of the shell energies
    double radial = 0;            // from |d_r w_hat|^2
    double radial_printed = 0;    // 8 int r^2 theta'^2 H_f(theta) dr through f
    double radial_via_H = 0;      // 8 eps int H_f(alpha) alpha'^2 dt, theta(r) = alpha(eps/r)
    double total = 0;
    double threshold = 0;         // pi d
    double pi_d_over_8 = 0;
    double int_H_alpha = 0;       // int_eps^1 H_f(alpha) alpha'^2 dt
    bool below_threshold = false;
    bool admissible = false;      // theta = 0 on [0, eps]
    double max_modulus_defect = 0;
    std::vector<ShellRow> shells;
};

UnwindingReport unwinding_family_energy(const UnwindingFamily& U, int n_shells = 48);

// analytic partials of a family w_hat(z, r), holomorphic in z
struct FamilyField {
    std::function<cplx(cplx, double)> dz;
    std::function<cplx(cplx, double)> dr;
    std::vector<double> angles;             // boundary points where shells concentrate
    std::function<double(double)> width;    // concentration scale at radius r (0: none)
    std::vector<double> breaks;             // radii where the profile switches on
};

FamilyField zero_pull_field(const BlaschkeProduct& w_tilde, const Profile& beta, double eps);
FamilyField unwinding_field(const UnwindingFamily& U);

// (1/2) int_{B_1^+} |grad v|^2 for v(x) = w_hat(S^{-1}(x/|x|), |x|) from the Cartesian gradient,
// GL panels in |x| and an adaptive rule on each hemisphere
double direct_energy(const FamilyField& F, int n_r = 48);

}  // namespace halfharm
