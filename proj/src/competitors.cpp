#include "halfharm/competitors.hpp"

#include <algorithm>
#include <cmath>

#include "halfharm/certificates.hpp"
#include "halfharm/conformal.hpp"
#include "halfharm/errors.hpp"
#include "halfharm/nonlocal_energy.hpp"
#include "halfharm/parallel.hpp"
#include "halfharm/quadrature.hpp"

namespace halfharm {

// ---------------------------------------------------------------------------
// Profile

Profile::Profile(std::vector<double> values, std::vector<double> derivs) : y_(std::move(values)), m_(std::move(derivs)) {
    if (y_.size() < 2 || y_.size() != m_.size()) throw InvalidArgument("Profile: need >= 2 nodes with derivatives");
}

Profile Profile::from_function(const std::function<double(double)>& f, const std::function<double(double)>& df, int n) {
    if (n < 2) throw InvalidArgument("Profile: need n >= 2");
    std::vector<double> y(n), m(n);
    for (int i = 0; i < n; ++i) {
        double t = static_cast<double>(i) / (n - 1);
        y[i] = f(t);
        m[i] = df(t);
    }
    return Profile(std::move(y), std::move(m));
}

Profile Profile::constant(double c, int n) {
    return from_function([c](double) { return c; }, [](double) { return 0.0; }, n);
}

Profile Profile::linear(double a, double b, int n) {
    return from_function([a, b](double t) { return a + (b - a) * t; }, [a, b](double) { return b - a; }, n);
}

Profile Profile::smooth_step(double from, double to, double t0, double t1, int n) {
    if (!(0 <= t0 && t0 < t1 && t1 <= 1)) throw InvalidArgument("Profile::smooth_step: need 0 <= t0 < t1 <= 1");
    double L = t1 - t0;
    auto f = [=](double t) {
        double s = std::clamp((t - t0) / L, 0.0, 1.0);
        return from + (to - from) * s * s * s * (10 - 15 * s + 6 * s * s);
    };
    auto df = [=](double t) {
        double s = (t - t0) / L;
        if (s <= 0 || s >= 1) return 0.0;
        return (to - from) * 30 * s * s * (1 - s) * (1 - s) / L;
    };
    return from_function(f, df, n);
}

double Profile::operator()(double t) const {
    int n = this->n();
    double x = std::clamp(t, 0.0, 1.0) * (n - 1);
    int i = std::min(static_cast<int>(x), n - 2);
    double s = x - i, h = 1.0 / (n - 1);
    double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * y_[i] + (s3 - 2 * s2 + s) * h * m_[i] + (-2 * s3 + 3 * s2) * y_[i + 1] +
           (s3 - s2) * h * m_[i + 1];
}

double Profile::deriv(double t) const {
    int n = this->n();
    double x = std::clamp(t, 0.0, 1.0) * (n - 1);
    int i = std::min(static_cast<int>(x), n - 2);
    double s = x - i, h = 1.0 / (n - 1);
    double s2 = s * s;
    return ((6 * s2 - 6 * s) * y_[i] + (6 * s - 6 * s2) * y_[i + 1]) / h + (3 * s2 - 4 * s + 1) * m_[i] +
           (3 * s2 - 2 * s) * m_[i + 1];
}

// ---------------------------------------------------------------------------
// G and the optimal profile

namespace {

constexpr int kGCells = 4096;

double sqrtF(double t) { return std::sqrt(F_closed(t * t)); }

double gl16(double a, double b) {
    std::vector<double> x, w;
    gauss_legendre_on(16, a, b, x, w);
    double s = 0;
    for (int i = 0; i < 16; ++i) s += w[i] * sqrtF(x[i]);
    return s;
}

const std::vector<double>& G_table() {
    static const std::vector<double> tab = [] {
        std::vector<double> g(kGCells + 1, 0);
        long double acc = 0;
        for (int k = 0; k < kGCells; ++k) {
            double a = static_cast<double>(k) / kGCells, b = static_cast<double>(k + 1) / kGCells;
            acc += k + 1 < kGCells ? gl16(a, b) : graded_integrate(sqrtF, a, 1, 30, 16);
            g[k + 1] = static_cast<double>(acc);
        }
        return g;
    }();
    return tab;
}

}  // namespace

double G_of(double s) {
    if (!(s >= 0 && s <= 1)) throw InvalidArgument("G_of: s must lie in [0, 1]");
    const std::vector<double>& g = G_table();
    if (s == 1) return g.back();
    int k = std::min(static_cast<int>(s * kGCells), kGCells - 1);
    double a = static_cast<double>(k) / kGCells;
    if (k + 1 < kGCells) return g[k] + gl16(a, s);
    return g.back() - graded_integrate(sqrtF, s, 1, 30, 16);
}

double G_inverse(double v) {
    if (v <= 0) return 0;
    if (v >= G_of(1)) return 1;
    return invert_monotone(G_of, 0, 1, v, {1e-16, 1e-15, 200});
}

Profile optimal_profile(double delta, int n) {
    if (!(delta >= 0 && delta <= 1)) throw InvalidArgument("optimal_profile: delta must lie in [0, 1]");
    if (delta == 1) return Profile::constant(1, n);
    double g1 = G_of(1), gd = G_of(delta), c = g1 - gd;
    std::vector<double> y(n), m(n);
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
        double t = static_cast<double>(i) / (n - 1);
        double g = i + 1 == static_cast<std::size_t>(n) ? 1.0 : G_inverse(g1 * t + gd * (1 - t));
        if (i == 0) g = delta;
        y[i] = g;
        m[i] = g < 1 ? c / sqrtF(g) : 0.0;
    });
    // the slope decays only like 1/sqrt(log) at t = 1; the secant of the last cell is closer than 0
    m[n - 1] = (1 - y[n - 2]) * (n - 1);
    return Profile(std::move(y), std::move(m));
}

double profile_energy(const Profile& gamma) {
    int n = gamma.n();
    std::vector<double> x, w;
    gauss_legendre_on(8, 0, 1, x, w);
    double h = 1.0 / (n - 1);
    const auto& y = gamma.values();
    const auto& m = gamma.derivs();
    for (int i = 1; i + 1 < n; ++i)
        if (y[i] >= 1 && (m[i] != 0 || y[i - 1] != y[i] || y[i + 1] != y[i]))
            throw DomainViolation("profile_energy: profile reaches 1 at an interior node");
    long double s = 0;
    auto integrand = [&](double t) {
        double d = gamma.deriv(t);
        if (d == 0) return 0.0;
        double g = gamma(t);
        if (g > 1 + 1e-12 || g < 0) throw DomainViolation("profile_energy: profile leaves [0, 1] where it moves");
        g = std::min(g, std::nextafter(1.0, 0.0));
        return F_closed(g * g) * d * d;
    };
    for (int i = 0; i + 1 < n; ++i) {
        double a = i * h;
        if (i + 2 < n) {
            for (int k = 0; k < 8; ++k) s += h * w[k] * integrand(a + h * x[k]);
        } else {
            // a profile reaching 1 at t = 1 makes F blow up there
            s += graded_integrate(integrand, a, 1, 30, 8);
        }
    }
    return 2 * static_cast<double>(s);
}

// ---------------------------------------------------------------------------
// families

namespace {

std::vector<double> shell_nodes(double a, double b, int n, std::vector<double>& wts) {
    int panels = std::max(1, n / 8);
    std::vector<double> r, x, w;
    wts.clear();
    for (int p = 0; p < panels; ++p) {
        gauss_legendre_on(8, a + (b - a) * p / panels, a + (b - a) * (p + 1) / panels, x, w);
        r.insert(r.end(), x.begin(), x.end());
        wts.insert(wts.end(), w.begin(), w.end());
    }
    return r;
}

// breaks graded toward the boundary points e^{i phi}, phi in `angles`, at scale `width`
void graded_breaks(const std::vector<double>& angles, double width, std::vector<double>& ang, std::vector<double>& rad) {
    for (double a : angles) ang.push_back(a);
    for (double d = width; d < 0.5; d *= 4) {
        rad.push_back(1 - d);
        for (double a : angles) {
            ang.push_back(a - d);
            ang.push_back(a + d);
        }
    }
}

double disc_integral(const std::function<double(cplx)>& f, const std::vector<double>& breaks, const char* what,
                     double width = 0) {
    std::vector<double> ang, rad;
    if (width > 0)
        graded_breaks(breaks, width, ang, rad);
    else
        ang = breaks;
    // near a boundary concentration of width w the integrand carries relative noise ~ 1e-16 / w
    double rel = width > 0 ? std::max(1e-9, 1e-14 / width) : 1e-9;
    IntegrationResult r = adaptive_disc(f, {1e-11, rel, 50}, ang, rad);
    if (!r.converged) throw NumericalFailure(std::string(what) + ": disc quadrature did not converge (width " + std::to_string(width) + ")");
    return r.value;
}

// int_D |B'|^2, graded toward zeros close to the circle
double shell_tangential(const BlaschkeProduct& B) {
    std::vector<double> ang;
    for (cplx a : B.zeros())
        if (std::abs(a) > 0.5) ang.push_back(std::arg(a));
    double width = B.delta() > 0.5 ? 1 - B.delta() : 0.0;
    return disc_integral([&](cplx z) { return derivative_sq(B, z); }, ang, "shell tangential", width);
}

double max_defect(const std::function<cplx(cplx)>& g) {
    double m = 0;
    for (int k = 0; k < 256; ++k) m = std::max(m, std::abs(std::abs(g(std::polar(1.0, 2 * kPi * k / 256))) - 1));
    return m;
}

}  // namespace

cplx zero_pull_eval(const BlaschkeProduct& w_tilde, const Profile& beta, cplx z, double r) {
    double b = beta(r);
    if (b >= 1) return -eval(w_tilde, z);
    return (z - b) / (1.0 - b * z) * eval(w_tilde, z);
}

ZeroPullReport zero_pull_family_energy(const BlaschkeProduct& w_tilde, const Profile& beta, double eps, int n_shells) {
    if (!(eps > 0 && eps < 1)) throw InvalidArgument("zero_pull_family_energy: eps must lie in (0, 1)");
    if (w_tilde.conjugated()) throw InvalidArgument("zero_pull_family_energy: w_tilde must be holomorphic");
    for (int i = 0; i < beta.n(); ++i) {
        double r = static_cast<double>(i) / (beta.n() - 1), b = beta.values()[i];
        if (b < 0 || b > 1 + 1e-12) throw PreconditionViolation("zero_pull_family_energy: beta leaves [0, 1]");
        if (r <= eps && std::abs(b - 1) > 1e-12) throw PreconditionViolation("zero_pull_family_energy: beta != 1 on [0, eps]");
        if (r > eps && b >= 1) throw PreconditionViolation("zero_pull_family_energy: beta reaches 1 beyond eps");
    }
    ZeroPullReport rep;
    rep.d = w_tilde.factors() + 1;
    rep.delta = beta(1);
    rep.eps = eps;
    rep.threshold = kPi * rep.d;
    rep.tangential_exact = kPi * (rep.d - eps);

    auto shell_product = [&](double r) {
        double b = beta(r);
        if (r <= eps || b >= 1) return BlaschkeProduct(w_tilde.theta() + kPi, w_tilde.zeros());
        std::vector<cplx> zs = w_tilde.zeros();
        zs.push_back(b);
        return BlaschkeProduct(w_tilde.theta(), zs);
    };

    std::vector<double> wi, wo;
    std::vector<double> ri = shell_nodes(0, eps, 8, wi), ro = shell_nodes(eps, 1, n_shells, wo);
    // inside: w_hat = -w_tilde on every shell
    double t_in = w_tilde.factors() > 0 ? shell_tangential(shell_product(ri[0])) : 0.0;
    for (double w : wi) rep.tangential += w * t_in;

    std::vector<ShellRow> rows = parallel_map<ShellRow>(ro.size(), [&](std::size_t i) {
        double r = ro[i], b = beta(r), db = beta.deriv(r);
        ShellRow s;
        s.r = r;
        BlaschkeProduct B = shell_product(r);
        s.tangential = shell_tangential(B);
        s.degree = degree_of(B);
        if (db != 0) {
            auto f = [&](cplx z) {
                double r2 = std::norm(z), q = std::norm(1.0 - b * z);
                return std::norm(eval(w_tilde, z)) * std::norm(z * z - 1.0) / (q * q * (1 + r2) * (1 + r2));
            };
            s.radial = 2 * r * r * db * db * disc_integral(f, {0.0}, "zero_pull radial", 1 - b);
        }
        return s;
    });
    for (std::size_t i = 0; i < ro.size(); ++i) {
        double r = ro[i], b = beta(r), db = beta.deriv(r);
        rep.tangential += wo[i] * rows[i].tangential;
        rep.radial += wo[i] * rows[i].radial;
        if (db != 0) rep.radial_bound += wo[i] * 2 * kPi * r * r * F_closed(b * b) * db * db;
    }
    // shell degrees at the sampled radii, read off the boundary trace
    for (double r : {0.5 * eps, eps, 0.5 * (1 + eps), 1.0}) {
        ShellRow s;
        s.r = r;
        s.degree = winding_number_adaptive(
            [&](double phi) { return zero_pull_eval(w_tilde, beta, std::polar(1.0, phi), r); }, 64 * rep.d);
        rows.insert(std::upper_bound(rows.begin(), rows.end(), r, [](double v, const ShellRow& x) { return v < x.r; }),
                    s);
        rep.max_modulus_defect =
            std::max(rep.max_modulus_defect, max_defect([&](cplx z) { return zero_pull_eval(w_tilde, beta, z, r); }));
    }
    rep.shells = std::move(rows);
    rep.total = rep.tangential + rep.radial;
    rep.bound_holds = rep.radial <= rep.radial_bound * (1 + 1e-9);
    rep.below_threshold = rep.total < rep.threshold;
    return rep;
}

// ---------------------------------------------------------------------------
// unwinding

std::vector<double> level_angles(const BlaschkeProduct& w, cplx target) {
    int d = w.factors();
    if (d == 0) return {};
    int n = 512 * d;
    auto h = [&](double phi) { return std::arg(eval(w, std::polar(1.0, phi)) / target); };
    std::vector<double> out;
    double prev = h(0);
    for (int k = 1; k <= n; ++k) {
        double a = 2 * kPi * (k - 1) / n, b = 2 * kPi * k / n;
        double cur = h(b);
        if (prev == 0) {
            out.push_back(a);
        } else if (((prev < 0 && cur > 0) || (prev > 0 && cur < 0)) && std::abs(prev - cur) < kPi) {
            double lo = a, hi = b, flo = prev;
            for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
                double mid = 0.5 * (lo + hi), fm = h(mid);
                if ((fm < 0) == (flo < 0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            out.push_back(0.5 * (lo + hi));
        }
        prev = cur;
    }
    return out;
}

UnwindingFamily UnwindingFamily::make(const BlaschkeProduct& w, const Profile& theta, double eps) {
    if (w.conjugated()) throw InvalidArgument("UnwindingFamily: w must be holomorphic");
    if (w.factors() < 1) throw InvalidArgument("UnwindingFamily: w needs at least one factor");
    if (!(eps > 0 && eps < 1)) throw InvalidArgument("UnwindingFamily: eps must lie in (0, 1)");
    for (double v : theta.values())
        if (v < 0 || v > 1 + 1e-12) throw PreconditionViolation("UnwindingFamily: theta leaves [0, 1]");
    if (std::abs(theta.back() - 1) > 1e-12) throw PreconditionViolation("UnwindingFamily: theta(1) != 1");
    UnwindingFamily U;
    U.w = w;
    U.theta = theta;
    U.eps = eps;
    U.poles = level_angles(w, 1.0);
    U.minus = level_angles(w, -1.0);
    if (static_cast<int>(U.poles.size()) != w.factors() || static_cast<int>(U.minus.size()) != w.factors())
        throw NumericalFailure("UnwindingFamily: could not locate the level sets of w on the circle");
    for (double p : U.poles)
        if (std::abs(halfharm::eval(w, std::polar(1.0, p)) - 1.0) > 1e-8) throw NumericalFailure("UnwindingFamily: pole check failed");
    return U;
}

cplx UnwindingFamily::eval(cplx z, double r) const {
    double th = theta(r);
    if (r <= eps || th <= 0) return 1;
    double c = (1 - th) / (1 + th);
    cplx wz = halfharm::eval(w, z);
    return (wz + c) / (1.0 + c * wz);
}

namespace {

// K_a(w) with numerator and denominator multiplied by |1 - w|^4
double K_stable(double a, cplx w) {
    double m1 = std::norm(1.0 - w), p1 = std::norm(1.0 + w);
    double den = a * a * m1 + 2 * a * (1 - std::norm(w)) + p1;
    return p1 * m1 / (den * den);
}

}  // namespace

double H_f(const BlaschkeProduct& w, double a) {
    if (!(a > 0 && a <= 1)) throw InvalidArgument("H_f: a must lie in (0, 1]");
    std::vector<double> br = level_angles(w, -1.0);
    auto f = [&](cplx z) {
        double s = 1 + std::norm(z);
        return K_stable(a, eval(w, z)) / (s * s);
    };
    return disc_integral(f, br, "H_f", a / (2 * w.factors()));
}

double H_f_printed(const UnwindingFamily& U, double a) {
    if (!(a > 0 && a <= 1)) throw InvalidArgument("H_f: a must lie in (0, 1]");
    std::vector<double> br = U.poles;
    br.insert(br.end(), U.minus.begin(), U.minus.end());
    auto g = [&](cplx z) {
        cplx wz = eval(U.w, z);
        if (wz == cplx(1, 0)) return 0.0;
        PlanePoint fp = cayley_inv(wz);
        if (fp.infinite) return 0.0;
        cplx f = fp.z;
        double m2 = std::norm(f);
        double den = a * a + 2 * a * f.imag() + m2;
        double s = 1 + std::norm(z);
        return m2 / (den * den * s * s);
    };
    return disc_integral(g, br, "H_f", a / (2 * U.w.factors()));
}

double H_tilde(const BlaschkeProduct& w, double a) {
    if (!(a > 0 && a <= 1)) throw InvalidArgument("H_tilde: a must lie in (0, 1]");
    auto f = [&](cplx z) {
        double s = 1 + std::norm(z);
        return J_closed(a, std::min(1.0, std::abs(eval(w, z)))) / (s * s);
    };
    return disc_integral(f, {}, "H_tilde");
}

UnwindingReport unwinding_family_energy(const UnwindingFamily& U, int n_shells) {
    UnwindingReport rep;
    rep.d = U.w.factors();
    rep.eps = U.eps;
    rep.threshold = kPi * rep.d;
    rep.pi_d_over_8 = kPi * rep.d / 8;
    rep.admissible = true;
    for (int i = 0; i < U.theta.n(); ++i) {
        double r = static_cast<double>(i) / (U.theta.n() - 1);
        if (r <= U.eps && U.theta.values()[i] != 0) rep.admissible = false;
    }
    std::vector<double> br = U.minus;
    br.insert(br.end(), U.poles.begin(), U.poles.end());

    std::vector<double> wo;
    std::vector<double> ro = shell_nodes(U.eps, 1, n_shells, wo);
    std::vector<ShellRow> rows = parallel_map<ShellRow>(ro.size(), [&](std::size_t i) {
        double r = ro[i], th = U.theta(r), dth = U.theta.deriv(r);
        ShellRow s;
        s.r = r;
        if (th <= 0) return s;
        double c = (1 - th) / (1 + th), dc = -2 * dth / ((1 + th) * (1 + th));
        auto tang = [&](cplx z) {
            cplx wz = eval(U.w, z);
            double q = std::norm(1.0 + c * wz);
            return (1 - c * c) * (1 - c * c) * derivative_sq(U.w, z) / (q * q);
        };
        s.tangential = disc_integral(tang, br, "unwinding tangential", th / (2 * rep.d));
        if (dc != 0) {
            auto rad = [&](cplx z) {
                cplx wz = eval(U.w, z);
                double q = std::norm(1.0 + c * wz), sz = 1 + std::norm(z);
                return std::norm(1.0 - wz * wz) * dc * dc / (q * q * sz * sz);
            };
            s.radial = 2 * r * r * disc_integral(rad, br, "unwinding radial", th / (2 * rep.d));
        }
        // M_c o w keeps the degree of w; sample only where the swing near the minus points is resolvable
        if (th > 1e-3)
            s.degree = winding_number_adaptive([&](double phi) { return U.eval(std::polar(1.0, phi), r); }, 64 * (rep.d + 1));
        else
            s.degree = degree_of(U.w);
        return s;
    });
    std::vector<double> printed = parallel_map<double>(ro.size(), [&](std::size_t i) {
        double r = ro[i], th = U.theta(r), dth = U.theta.deriv(r);
        if (th <= 0 || dth == 0) return 0.0;
        return 8 * r * r * dth * dth * H_f_printed(U, th);
    });
    for (std::size_t i = 0; i < ro.size(); ++i) {
        rep.tangential += wo[i] * rows[i].tangential;
        rep.radial += wo[i] * rows[i].radial;
        rep.radial_printed += wo[i] * printed[i];
    }
    // theta(r) = alpha(eps / r): same radial energy in the variable t = eps / r
    // log-uniform nodes: t = eps^(1-u)
    std::vector<double> wt;
    std::vector<double> uu = shell_nodes(0, 1, n_shells, wt), tt(uu.size());
    double L = -std::log(U.eps);
    for (std::size_t i = 0; i < uu.size(); ++i) {
        tt[i] = std::exp(-L * (1 - uu[i]));
        wt[i] *= L * tt[i];
    }
    std::vector<double> hv = parallel_map<double>(tt.size(), [&](std::size_t i) {
        double t = tt[i], r = U.eps / t;
        double al = U.theta(r), dal = U.theta.deriv(r) * (-U.eps / (t * t));
        if (al <= 0 || dal == 0) return 0.0;
        return H_f(U.w, al) * dal * dal;
    });
    for (std::size_t i = 0; i < tt.size(); ++i) rep.int_H_alpha += wt[i] * hv[i];
    rep.radial_via_H = 8 * U.eps * rep.int_H_alpha;

    for (double r : {0.5 * U.eps, 0.5 * (1 + U.eps), 1.0})
        rep.max_modulus_defect =
            std::max(rep.max_modulus_defect, max_defect([&](cplx z) { return U.eval(z, r); }));
    ShellRow inner;
    inner.r = 0.5 * U.eps;
    rows.insert(rows.begin(), inner);
    rep.shells = std::move(rows);
    rep.total = rep.tangential + rep.radial;
    rep.below_threshold = rep.total < rep.threshold;
    return rep;
}

// ---------------------------------------------------------------------------

FamilyField zero_pull_field(const BlaschkeProduct& w_tilde, const Profile& beta, double eps) {
    FamilyField F;
    F.dz = [=](cplx z, double r) {
        double b = beta(r);
        if (b >= 1) return cplx(-derivative(w_tilde, z).value);
        cplx q = 1.0 - b * z;
        return (1 - b * b) / (q * q) * eval(w_tilde, z) + (z - b) / q * derivative(w_tilde, z).value;
    };
    F.dr = [=](cplx z, double r) {
        double b = beta(r);
        if (b >= 1) return cplx(0, 0);
        cplx q = 1.0 - b * z;
        return beta.deriv(r) * (z * z - 1.0) / (q * q) * eval(w_tilde, z);
    };
    F.angles = {0.0};
    F.width = [=](double r) { return r <= eps ? 0.0 : std::max(0.0, 1 - beta(r)); };
    F.breaks = {eps};
    return F;
}

FamilyField unwinding_field(const UnwindingFamily& U) {
    FamilyField F;
    auto coef = [U](double r, double& c, double& dc) {
        double th = U.theta(r);
        if (r <= U.eps || th <= 0) return false;
        c = (1 - th) / (1 + th);
        dc = -2 * U.theta.deriv(r) / ((1 + th) * (1 + th));
        return true;
    };
    F.dz = [=](cplx z, double r) {
        double c, dc;
        if (!coef(r, c, dc)) return cplx(0, 0);
        cplx q = 1.0 + c * eval(U.w, z);
        return (1 - c * c) * derivative(U.w, z).value / (q * q);
    };
    F.dr = [=](cplx z, double r) {
        double c, dc;
        if (!coef(r, c, dc)) return cplx(0, 0);
        cplx wz = eval(U.w, z), q = 1.0 + c * wz;
        return (1.0 - wz * wz) * dc / (q * q);
    };
    F.angles = U.minus;
    F.angles.insert(F.angles.end(), U.poles.begin(), U.poles.end());
    int d = U.w.factors();
    F.width = [=](double r) { return r <= U.eps ? 0.0 : U.theta(r) / (2 * d); };
    F.breaks = {U.eps};
    return F;
}

double direct_energy(const FamilyField& F, int n_r) {
    std::vector<double> cuts = {0.0, 1.0};
    for (double b : F.breaks)
        if (b > 0 && b < 1) cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::vector<double> rho, wr;
    int per = std::max(1, n_r / static_cast<int>(cuts.size() - 1) / 8);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        std::vector<double> w;
        std::vector<double> x = shell_nodes(cuts[i], cuts[i + 1], 8 * per, w);
        rho.insert(rho.end(), x.begin(), x.end());
        wr.insert(wr.end(), w.begin(), w.end());
    }
    std::vector<double> shell = parallel_map<double>(rho.size(), [&](std::size_t i) {
        double r = rho[i];
        auto dens = [&](cplx z) {
            Vec3 X = stereo(z) * r;
            double s = r + X.z;
            cplx q(X.x, X.y);
            Grad3 dzX = {cplx(1, 0) / s - q * (X.x / r) / (s * s), cplx(0, 1) / s - q * (X.y / r) / (s * s),
                         -q * (X.z / r + 1) / (s * s)};
            cplx a = F.dz(z, r), b = F.dr(z, r);
            double xr[3] = {X.x / r, X.y / r, X.z / r};
            double e = 0;
            for (int j = 0; j < 3; ++j) e += std::norm(a * dzX[j] + b * xr[j]);
            return 0.5 * e * stereo_density(z);
        };
        return r * r * disc_integral(dens, F.angles, "direct_energy", F.width ? F.width(r) : 0.0);
    });
    long double tot = 0;
    for (std::size_t i = 0; i < rho.size(); ++i) tot += wr[i] * shell[i];
    return static_cast<double>(tot);
}

}  // namespace halfharm
