#include "halfharm/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "halfharm/blaschke.hpp"
#include "halfharm/conformal.hpp"
#include "halfharm/errors.hpp"
#include "halfharm/parallel.hpp"
#include "halfharm/quadrature.hpp"

namespace halfharm {

namespace {

double checked(const IntegrationResult& r, const char* what) {
    if (!r.converged || !std::isfinite(r.value)) throw NumericalFailure(std::string(what) + ": quadrature did not converge");
    return r.value;
}

void unit_interval(double t, const char* what) {
    if (!(t >= 0 && t < 1)) throw DomainViolation(std::string(what) + ": argument must lie in [0, 1)");
}

// periodic trapezoid, doubled until two levels agree
double periodic_mean(const std::function<double(double)>& f, double shift, int n0 = 64, int nmax = 1 << 20) {
    auto level = [&](int n) {
        long double s = 0;
        for (int k = 0; k < n; ++k) s += f(2 * kPi * (k + shift) / n);
        return static_cast<double>(s / n);
    };
    double prev = level(n0);
    for (int n = 2 * n0; n <= nmax; n *= 2) {
        double cur = level(n);
        if (std::abs(cur - prev) <= 1e-14 * std::max(1.0, std::abs(cur))) return cur;
        prev = cur;
    }
    throw NumericalFailure("periodic_mean: trapezoid rule did not settle");
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

}  // namespace

CertificateReport make_report(std::string name, double closed, double oracle, double tol, std::string notes) {
    CertificateReport r;
    r.name = std::move(name);
    r.closed_value = closed;
    r.oracle_value = oracle;
    r.abs_diff = std::abs(closed - oracle);
    if (!std::isfinite(r.abs_diff)) r.abs_diff = std::numeric_limits<double>::infinity();
    r.tolerance = tol;
    r.pass = r.abs_diff <= tol;
    r.notes = std::move(notes);
    return r;
}

namespace {

// one-sided: lhs <= rhs
CertificateReport make_inequality(std::string name, double lhs, double rhs, std::string notes) {
    CertificateReport r = make_report(std::move(name), lhs, rhs, 0, std::move(notes));
    r.abs_diff = std::max(0.0, lhs - rhs);
    r.pass = r.abs_diff <= r.tolerance;
    return r;
}

}  // namespace

// ---------------------------------------------------------------------------

double F_closed(double t) {
    unit_interval(t, "F_closed");
    double p = 1 + t;
    return (t * t - 10 * t + 1) / (p * p * p * p) * std::log((1 - t) * (1 - t) / 4) - (t * t + 11 * t - 2) / (p * p * p);
}

namespace {

double I_generic(double g, int power) {
    unit_interval(g, "I_oracle");
    auto f = [g, power](cplx z) {
        double r2 = std::norm(z), x = z.real();
        double q = 1 - 2 * g * x + g * g * r2;
        double s = (1 + r2) * (1 + r2);
        return (s - 4 * x * x) / (std::pow(q, power) * s);
    };
    return checked(adaptive_disc(f, {1e-12, 1e-11, 50}, {0.0}), "I_oracle");
}

}  // namespace

double I_oracle(double gamma) { return I_generic(gamma, 2); }
double I_oracle_first_power(double gamma) { return I_generic(gamma, 1); }

double M_closed(double a) {
    unit_interval(a, "M_closed");
    double d = 1 - a * a;
    return 2 * kPi * (1 + a * a) / (d * d * d);
}

double N_closed(double a) {
    unit_interval(a, "N_closed");
    double d = 1 - a * a;
    return 2 * kPi * ((1 + a * a) / (d * d * d) - 1 / (2 * d));
}

double M_oracle(double a) {
    unit_interval(a, "M_oracle");
    return 2 * kPi * periodic_mean([a](double th) {
        double q = 1 - 2 * a * std::cos(th) + a * a;
        return 1 / (q * q);
    }, 0);
}

double N_oracle(double a) {
    unit_interval(a, "N_oracle");
    return 2 * kPi * periodic_mean([a](double th) {
        double c = std::cos(th), q = 1 - 2 * a * c + a * a;
        return c * c / (q * q);
    }, 0);
}

double A_closed(double gamma) {
    unit_interval(gamma, "A_closed");
    double d = 1 - gamma * gamma;
    return kPi / (d * d);
}

double V_closed(double t) {
    unit_interval(t, "V_closed");
    return std::log(2 / (1 - t)) / (2 * (1 + t) * (1 + t)) - 1 / (4 * (1 + t));
}

double P_closed(double t) {
    unit_interval(t, "P_closed");
    double p = 1 + t, m = 1 - t;
    return 1 / (4 * m) + 1 / (4 * p) - 3 / (4 * p * p) + (t * t + 2 * t) / (p * p * m) - t / (p * m) -
           4 * t * t / (p * p * p * m) - m / (2 * p * p * p);
}

double U_closed(double t) {
    unit_interval(t, "U_closed");
    double p = 1 + t;
    return (t * t - 4 * t + 1) / (2 * p * p * p * p) * std::log(2 / (1 - t)) + 1 / (8 * (1 - t) * (1 - t)) +
           0.5 * P_closed(t);
}

double A_oracle(double gamma) {
    unit_interval(gamma, "A_oracle");
    auto f = [gamma](cplx z) {
        double q = 1 - 2 * gamma * z.real() + gamma * gamma * std::norm(z);
        return 1 / (q * q);
    };
    return checked(adaptive_disc(f, {1e-12, 1e-12, 50}, {0.0}), "A_oracle");
}

double V_oracle(double t) {
    unit_interval(t, "V_oracle");
    auto f = [t](double r) {
        double s = 1 + r * r;
        return r * r * r / ((1 - t * r * r) * s * s);
    };
    return checked(adaptive_integrate(f, 0, 1, {1e-14, 1e-13, 50}), "V_oracle");
}

double U_oracle(double t) {
    unit_interval(t, "U_oracle");
    auto f = [t](double r) {
        double s = 1 + r * r, q = 1 - t * r * r;
        return (1 + t * r * r) * r * r * r / (q * q * q * s * s);
    };
    return checked(adaptive_integrate(f, 0, 1, {1e-14, 1e-13, 50}), "U_oracle");
}

double ratint_closed(double A, double B) {
    if (!(A > 0) || !(B > 0)) throw InvalidArgument("ratint_closed: A and B must be positive");
    return (1 + A * A) / (2 * A * A * A) + (B - 2) / (2 * A * (A + 1) * (A + 1));
}

double ratint_oracle(double A, double B) {
    if (!(A > 0) || !(B > 0)) throw InvalidArgument("ratint_oracle: A and B must be positive");
    // x = tan(s); the 1/(1+x^2) factor absorbs dx
    auto f = [A, B](double s) {
        double sn = std::sin(s), c = std::cos(s);
        double s2 = sn * sn, c2 = c * c;
        double den = s2 + A * A * c2;
        return (s2 * s2 + B * s2 * c2 + c2 * c2) / (den * den);
    };
    return checked(adaptive_integrate(f, -kPi / 2, kPi / 2, {1e-14, 1e-13, 50}), "ratint_oracle") / kPi;
}

namespace {

// partial-fraction form of J given t, u = 1 - t, lam and m = 1 - lam computed without cancellation
double J_split(double t, double u, double lam, double m) {
    double lp = 1 + lam * t, lm = m + lam * u;  // 1 + lam t, 1 - lam t
    double q = m * (1 + lam);                   // 1 - lam^2
    double p = (1 + t) * (1 + t);
    return p * p / 32 *
           (q * q / (lp * lm * lm * lm) + q * q / (lp * lp * lp * lm) + 4 * lam * lam / (lp * lm));
}

}  // namespace

double J_closed(double a, double lambda) {
    if (!(a > 0 && a <= 1)) throw InvalidArgument("J_closed: a must lie in (0, 1]");
    if (!(lambda >= 0 && lambda <= 1)) throw InvalidArgument("J_closed: lambda must lie in [0, 1]");
    double t = (1 - a) / (1 + a);
    if (lambda * t >= 1) throw DomainViolation("J_closed: lambda t >= 1");
    if (lambda * t > 0.5) return J_split(t, 2 * a / (1 + a), lambda, 1 - lambda);
    double t2 = t * t, l2 = lambda * lambda;
    double num = (2 * t2 + 1) * t2 * l2 * l2 * l2 - (6 * t2 - 1) * l2 * l2 + t2 * l2 + 1;
    double d = 1 - l2 * t2;
    double p = (1 + t) * (1 + t);
    return p * p / 16 * num / (d * d * d);
}

double J_oracle(double a, double lambda) {
    if (!(a > 0 && a <= 1)) throw InvalidArgument("J_oracle: a must lie in (0, 1]");
    if (!(lambda >= 0 && lambda <= 1)) throw InvalidArgument("J_oracle: lambda must lie in [0, 1]");
    auto K = [a, lambda](double th) {
        PlanePoint w = cayley_inv(std::polar(lambda, th));
        if (w.infinite) return 0.0;
        double m2 = std::norm(w.z);
        double d = a * a + 2 * a * w.z.imag() + m2;
        return m2 / (d * d);
    };
    // the node th = 0 sits on the pole of the inverse Cayley map when lambda = 1
    double shift = lambda == 1 ? 0.5 : 0.0;
    return periodic_mean(K, shift);
}

double delta_certificate(double delta) {
    if (delta == 1) return 0;
    unit_interval(delta, "delta_certificate");
    auto f = [](double t) { return std::sqrt(2 * F_closed(t * t)); };
    return graded_integrate(f, delta, 1, 40, 16);
}

double delta_certificate_adaptive(double delta) {
    if (delta == 1) return 0;
    unit_interval(delta, "delta_certificate");
    auto f = [](double t) { return std::sqrt(2 * F_closed(t * t)); };
    IntegrateOptions o;
    o.singular = {1.0};
    return checked(adaptive_integrate(f, delta, 1, {1e-13, 1e-12, 60}, o), "delta_certificate");
}

namespace {

// integrals in r are taken in w = 1 - r: the integrand peaks in a layer of width ~ u = 1 - t at w = 0
IntegrateOptions layer_breaks(double u) {
    IntegrateOptions o;
    o.singular = {0.0};
    for (double w = u; w < 0.5; w *= 2) o.breakpoints.push_back(w);
    return o;
}

// lam(r) = ((3r+1)/(r+3))^2 and 1 - lam(r), r = 1 - w
void lam_of(double w, double& lam, double& m) {
    double r = 1 - w, q = r + 3, l = (3 * r + 1) / q;
    lam = l * l;
    m = 8 * w * (2 - w) / (q * q);
}

}  // namespace

double F1_closed_or_quad(double a) {
    if (!(a > 0 && a <= 1)) throw InvalidArgument("F1: a must lie in (0, 1]");
    double t = (1 - a) / (1 + a), u = 2 * a / (1 + a);
    auto f = [t, u](double w) {
        double lam, m;
        lam_of(w, lam, m);
        double r = 1 - w, s = 1 + r * r;
        return J_split(t, u, lam, m) * r / (s * s);
    };
    return checked(adaptive_integrate(f, 0, 1, {1e-14, 1e-12, 60}, layer_breaks(u)), "F1");
}

double F2_integrand(double t, double r) {
    double p = 3 * r + 1, q = r + 3;
    double p4 = p * p * p * p, q4 = q * q * q * q;
    double t2 = t * t;
    double den = q4 - p4 * t2;
    double den3 = den * den * den;
    double num = (2 * t2 + 1) * t2 * p4 * p4 * p4 - (6 * t2 - 1) * p4 * p4 * q4 + t2 * p4 * q4 * q4 + q4 * q4 * q4;
    double s = 1 + r * r;
    return num / den3 * r / (s * s);
}

double F2_integrand_stable(double t, double r) {
    double lam, m;
    lam_of(1 - r, lam, m);
    double s = 1 + r * r, p = (1 + t) * (1 + t);
    return 16 / (p * p) * J_split(t, 1 - t, lam, m) * r / (s * s);
}

double F2_of(double t) {
    unit_interval(t, "F2");
    double u = 1 - t, c = 16 / ((1 + t) * (1 + t) * (1 + t) * (1 + t));
    auto f = [t, u, c](double w) {
        double lam, m;
        lam_of(w, lam, m);
        double r = 1 - w, s = 1 + r * r;
        return c * J_split(t, u, lam, m) * r / (s * s);
    };
    return checked(adaptive_integrate(f, 0, 1, {1e-14, 1e-12, 60}, layer_breaks(u)), "F2");
}

F2Summary F2_summary() {
    F2Summary s;
    IntegrateOptions at1, at0;
    at1.singular = {1.0};
    at0.singular = {0.0};
    Tolerance tol{1e-11, 1e-10, 60};
    s.four_int_F2 = 4 * checked(adaptive_integrate(F2_of, 0, 1, tol, at1), "int F2");
    // t = (1-a)/(1+a) turns 4 int F2 dt into 8 int (1+a)^2 F1(a) da
    s.four_int_F2_via_F1 = 8 * checked(adaptive_integrate([](double a) {
        return a == 0 ? 0.0 : (1 + a) * (1 + a) * F1_closed_or_quad(a);
    }, 0, 1, tol, at0), "int F2 via F1");
    s.sqrt_F1 = 4 * checked(adaptive_integrate([](double a) { return std::sqrt(F1_closed_or_quad(a)); }, 0, 1, tol, at0),
                            "int sqrt F1");
    s.sqrt_F2 = 2 * checked(adaptive_integrate([](double t) { return std::sqrt(F2_of(t)); }, 0, 1, tol, at1),
                            "int sqrt F2");
    s.cs_bound = 2 * std::sqrt(s.four_int_F2 / 4);
    return s;
}

CertificateReport F2_certificate() {
    F2Summary s = F2_summary();
    CertificateReport r = make_report("f2", s.four_int_F2, 1.93, 0.03,
                                      "4 int F2 against the reference value 1.93; pass also requires < 2");
    r.pass = r.pass && s.four_int_F2 < 2;
    return r;
}

double hardy_constant() {
    double q = gamma_fn(0.75) / gamma_fn(0.25);
    return 8 * kPi * q * q;
}

double sphere_destabilization_margin(int d) {
    if (d < 1) throw InvalidArgument("sphere_destabilization_margin: d must be >= 1");
    return 4 * kPi * d - hardy_constant();
}

CertificateReport polar_kernel_identity(double c) {
    if (!(c > -1 && c < 1)) throw InvalidArgument("polar_kernel_identity: c must lie in (-1, 1)");
    auto f = [c](double rho) { return rho * std::pow(1 - 2 * rho * c + rho * rho, -1.5); };
    double q = checked(adaptive_integrate(f, 0, kInf, {1e-14, 1e-13, 60}), "polar_kernel_identity");
    return make_report("polar_kernel(c=" + fmt(c) + ")", 1 / (1 - c), q, 1e-8);
}

// ---------------------------------------------------------------------------
// suites

namespace {

struct Suite {
    std::vector<CertificateRow> rows;
};

std::vector<double> grid(double a, double step, int n) {
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(a + step * i);
    return v;
}

std::vector<CertificateRow> rows_1d(const std::vector<double>& args, const std::function<double(double)>& closed,
                                    const std::function<double(double)>& oracle) {
    return parallel_map<CertificateRow>(args.size(), [&](std::size_t i) {
        double c = closed(args[i]), o = oracle(args[i]);
        return CertificateRow{args[i], 0, c, o, std::abs(c - o)};
    });
}

std::vector<CertificateRow> rows_2d(const std::vector<double>& a1, const std::vector<double>& a2,
                                    const std::function<double(double, double)>& closed,
                                    const std::function<double(double, double)>& oracle) {
    return parallel_map<CertificateRow>(a1.size() * a2.size(), [&](std::size_t k) {
        double x = a1[k / a2.size()], y = a2[k % a2.size()];
        double c = closed(x, y), o = oracle(x, y);
        return CertificateRow{x, y, c, o, std::abs(c - o)};
    });
}

CertificateReport worst(const std::string& name, const std::vector<CertificateRow>& rows, double tol,
                        std::string notes = {}, bool two_args = false) {
    std::size_t w = 0;
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (!(rows[i].diff <= rows[w].diff)) w = i;
    std::ostringstream os;
    os << "max over " << rows.size() << " points, worst at " << fmt(rows[w].arg1);
    if (two_args) os << ", " << fmt(rows[w].arg2);
    if (!notes.empty()) os << "; " << notes;
    CertificateReport r = make_report(name, rows[w].closed, rows[w].oracle, tol, os.str());
    r.abs_diff = rows[w].diff;
    r.pass = r.abs_diff <= tol;
    return r;
}

const std::vector<std::string> kNames = {"f_i",  "f_zero", "m_n",   "a_v_u", "p_identity", "ratint", "j",
                                         "delta", "f1",    "f2",    "hardy", "polar", "grad_d1"};

std::vector<CertificateRow> table_impl(const std::string& name) {
    if (name == "f_i")
        return rows_1d(grid(0, 0.1, 10), [](double g) { return kPi * F_closed(g * g); }, I_oracle);
    if (name == "m_n") {
        std::vector<CertificateRow> m = rows_1d(grid(0, 0.1, 10), M_closed, M_oracle);
        std::vector<CertificateRow> n = rows_1d(grid(0, 0.1, 10), N_closed, N_oracle);
        for (CertificateRow& r : n) r.arg2 = 1;
        m.insert(m.end(), n.begin(), n.end());
        return m;
    }
    if (name == "a_v_u") {
        std::vector<CertificateRow> out;
        int tag = 0;
        for (auto [c, o] : {std::pair<double (*)(double), double (*)(double)>{A_closed, A_oracle},
                            {V_closed, V_oracle},
                            {U_closed, U_oracle}}) {
            std::vector<CertificateRow> r = rows_1d(grid(0, 0.09, 11), c, o);
            for (CertificateRow& x : r) x.arg2 = tag;
            out.insert(out.end(), r.begin(), r.end());
            ++tag;
        }
        return out;
    }
    if (name == "p_identity")
        return rows_1d(grid(0, 0.045, 20), [](double t) { return P_closed(t) + 1 / (4 * (1 + t)); },
                       [](double t) { return (t * t + 11 * t - 2) / (4 * std::pow(1 + t, 3)); });
    if (name == "ratint")
        return rows_2d({0.25, 0.5, 1, 2, 4}, {0.5, 1, 2, 5, 10}, ratint_closed, ratint_oracle);
    if (name == "j") return rows_2d(grid(0.1, 0.1, 10), grid(0, 0.1, 10), J_closed, J_oracle);
    if (name == "delta")
        return rows_1d(grid(0, 0.1, 10), delta_certificate, delta_certificate_adaptive);
    if (name == "f1")
        return rows_1d({0.1, 0.25, 0.5, 0.75, 1.0}, F1_closed_or_quad, [](double a) {
            // J from its circle-average definition, composite GL in r graded toward r = 1
            auto f = [a](double r) {
                double l = (3 * r + 1) / (r + 3);
                double s = 1 + r * r;
                return J_oracle(a, l * l) * r / (s * s);
            };
            return graded_integrate(f, 0, 1, 30, 12);
        });
    if (name == "polar") {
        std::vector<double> cs = {-0.9, -0.5, 0, 0.5, 0.9};
        return parallel_map<CertificateRow>(cs.size(), [&](std::size_t i) {
            CertificateReport r = polar_kernel_identity(cs[i]);
            return CertificateRow{cs[i], 0, r.closed_value, r.oracle_value, r.abs_diff};
        });
    }
    throw InvalidArgument("no table for certificate '" + name + "'");
}

}  // namespace

std::vector<std::string> certificate_names() { return kNames; }

std::vector<CertificateRow> certificate_table(const std::string& name) { return table_impl(name); }

std::vector<CertificateReport> run_certificates(const std::string& name) {
    if (name == "all") {
        std::vector<CertificateReport> out;
        for (const std::string& n : kNames) {
            std::vector<CertificateReport> r = run_certificates(n);
            out.insert(out.end(), r.begin(), r.end());
        }
        return out;
    }
    if (name == "f_i") {
        double first = I_oracle_first_power(0.5), sq = I_oracle(0.5), ref = kPi * F_closed(0.25);
        std::ostringstream os;
        os << "squared quadratic factor; the first-power variant gives " << fmt(first) << " vs " << fmt(ref)
           << " at gamma = 0.5 (squared: " << fmt(sq) << "), so only the squared form matches pi F(gamma^2)";
        return {worst("f_i", table_impl("f_i"), 1e-6, os.str())};
    }
    if (name == "f_zero") return {make_report("f_zero", F_closed(0), 2 - 2 * std::log(2.0), 1e-15)};
    if (name == "m_n") return {worst("m_n", table_impl("m_n"), 1e-9, "arg2 = 0 for M, 1 for N", true)};
    if (name == "a_v_u")
        return {worst("a_v_u", table_impl("a_v_u"), 1e-9, "arg2 = 0 for A, 1 for V, 2 for U", true)};
    if (name == "p_identity") return {worst("p_identity", table_impl("p_identity"), 1e-12)};
    if (name == "ratint") return {worst("ratint", table_impl("ratint"), 1e-9, {}, true),
                                  make_report("ratint(1,2)", ratint_closed(1, 2), 1, 0)};
    if (name == "j") return {worst("j", table_impl("j"), 1e-8, {}, true)};
    if (name == "delta") {
        double v = delta_certificate(1.0 / 3);
        CertificateReport quoted = make_report("delta(1/3)", v, 0.971, 0.005,
                                              "graded mesh; pass also requires value + tolerance < 1");
        quoted.pass = quoted.pass && v + quoted.tolerance < 1;
        return {quoted, worst("delta_routes", table_impl("delta"), 1e-9, "graded mesh vs adaptive")};
    }
    if (name == "f1") return {worst("f1", table_impl("f1"), 1e-8, "closed J vs circle-average J")};
    if (name == "f2") {
        F2Summary s = F2_summary();
        CertificateReport main = make_report("f2", s.four_int_F2, 1.93, 0.03,
                                             "4 int F2 against the reference value 1.93; pass also requires < 2");
        main.pass = main.pass && s.four_int_F2 < 2;
        return {main, make_report("f2_routes", s.four_int_F2, s.four_int_F2_via_F1, 1e-7, "integral in t vs 8 int (1+a)^2 F1(a) da"),
                make_report("f2_substitution", s.sqrt_F1, s.sqrt_F2, 1e-4, "4 int sqrt F1 da vs 2 int sqrt F2 dt"),
                make_inequality("f2_cauchy_schwarz", s.sqrt_F2, s.cs_bound, "2 int sqrt F2 <= 2 (int F2)^{1/2}")};
    }
    if (name == "hardy") {
        double c = hardy_constant();
        // Gamma(1/4)^2 = 4 sqrt(2 pi) L with L = int_0^1 (1 - t^4)^{-1/2} dt
        IntegrateOptions o;
        o.singular = {1.0};
        double L = checked(adaptive_integrate([](double t) { return 1 / std::sqrt(1 - t * t * t * t); }, 0, 1,
                                              {1e-15, 1e-14, 60}, o),
                           "hardy oracle");
        std::vector<CertificateReport> out = {
            make_report("hardy", c, kPi * kPi / (2 * L * L), 1e-10, "gamma ratio vs lemniscate integral"),
            make_report("hardy_reference", c, 2.871, 1e-3)};
        for (int d = 1; d <= 4; ++d)
            out.push_back(make_inequality("destabilization(d=" + std::to_string(d) + ")", c, 4 * kPi * d,
                                          "C# <= 4 pi d, margin " + fmt(sphere_destabilization_margin(d))));
        return out;
    }
    if (name == "polar") return {worst("polar_kernel", table_impl("polar"), 1e-8)};
    if (name == "grad_d1") {
        // |w'|^2 of a single factor against (1 - |a|^2)^2 / |1 - conj(a) z|^4
        std::vector<CertificateRow> rows;
        double ratio_gap = 0;
        for (cplx a : {cplx(0.3, 0), cplx(0.5, 0.2), cplx(0, 0.7)})
            for (cplx z : {cplx(0, 0), cplx(0.4, -0.1), cplx(-0.6, 0.5), std::polar(1.0, 2.0)}) {
                double m = 1 - std::norm(a), q = std::norm(1.0 - std::conj(a) * z);
                double direct = m * m / (q * q), single = m / (q * q);
                rows.push_back({std::abs(a), std::abs(z), derivative_sq(BlaschkeProduct(0, {a}), z), direct, 0});
                rows.back().diff = std::abs(rows.back().closed - direct);
                ratio_gap = std::max(ratio_gap, std::abs(single / rows.back().closed - 1));
            }
        return {worst("grad_d1", rows, 1e-12,
                      "(1 - |a|^2)^2 / |1 - conj(a) z|^4; the single-power form (1 - |a|^2) / |1 - conj(a) z|^4 is off by "
                      "up to " + fmt(ratio_gap) + " relative and is not used", true)};
    }
    throw InvalidArgument("unknown certificate '" + name + "'");
}

}  // namespace halfharm
