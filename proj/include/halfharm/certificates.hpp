#pragma once

#include <string>
#include <vector>

namespace halfharm {

struct CertificateReport {
    std::string name;
    double closed_value = 0;
    double oracle_value = 0;
    double abs_diff = 0;
    double tolerance = 0;
    bool pass = false;
    std::string notes;
};

// verdict from abs_diff <= tolerance
CertificateReport make_report(std::string name, double closed, double oracle, double tol, std::string notes = {});

double F_closed(double t);
// disc integral with the squared quadratic factor; I_oracle(g) = pi F(g^2)
double I_oracle(double gamma);
// same with the quadratic factor to the first power
double I_oracle_first_power(double gamma);

double M_closed(double a);
double N_closed(double a);
double M_oracle(double a);
double N_oracle(double a);

double A_closed(double gamma);
double V_closed(double t);
double U_closed(double t);
double P_closed(double t);
double A_oracle(double gamma);
double V_oracle(double t);
double U_oracle(double t);

double ratint_closed(double A, double B);
double ratint_oracle(double A, double B);

double J_closed(double a, double lambda);
double J_oracle(double a, double lambda);

double delta_certificate(double delta);
// adaptive route with a graded singular endpoint, for cross-checking
double delta_certificate_adaptive(double delta);

double F1_closed_or_quad(double a);
// printed rational integrand in r
double F2_integrand(double t, double r);
// same function, written so that it stays accurate near t = r = 1
double F2_integrand_stable(double t, double r);
double F2_of(double t);

struct F2Summary {
    double four_int_F2 = 0;       // 4 int_0^1 F2, direct
    double four_int_F2_via_F1 = 0; // 8 int_0^1 (1+a)^2 F1(a) da
    double sqrt_F1 = 0;           // 4 int_0^1 sqrt(F1(a)) da
    double sqrt_F2 = 0;           // 2 int_0^1 sqrt(F2(t)) dt
    double cs_bound = 0;          // 2 (int F2)^{1/2}
};
F2Summary F2_summary();
CertificateReport F2_certificate();

double hardy_constant();
double sphere_destabilization_margin(int d);
CertificateReport polar_kernel_identity(double c);

// named suites; "all" runs every one of them
std::vector<std::string> certificate_names();
std::vector<CertificateReport> run_certificates(const std::string& name);

struct CertificateRow {
    double arg1, arg2, closed, oracle, diff;
};
// argument tables behind each suite, for plotting
std::vector<CertificateRow> certificate_table(const std::string& name);

}  // namespace halfharm
