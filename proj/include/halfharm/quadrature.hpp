#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "halfharm/vec3.hpp"

namespace halfharm {

enum class Domain { interval, circle, disc, hemisphere };

// Nodes are stored as 3-vectors: interval (x,0,0), circle (cos, sin, 0),
// disc (x1, x2, 0), hemisphere (x1, x2, x3).
struct QuadRule {
    Domain domain = Domain::interval;
    std::vector<Vec3> nodes;
    std::vector<double> weights;

    std::size_t size() const { return weights.size(); }
    double weight_sum() const;
};

struct Tolerance {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    int max_refinements = 40;  // bisection depth cap per subinterval
};

struct IntegrationResult {
    double value = 0;
    double err_estimate = 0;
    bool converged = true;
    int intervals = 0;
};

QuadRule gauss_legendre(int n);
QuadRule circle_rule(int n);
QuadRule disc_rule(int n_r, int n_t);
QuadRule hemisphere_rule(int n_r, int n_t);

// GL nodes/weights mapped to [a,b]
void gauss_legendre_on(int n, double a, double b, std::vector<double>& x, std::vector<double>& w);

double gamma_fn(double x);

double invert_monotone(const std::function<double(double)>& f, double a, double b, double y,
                       const Tolerance& tol = {});

// Endpoints may be +-infinity (tan substitution). Points listed in `singular` are
// treated as breakpoints; a singular endpoint is graded by x = a + (b-a)u^2.
struct IntegrateOptions {
    std::vector<double> singular;
    std::vector<double> breakpoints;
    int max_intervals = 4000;
};

IntegrationResult adaptive_integrate(const std::function<double(double)>& f, double a, double b,
                                     const Tolerance& tol = {}, const IntegrateOptions& opt = {});

// Composite GL over [a, b] with panels shrinking geometrically (ratio 1/2) toward b.
double graded_integrate(const std::function<double(double)>& f, double a, double b, int levels,
                        int order = 16);

// Nested adaptive integral over the unit disc in polar coordinates.
// `angle_breaks` are angles where the integrand concentrates.
IntegrationResult adaptive_disc(const std::function<double(cplx)>& f, const Tolerance& tol = {},
                                const std::vector<double>& angle_breaks = {},
                                const std::vector<double>& radial_breaks = {});

constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace halfharm
