#include "halfharm/conformal.hpp"

#include <cmath>

#include "halfharm/errors.hpp"

namespace halfharm {

namespace {
constexpr double kSlack = 1e-12;
}

Vec3 stereo(cplx z) {
    double r2 = std::norm(z);
    if (std::sqrt(r2) > 1 + kSlack) throw DomainViolation("stereo: |z| > 1");
    double d = 1 + r2;
    return {2 * z.real() / d, 2 * z.imag() / d, (1 - r2) / d};
}

cplx stereo_inv(const Vec3& p) {
    if (std::abs(norm(p) - 1) > 1e-10) throw DomainViolation("stereo_inv: point not on the unit sphere");
    if (p.z < -1e-10) throw DomainViolation("stereo_inv: point below the equator");
    return cplx(p.x, p.y) / (1 + std::max(p.z, 0.0));
}

cplx cayley(const PlanePoint& w) {
    if (w.infinite) return {1, 0};
    if (w.z.imag() < -kSlack) throw DomainViolation("cayley: Im(w) < 0");
    const cplx i(0, 1);
    return (w.z - i) / (w.z + i);
}

PlanePoint cayley_inv(cplx z) {
    if (std::abs(z) > 1 + kSlack) throw DomainViolation("cayley_inv: |z| > 1");
    if (z == cplx(1, 0)) return PlanePoint::infinity();
    const cplx i(0, 1);
    return PlanePoint(i * (1.0 + z) / (1.0 - z));
}

double stereo_density(cplx z) {
    double d = 1 + std::norm(z);
    return 4 / (d * d);
}

double cayley_line_density(double x) { return 2 / (1 + x * x); }

}  // namespace halfharm
