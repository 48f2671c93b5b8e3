#pragma once

#include "halfharm/vec3.hpp"

namespace halfharm {

// Point of the extended plane; `infinite` is the tagged point at infinity.
struct PlanePoint {
    cplx z{0, 0};
    bool infinite = false;

    PlanePoint() = default;
    PlanePoint(cplx w) : z(w) {}
    static PlanePoint infinity() {
        PlanePoint p;
        p.infinite = true;
        return p;
    }
};

Vec3 stereo(cplx z);
cplx stereo_inv(const Vec3& p);

cplx cayley(const PlanePoint& w);
PlanePoint cayley_inv(cplx z);

double stereo_density(cplx z);
double cayley_line_density(double x);

}  // namespace halfharm
