#pragma once

#include <cmath>
#include <array>
#include <complex>

namespace halfharm {

using cplx = std::complex<double>;

struct Vec3 {
    double x = 0, y = 0, z = 0;

    Vec3() = default;
    Vec3(double a, double b, double c) : x(a), y(b), z(c) {}

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
    double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }
inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline cplx planar(const Vec3& a) { return {a.x, a.y}; }

// gradient of an R^2-valued map: grad[j] = (d/dx_j v1, d/dx_j v2) packed as complex
using Grad3 = std::array<cplx, 3>;

inline Vec3 component(const Grad3& g, int c) {
    if (c == 0) return {g[0].real(), g[1].real(), g[2].real()};
    return {g[0].imag(), g[1].imag(), g[2].imag()};
}

}  // namespace halfharm
