#include "halfharm/nonlocal_energy.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>

#include "halfharm/conformal.hpp"
#include "halfharm/errors.hpp"
#include "halfharm/parallel.hpp"

namespace halfharm {

namespace {

struct GL {
    std::vector<double> x, w;  // on [0, 1]
};

GL make_gl(int n) {
    GL g;
    gauss_legendre_on(n, 0, 1, g.x, g.w);
    return g;
}

const GL& gl8() {
    static const GL g = make_gl(8);
    return g;
}
const GL& gl12() {
    static const GL g = make_gl(12);
    return g;
}
const GL& gl16() {
    static const GL g = make_gl(16);
    return g;
}

// chord of the ray x + rho*om (rho >= 0) with the disc D(c, R)
bool ray_disc(cplx x, cplx om, cplx c, double R, double& r1, double& r2) {
    cplx d = x - c;
    double b = (std::conj(om) * d).real();
    double q = std::norm(d) - R * R;
    double disc = b * b - q;
    if (disc <= 0) return false;
    double s = std::sqrt(disc);
    r2 = -b + s;
    if (r2 <= 0) return false;
    r1 = std::max(0.0, -b - s);
    return true;
}

// panels from p0 to pe: length <= H(p), and <= max(s0, p) so the geometric part resolves rho ~ 0;
// at most ~4000 panels
template <class Hf>
void fill_panels(std::vector<double>& pts, double p0, double pe, Hf H, double s0) {
    double p = p0;
    double floor_step = (pe - p0) / 4000;
    pts.push_back(p);
    while (p < pe) {
        double step = std::max(floor_step, std::min(H(p), std::max(s0, p)));
        double q = p + step;
        if (q > pe - 0.25 * step) q = pe;
        pts.push_back(q);
        p = q;
    }
}

// breakpoints grading toward rho* where the ray passes s at distance dperp
void singular_breaks(std::vector<double>& pts, cplx x, cplx om, const std::vector<SingularPoint>& sing,
                     double rho_max) {
    for (const SingularPoint& sp : sing) {
        cplx rel = std::conj(om) * (sp.z - x);
        double rs = rel.real(), dp = std::abs(rel.imag());
        if (rs <= 0 || rs >= rho_max) continue;
        pts.push_back(rs);
        double step = std::max(0.25 * dp, 1e-13 * rs);
        for (int j = 0; j < 200 && step < 0.5 * rs; ++j, step *= 2) {
            pts.push_back(rs - step);
            if (rs + step < rho_max) pts.push_back(rs + step);
        }
    }
}

// ray crossings with the edge circles of u inside (lo, hi)
void edge_breaks(std::vector<double>& pts, cplx x, cplx om, const PlaneMap& u, double lo, double hi) {
    for (const auto& [c, R] : u.edges) {
        double r1, r2;
        if (!ray_disc(x, om, c, R, r1, r2)) continue;
        for (double r : {r1, r2})
            if (r > lo && r < hi) pts.push_back(r);
    }
}

void sort_unique(std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

// angular panels graded toward the listed directions; falls back to the trapezoid rule
void angle_rule(const std::vector<double>& dirs, const std::vector<double>& w0s, int n_trap,
                std::vector<double>& phi, std::vector<double>& wt) {
    phi.clear();
    wt.clear();
    if (dirs.empty()) {
        for (int k = 0; k < n_trap; ++k) {
            phi.push_back(2 * kPi * (k + 0.5) / n_trap);
            wt.push_back(2 * kPi / n_trap);
        }
        return;
    }
    std::vector<double> br;
    for (std::size_t i = 0; i < dirs.size(); ++i) {
        double d0 = dirs[i];
        br.push_back(d0);
        for (double w = w0s[i]; w < kPi; w *= 2) {
            br.push_back(d0 + w);
            br.push_back(d0 - w);
        }
    }
    double base = dirs[0];
    for (double& b : br) {
        b = std::fmod(b - base, 2 * kPi);
        if (b < 0) b += 2 * kPi;
    }
    br.push_back(2 * kPi);
    sort_unique(br);
    std::vector<double> fine;
    for (std::size_t i = 0; i + 1 < br.size(); ++i) {
        double a = br[i], b = br[i + 1];
        int m = std::max(1, static_cast<int>(std::ceil((b - a) / (kPi / 8))));
        for (int j = 0; j < m; ++j) fine.push_back(a + (b - a) * j / m);
    }
    fine.push_back(2 * kPi);
    const GL& g = gl8();
    for (std::size_t i = 0; i + 1 < fine.size(); ++i) {
        double a = fine[i], len = fine[i + 1] - fine[i];
        if (len <= 0) continue;
        for (std::size_t k = 0; k < g.x.size(); ++k) {
            phi.push_back(base + a + len * g.x[k]);
            wt.push_back(len * g.w[k]);
        }
    }
}

}  // namespace

double gamma_n(int n) {
    if (n != 1 && n != 2) throw InvalidArgument("gamma_n: n must be 1 or 2");
    if (n == 1) return 1 / kPi;
    return 1 / (2 * kPi);
}

cplx PlaneMap::far_value(cplx y) const {
    if (far_kind == FarField::constant) return far_constant;
    double r = std::abs(y);
    if (r == 0) return 0;
    return far_dir(y / r);
}

double PlaneMap::local_feature(cplx x) const {
    double h = feature_at ? feature_at(x) : feature;
    for (const SingularPoint& s : singular) h = std::min(h, 0.25 * std::abs(x - s.z));
    return std::max(h, 1e-14);
}

PlaneMap PlaneMap::constant(cplx c) {
    PlaneMap u;
    u.eval = [c](cplx) { return c; };
    u.bound = std::abs(c);
    u.far_constant = c;
    u.radial = true;
    return u;
}

PlaneMap PlaneMap::bump(cplx center, double radius, cplx amplitude, cplx tilt) {
    if (!(radius > 0)) throw InvalidArgument("bump: radius must be positive");
    PlaneMap u;
    u.eval = [=](cplx x) -> cplx {
        cplx d = x - center;
        double s2 = std::norm(d) / (radius * radius);
        if (s2 >= 1) return 0;
        double p = (1 - s2) * (1 - s2);
        p *= p;
        return amplitude * p * (1 + (std::conj(tilt) * d).real() / radius);
    };
    u.bound = std::abs(amplitude) * (1 + std::abs(tilt));
    u.support_center = center;
    u.support_radius = radius;
    u.feature = radius / 4;
    u.radial = tilt == cplx(0, 0);
    u.edges = {{center, radius}};
    return u;
}

PlaneMap PlaneMap::xstar() {
    PlaneMap u;
    u.eval = [](cplx x) -> cplx {
        double r = std::abs(x);
        return r == 0 ? cplx(0, 0) : x / r;
    };
    u.bound = 1;
    u.far_kind = FarField::homogeneous;
    u.far_dir = [](cplx w) { return w; };
    u.singular = {{cplx(0, 0), 1}};
    u.radial = true;
    return u;
}

PlaneMap PlaneMap::spiral() {
    PlaneMap u;
    u.eval = [](cplx x) -> cplx {
        double r = std::abs(x);
        if (r >= 1) return 1;
        if (r == 0) return 1;
        return std::polar(1.0, 1 / r - 1);
    };
    u.bound = 1;
    u.far_constant = 1;
    u.support_radius = 1;
    u.singular = {{cplx(0, 0), 0}};
    u.feature = 0.25;
    u.feature_at = [](cplx x) { return std::min(0.25, 0.5 * std::norm(x)); };
    u.radial = true;
    return u;
}

PlaneMap PlaneMap::add(const PlaneMap& a, const PlaneMap& b) {
    PlaneMap u;
    u.eval = [ea = a.eval, eb = b.eval](cplx x) { return ea(x) + eb(x); };
    u.bound = a.bound + b.bound;
    if (a.far_kind == FarField::homogeneous && b.far_kind == FarField::homogeneous)
        throw InvalidArgument("PlaneMap::add: at most one homogeneous far field");
    if (a.far_kind == FarField::constant && b.far_kind == FarField::constant) {
        u.far_constant = a.far_constant + b.far_constant;
    } else {
        const PlaneMap& h = a.far_kind == FarField::homogeneous ? a : b;
        const PlaneMap& c = a.far_kind == FarField::homogeneous ? b : a;
        u.far_kind = FarField::homogeneous;
        u.far_dir = [fd = h.far_dir, k = c.far_constant](cplx w) { return fd(w) + k; };
    }
    // bounding disc of the two supports
    if (a.support_radius == 0 && b.support_radius == 0) {
        u.support_center = a.support_center;
    } else if (a.support_radius == 0 || b.support_radius == 0) {
        const PlaneMap& s = a.support_radius > 0 ? a : b;
        u.support_center = s.support_center;
        u.support_radius = s.support_radius;
    } else {
        double d = std::abs(a.support_center - b.support_center);
        if (d + b.support_radius <= a.support_radius) {
            u.support_center = a.support_center;
            u.support_radius = a.support_radius;
        } else if (d + a.support_radius <= b.support_radius) {
            u.support_center = b.support_center;
            u.support_radius = b.support_radius;
        } else {
            double R = 0.5 * (d + a.support_radius + b.support_radius);
            cplx dir = (b.support_center - a.support_center) / d;
            u.support_center = a.support_center + dir * (R - a.support_radius);
            u.support_radius = R;
        }
    }
    if (u.far_kind == FarField::homogeneous) u.support_center = 0;
    u.edges = a.edges;
    u.edges.insert(u.edges.end(), b.edges.begin(), b.edges.end());
    u.singular = a.singular;
    u.singular.insert(u.singular.end(), b.singular.begin(), b.singular.end());
    u.feature = std::min(a.feature, b.feature);
    if (a.feature_at || b.feature_at) {
        u.feature_at = [a, b](cplx x) { return std::min(a.local_feature(x), b.local_feature(x)); };
    }
    u.radial = a.radial && b.radial &&
               (a.support_radius == 0 || b.support_radius == 0 || a.support_center == b.support_center);
    return u;
}

// ---------------------------------------------------------------------------
// Poisson extension

ExtensionSample poisson_sample(const PlaneMap& u, const Vec3& X, bool with_grad) {
    if (!(X.z > 0)) throw DomainViolation("poisson_extend: x3 must be positive");
    const double x3 = X.z;
    const cplx x(X.x, X.y);
    const cplx ux = u(x);
    const double g2 = gamma_n(2);
    ExtensionSample out{ux, {cplx(0, 0), cplx(0, 0), cplx(0, 0)}};

    const bool cst = u.far_kind == FarField::constant;
    if (cst && u.support_radius == 0) {
        out.value = u.far_constant;
        return out;
    }
    const double h = u.local_feature(x);
    const double s0 = 0.25 * std::min(x3, h);

    // angular rule
    std::vector<double> phi, wphi;
    bool outside = false;
    if (cst) {
        double dc = std::abs(x - u.support_center);
        if (dc >= u.support_radius) {
            outside = true;
            double beta = std::asin(std::min(1.0, u.support_radius / dc));
            double pc = std::arg(u.support_center - x);
            // cone panels, split at tangent directions of the edge circles
            std::vector<double> br;
            for (int p = 0; p <= 8; ++p) br.push_back(-beta + 2 * beta * p / 8);
            for (const auto& [c, R] : u.edges) {
                double dd = std::abs(c - x);
                if (dd <= R) continue;
                double bc = std::asin(R / dd), ac = std::remainder(std::arg(c - x) - pc, 2 * kPi);
                for (double t : {ac - bc, ac, ac + bc})
                    if (t > -beta && t < beta) br.push_back(t);
            }
            sort_unique(br);
            const GL& g = gl8();
            for (std::size_t p = 0; p + 1 < br.size(); ++p) {
                double a = pc + br[p], len = br[p + 1] - br[p];
                for (std::size_t k = 0; k < g.x.size(); ++k) {
                    phi.push_back(a + len * g.x[k]);
                    wphi.push_back(len * g.w[k]);
                }
            }
        }
    }
    if (!outside) {
        std::vector<double> dirs, w0s;
        for (const SingularPoint& s : u.singular) {
            double dist = std::abs(s.z - x);
            if (dist == 0) continue;
            dirs.push_back(std::arg(s.z - x));
            w0s.push_back(1e-6 * std::clamp(0.5 * x3 / dist, 1e-9, kPi / 8));
        }
        std::vector<double> tang;
        for (const auto& [c, R] : u.edges) {
            double dd = std::abs(c - x);
            if (dd <= R) continue;
            double bc = std::asin(R / dd), ac = std::arg(c - x);
            tang.insert(tang.end(), {ac - bc, ac, ac + bc});
        }
        if (dirs.empty() && !tang.empty()) {
            std::vector<double> br;
            for (int p = 0; p <= 16; ++p) br.push_back(2 * kPi * p / 16);
            for (double t : tang) {
                t = std::fmod(t, 2 * kPi);
                br.push_back(t < 0 ? t + 2 * kPi : t);
            }
            sort_unique(br);
            const GL& g = gl8();
            for (std::size_t p = 0; p + 1 < br.size(); ++p) {
                double len = br[p + 1] - br[p];
                for (std::size_t k = 0; k < g.x.size(); ++k) {
                    phi.push_back(br[p] + len * g.x[k]);
                    wphi.push_back(len * g.w[k]);
                }
            }
        } else {
            angle_rule(dirs, w0s, 64, phi, wphi);
        }
    }

    const GL& g = gl8();
    const GL& gt = gl16();
    cplx acc0 = 0, acc1x = 0, acc1y = 0, acc3 = 0;
    auto kernels = [&](double rho, double& k0, double& k1, double& k3) {
        double q = rho * rho + x3 * x3;
        double sq = std::sqrt(q);
        double q25 = q * q * sq;
        k0 = x3 * rho / (q * sq);
        k1 = 3 * x3 * rho * rho / q25;
        k3 = rho * (rho * rho - 2 * x3 * x3) / q25;
    };
    std::vector<double> pts;
    for (std::size_t ip = 0; ip < phi.size(); ++ip) {
        cplx om = std::polar(1.0, phi[ip]);
        cplx s0acc = 0, s1acc = 0, s3acc = 0;
        auto panel = [&](double p, double q) {
            double len = q - p;
            for (std::size_t k = 0; k < g.x.size(); ++k) {
                double rho = p + len * g.x[k];
                double k0, k1, k3;
                kernels(rho, k0, k1, k3);
                cplx d = u(x + rho * om) - ux;
                double w = len * g.w[k];
                s0acc += w * k0 * d;
                s1acc += w * k1 * d;
                s3acc += w * k3 * d;
            }
        };
        pts.clear();
        if (cst) {
            double r1, r2;
            cplx dconst = u.far_constant - ux;
            // analytic pieces where u(y) = far constant; in t = atan(rho/x3)
            auto sc = [&](double rho, double& s, double& c) {
                double n = std::hypot(rho, x3);
                s = rho / n;
                c = x3 / n;
            };
            if (ray_disc(x, om, u.support_center, u.support_radius, r1, r2)) {
                fill_panels(pts, r1, r2, [h](double) { return h; }, s0);
                edge_breaks(pts, x, om, u, r1, r2);
                sort_unique(pts);
                for (std::size_t i = 0; i + 1 < pts.size(); ++i) panel(pts[i], pts[i + 1]);
                double sa, ca, sb, cb;
                sc(r1, sa, ca);
                sc(r2, sb, cb);
                double one_m_sb = cb * cb / (1 + sb);
                double S0 = sa * sa / (1 + ca) + cb;
                double S1 = sa * sa * sa + one_m_sb * (1 + sb + sb * sb);
                double S3 = -ca * sa * sa + cb * sb * sb;
                s0acc += dconst * S0;
                s1acc += dconst * S1 / x3;
                s3acc += dconst * S3 / x3;
            } else {
                s0acc += dconst;
                s1acc += dconst / x3;
            }
        } else {
            double roi = 2 * (std::abs(x) + u.support_radius) + h;
            fill_panels(pts, 0, roi, [&](double p) { return u.local_feature(x + p * om); }, s0);
            double p = roi, pe = 64 * std::max({x3, roi, 1.0});
            while (p < pe) {
                p = std::min(2 * p, pe);
                pts.push_back(p);
            }
            singular_breaks(pts, x, om, u.singular, pe);
            edge_breaks(pts, x, om, u, 0, pe);
            sort_unique(pts);
            for (std::size_t i = 0; i + 1 < pts.size(); ++i) panel(pts[i], pts[i + 1]);
            // tail rho = pe / s, s in (0, 1]
            for (std::size_t k = 0; k < gt.x.size(); ++k) {
                double s = gt.x[k];
                double rho = pe / s;
                double k0, k1, k3;
                kernels(rho, k0, k1, k3);
                cplx d = u(x + rho * om) - ux;
                double w = gt.w[k] * pe / (s * s);
                s0acc += w * k0 * d;
                s1acc += w * k1 * d;
                s3acc += w * k3 * d;
            }
        }
        acc0 += wphi[ip] * s0acc;
        acc1x += wphi[ip] * om.real() * s1acc;
        acc1y += wphi[ip] * om.imag() * s1acc;
        acc3 += wphi[ip] * s3acc;
    }
    out.value = ux + g2 * acc0;
    if (with_grad) out.grad = {g2 * acc1x, g2 * acc1y, g2 * acc3};
    return out;
}

cplx poisson_extend(const PlaneMap& u, const Vec3& X) { return poisson_sample(u, X, false).value; }

Grad3 poisson_extend_gradient(const PlaneMap& u, const Vec3& X) { return poisson_sample(u, X, true).grad; }

cplx closed_xstar_ext(const Vec3& X) {
    double r = norm(X);
    if (r == 0) throw DomainViolation("closed_xstar_ext: X = 0");
    return cplx(X.x, X.y) / (r + X.z);
}

// ---------------------------------------------------------------------------
// circle

cplx disc_extend(const CircleSample& g, cplx z) {
    if (!(std::abs(z) < 1)) throw DomainViolation("disc_extend: |z| >= 1");
    std::size_t n = g.n();
    cplx s = 0;
    for (std::size_t k = 0; k < n; ++k) {
        cplx sig = std::polar(1.0, 2 * kPi * k / n);
        s += g.values[k] / std::norm(sig - z);
    }
    return (1 - std::norm(z)) * s / static_cast<double>(n);
}

namespace {

std::vector<cplx> dft(const std::vector<cplx>& v) {
    std::size_t n = v.size();
    std::vector<cplx> c(n);
    std::vector<cplx> tw(n);
    for (std::size_t k = 0; k < n; ++k) tw[k] = std::polar(1.0, -2 * kPi * k / n);
    for (std::size_t k = 0; k < n; ++k) {
        cplx s = 0;
        for (std::size_t j = 0; j < n; ++j) s += v[j] * tw[(k * j) % n];
        c[k] = s / static_cast<double>(n);
    }
    return c;
}

int signed_mode(std::size_t k, std::size_t n) {
    return k <= n / 2 ? static_cast<int>(k) : static_cast<int>(k) - static_cast<int>(n);
}

void check_resolved(const std::vector<cplx>& c) {
    std::size_t n = c.size();
    double tot = 0, hi = 0;
    for (std::size_t k = 0; k < n; ++k) {
        double e = std::norm(c[k]);
        tot += e;
        if (std::abs(signed_mode(k, n)) > static_cast<int>(n) / 4) hi += e;
    }
    if (hi > 1e-12 * std::max(tot, 1e-300))
        throw Undersampled("circle sample: high-frequency content above 1e-12 of total");
}

}  // namespace

double circle_energy_spectral(const CircleSample& g) {
    std::vector<cplx> c = dft(g.values);
    long double s = 0;
    for (std::size_t k = 0; k < c.size(); ++k) s += std::abs(signed_mode(k, c.size())) * std::norm(c[k]);
    return kPi * static_cast<double>(s);
}

double circle_energy_numeric(const CircleSample& g, const std::vector<double>& deriv_sq) {
    std::size_t n = g.n();
    std::vector<double> dsq = deriv_sq;
    if (dsq.empty()) {
        std::vector<cplx> c = dft(g.values);
        check_resolved(c);
        dsq.assign(n, 0);
        for (std::size_t j = 0; j < n; ++j) {
            cplx d = 0;
            for (std::size_t k = 0; k < n; ++k) {
                int m = signed_mode(k, n);
                if (2 * static_cast<std::size_t>(std::abs(m)) == n) continue;
                d += cplx(0, m) * c[k] * std::polar(1.0, 2 * kPi * m * static_cast<double>(j) / n);
            }
            dsq[j] = std::norm(d);
        }
    } else if (dsq.size() != n) {
        throw InvalidArgument("circle_energy_numeric: derivative samples size mismatch");
    }
    std::vector<double> inv(n, 0);
    for (std::size_t m = 1; m < n; ++m) {
        double s = std::sin(kPi * m / n);
        inv[m] = 1 / (4 * s * s);
    }
    long double tot = 0;
    for (std::size_t k = 0; k < n; ++k) {
        double row = dsq[k];
        for (std::size_t j = 0; j < n; ++j) {
            if (j == k) continue;
            std::size_t m = j > k ? j - k : j + n - k;
            row += std::norm(g.values[k] - g.values[j]) * inv[m];
        }
        tot += row;
    }
    double h = 2 * kPi / n;
    return gamma_n(1) / 4 * h * h * static_cast<double>(tot);
}

double circle_energy_numeric(const BlaschkeProduct& B, int n) {
    CircleSample s = boundary_trace(B, n);
    std::vector<double> d(n);
    for (int k = 0; k < n; ++k) d[k] = derivative_sq(B, std::polar(1.0, 2 * kPi * k / n));
    return circle_energy_numeric(s, d);
}

double circle_energy_numeric(const BlaschkeProduct& B) {
    int n = 64 * (B.factors() + 1);
    double prev = circle_energy_numeric(B, n);
    for (; n <= (1 << 14); n *= 2) {
        double cur = circle_energy_numeric(B, 2 * n);
        if (std::abs(cur - prev) <= 1e-11 * std::max(1.0, std::abs(cur))) return cur;
        prev = cur;
    }
    throw Undersampled("circle_energy_numeric: no agreement up to 2^15 samples");
}

double disc_dirichlet_energy(const BlaschkeProduct& B) {
    std::vector<double> breaks;
    for (cplx a : B.zeros())
        if (std::abs(a) > 0) breaks.push_back(std::arg(a));
    IntegrationResult r =
        adaptive_disc([&](cplx z) { return derivative_sq(B, z); }, {1e-12, 1e-11, 40}, breaks);
    return r.value;
}

// ---------------------------------------------------------------------------
// fractional energy on the plane

namespace {

struct FracSetup {
    cplx o;
    double Rx;
    bool homogeneous;
    bool singular_center;
};

// raw double integral; `phi == nullptr` means phi = u
double frac_core(const PlaneMap& u, const PlaneMap* phi, const FracOptions& opt, FracEnergyResult& res) {
    if (!(opt.R > 0)) throw InvalidArgument("frac_energy_plane: R must be positive");
    FracSetup st{};
    st.homogeneous = u.far_kind == FarField::homogeneous;
    if (phi) {
        if (st.homogeneous || phi->far_kind != FarField::constant)
            throw InvalidArgument("half_laplacian_pairing: constant far fields required");
        if (!u.singular.empty() || !phi->singular.empty())
            throw InvalidArgument("half_laplacian_pairing: singular points not supported");
    }
    for (const SingularPoint& s : u.singular) {
        if (std::abs(s.z) >= opt.R) continue;
        if (!s.degree) throw PreconditionViolation("frac_energy_plane: singular point without degree data");
    }
    auto inside = [&](cplx c, double r) { return std::abs(c) + r <= opt.R * (1 + 1e-12); };
    if (!inside(u.support_center, u.support_radius) || (phi && !inside(phi->support_center, phi->support_radius)))
        throw InvalidArgument("frac_energy_plane: support must lie in Omega");
    if (st.homogeneous) {
        st.o = 0;
        st.Rx = opt.R;
    } else {
        if (phi) {
            // bounding disc of both supports
            PlaneMap a = u, b = *phi;
            a.far_kind = b.far_kind = FarField::constant;
            PlaneMap s = PlaneMap::add(a, b);
            st.o = s.support_center;
            st.Rx = s.support_radius;
        } else {
            st.o = u.support_center;
            st.Rx = u.support_radius;
        }
        if (st.Rx == 0) return 0;
    }
    for (const SingularPoint& s : u.singular) {
        if (std::abs(s.z - st.o) > 1e-12 * st.Rx)
            throw InvalidArgument("frac_energy_plane: singular points must sit at the centre of the domain");
        st.singular_center = true;
    }
    const bool same = phi == nullptr;
    const PlaneMap& v = same ? u : *phi;
    const double scale = u.bound * v.bound / st.Rx;
    Tolerance tol{1e-11 * std::max(scale, 1e-300), 1e-9, 40};

    auto inner = [&](cplx x) -> double {
        cplx ux = u(x), vx = same ? ux : v(x);
        double h = std::min(u.local_feature(x), v.local_feature(x));
        std::vector<double> ph, wph;
        if (st.singular_center && std::abs(x - st.o) > 0) {
            double w0 = kPi / 256;
            angle_rule({std::arg(st.o - x)}, {w0}, opt.n_omega, ph, wph);
        } else {
            angle_rule({}, {}, opt.n_omega, ph, wph);
        }
        long double tot = 0;
        for (std::size_t ip = 0; ip < ph.size(); ++ip) {
            cplx om = std::polar(1.0, ph[ip]);
            double r1, rE;
            if (!ray_disc(x, om, st.o, st.Rx, r1, rE)) rE = 0;
            double end = st.homogeneous ? opt.R_out : rE;
            auto f = [&](double rho) {
                cplx y = x + rho * om;
                double wt = rho > rE ? 2 : 1;
                double val;
                if (same) val = std::norm(u(y) - ux);
                else val = (std::conj(u(y) - ux) * (v(y) - vx)).real();
                return wt * val / (rho * rho);
            };
            std::vector<double> pts;
            fill_panels(pts, 0, rE,
                        [&](double p) {
                            cplx y = x + p * om;
                            return same ? u.local_feature(y) : std::min(u.local_feature(y), v.local_feature(y));
                        },
                        0.25 * h);
            if (st.homogeneous) {
                double p = std::max(rE, h);
                while (p < end) {
                    p = std::min(2 * p, end);
                    pts.push_back(p);
                }
            }
            singular_breaks(pts, x, om, u.singular, end);
            sort_unique(pts);
            IntegrateOptions io;
            io.breakpoints.assign(pts.begin(), pts.end());
            io.max_intervals = 600;
            IntegrationResult r = end > 0 ? adaptive_integrate(f, 0, end, tol, io) : IntegrationResult{};
            double val = r.value;
            if (!st.homogeneous) {
                cplx du = u.far_constant - ux, dv = v.far_constant - vx;
                if (rE > 0) val += 2 * (std::conj(du) * dv).real() / rE;
            } else {
                val += 2 * std::norm(u.far_dir(om) - ux) / opt.R_out;
            }
            tot += wph[ip] * val;
        }
        return static_cast<double>(tot);
    };

    const bool radial = u.radial && v.radial && (same || u.support_center == v.support_center);
    const int n_theta = radial ? 1 : 24;
    // integral of inner() over the annulus r in [ra, rb] about o
    auto annulus = [&](double ra, double rb, int panels) -> double {
        const GL& g = gl12();
        std::vector<std::pair<double, double>> nodes;  // (r, weight)
        for (int p = 0; p < panels; ++p) {
            double a = ra + (rb - ra) * p / panels, len = (rb - ra) / panels;
            for (std::size_t k = 0; k < g.x.size(); ++k) nodes.push_back({a + len * g.x[k], len * g.w[k]});
        }
        std::size_t N = nodes.size() * n_theta;
        std::vector<double> vals = parallel_map<double>(N, [&](std::size_t i) {
            auto [r, w] = nodes[i / n_theta];
            double th = 2 * kPi * (static_cast<double>(i % n_theta) + 0.5) / n_theta;
            return w * r * (2 * kPi / n_theta) * inner(st.o + std::polar(r, th));
        });
        long double s = 0;
        for (double x : vals) s += x;
        return static_cast<double>(s);
    };

    double total = 0;
    if (!st.singular_center) {
        total = annulus(0, st.Rx, 4);
    } else {
        double S = 0, T_prev = 0;
        int up = 0;
        bool done = false;
        for (int k = 0; k < opt.max_levels; ++k) {
            double rb = st.Rx * std::ldexp(1.0, -k), ra = rb / 2;
            double A = annulus(ra, rb, 1);
            res.level_contrib.push_back(A);
            S += A;
            if (k >= 1) {
                double Ap = res.level_contrib[k - 1];
                double q = A / Ap;
                up = q >= 1 / 1.5 ? up + 1 : 0;
                if (up >= 3) {
                    res.divergent = true;
                    return std::numeric_limits<double>::infinity();
                }
                // Aitken estimate of the remainder of a geometrically decaying series
                double T = q < 1 ? S + A * A / (Ap - A) : S;
                if (k >= 6 && q < 1 && std::abs(T - T_prev) <= 1e-9 * std::abs(T)) {
                    S = T;
                    done = true;
                    break;
                }
                T_prev = T;
            }
        }
        if (!done) res.converged = false;
        total = S;
    }
    if (st.homogeneous) {
        double B = u.bound;
        res.tail_bound = gamma_n(2) / 4 * (kPi * opt.R * opt.R) * 2 * kPi * 8 * B * B / opt.R_out;
    }
    return total;
}

}  // namespace

FracEnergyResult frac_energy_plane(const PlaneMap& u, const FracOptions& opt) {
    FracEnergyResult res;
    double raw = frac_core(u, nullptr, opt, res);
    res.value = res.divergent ? raw : gamma_n(2) / 4 * raw;
    return res;
}

double half_laplacian_pairing(const PlaneMap& u, const PlaneMap& phi, const FracOptions& opt) {
    FracEnergyResult res;
    return gamma_n(2) / 2 * frac_core(u, &phi, opt, res);
}

// ---------------------------------------------------------------------------
// half-space Dirichlet energy

namespace {

double halfspace_core(const PlaneMap& u, const PlaneMap* phi) {
    const bool same = phi == nullptr;
    const PlaneMap& v = same ? u : *phi;
    if (u.far_kind != FarField::constant || v.far_kind != FarField::constant)
        throw InvalidArgument("halfspace_dirichlet_energy: constant far fields required");
    cplx o;
    double L;
    if (same) {
        o = u.support_center;
        L = u.support_radius;
    } else {
        PlaneMap s = PlaneMap::add(u, v);
        o = s.support_center;
        L = s.support_radius;
    }
    if (L == 0) return 0;
    const bool radial = u.radial && v.radial && (same || u.support_center == v.support_center);
    const int n_theta = radial ? 1 : 12;

    // r = L tan a, x3 = L tan b
    auto panels = [](std::vector<double> br, int n_per, std::vector<double>& x, std::vector<double>& w) {
        const GL& g = gl12();
        for (std::size_t i = 0; i + 1 < br.size(); ++i) {
            double len = br[i + 1] - br[i];
            for (int j = 0; j < n_per; ++j) {
                double a = br[i] + len * j / n_per, l = len / n_per;
                for (std::size_t k = 0; k < g.x.size(); ++k) {
                    x.push_back(a + l * g.x[k]);
                    w.push_back(l * g.w[k]);
                }
            }
        }
    };
    std::vector<double> av, aw, bv, bw;
    panels({0, std::atan(0.5), std::atan(1.0), std::atan(1.5), std::atan(3.0), kPi / 2}, 1, av, aw);
    panels({0, std::atan(0.02), std::atan(0.1), std::atan(0.4), std::atan(1.5), kPi / 2}, 1, bv, bw);
    std::size_t na = av.size(), nb = bv.size();
    std::size_t N = na * nb * n_theta;
    std::vector<double> vals = parallel_map<double>(N, [&](std::size_t i) {
        std::size_t ia = i / (nb * n_theta), ib = (i / n_theta) % nb, it = i % n_theta;
        double ta = std::tan(av[ia]), tb = std::tan(bv[ib]);
        double r = L * ta, x3 = L * tb;
        double jac = L * (1 + ta * ta) * aw[ia] * L * (1 + tb * tb) * bw[ib] * r * (2 * kPi / n_theta);
        double th = 2 * kPi * (it + 0.5) / n_theta;
        cplx x = o + std::polar(r, th);
        Vec3 X{x.real(), x.imag(), x3};
        Grad3 gu = poisson_sample(u, X, true).grad;
        double dotp = 0;
        if (same) {
            for (int j = 0; j < 3; ++j) dotp += std::norm(gu[j]);
        } else {
            Grad3 gv = poisson_sample(v, X, true).grad;
            for (int j = 0; j < 3; ++j) dotp += (std::conj(gu[j]) * gv[j]).real();
        }
        return jac * dotp;
    });
    long double s = 0;
    for (double x : vals) s += x;
    return static_cast<double>(s);
}

}  // namespace

double halfspace_dirichlet_energy(const PlaneMap& u) { return 0.5 * halfspace_core(u, nullptr); }

double halfspace_dirichlet_pairing(const PlaneMap& u, const PlaneMap& phi) { return halfspace_core(u, &phi); }

// ---------------------------------------------------------------------------
// half-ball energies

AnalyticField AnalyticField::vortex() {
    AnalyticField f;
    f.value = [](const Vec3& X) { return closed_xstar_ext(X); };
    f.grad = [](const Vec3& X) -> Grad3 {
        double r = norm(X);
        if (r == 0) throw DomainViolation("vortex gradient at X = 0");
        double s = r + X.z;
        cplx q(X.x, X.y);
        return {cplx(1, 0) / s - q * (X.x / r) / (s * s), cplx(0, 1) / s - q * (X.y / r) / (s * s),
                -q * (X.z / r + 1) / (s * s)};
    };
    f.homogeneous0 = true;
    return f;
}

AnalyticField AnalyticField::from_blaschke(const BlaschkeProduct& B) {
    AnalyticField f;
    f.value = [B](const Vec3& X) { return homogeneous_extension(B, X); };
    f.grad = [B](const Vec3& X) { return homogeneous_extension_grad(B, X); };
    f.homogeneous0 = true;
    return f;
}

AnalyticField AnalyticField::constant(cplx c) {
    AnalyticField f;
    f.value = [c](const Vec3&) { return c; };
    f.grad = [](const Vec3&) { return Grad3{cplx(0, 0), cplx(0, 0), cplx(0, 0)}; };
    f.homogeneous0 = true;
    return f;
}

namespace {

double grad_sq(const Grad3& g) { return std::norm(g[0]) + std::norm(g[1]) + std::norm(g[2]); }

}  // namespace

double dirichlet_energy_halfball(const AnalyticField& v, double r) {
    if (!(r > 0)) throw InvalidArgument("dirichlet_energy_halfball: r must be positive");
    if (r > 1) throw DomainViolation("dirichlet_energy_halfball: r > 1");
    if (!v.homogeneous0) return dirichlet_energy_halfball_volume(v, r);
    auto f = [&](cplx z) { return grad_sq(v.grad(stereo(z))) * stereo_density(z); };
    IntegrationResult res = adaptive_disc(f, {1e-12, 1e-12, 40});
    return 0.5 * r * res.value;
}

double dirichlet_energy_halfball_rule(const AnalyticField& v, double r, int n_r, int n_t) {
    if (r > 1) throw DomainViolation("dirichlet_energy_halfball: r > 1");
    if (!v.homogeneous0) throw InvalidArgument("dirichlet_energy_halfball_rule: 0-homogeneous field required");
    QuadRule q = hemisphere_rule(n_r, n_t);
    long double s = 0;
    for (std::size_t i = 0; i < q.size(); ++i) s += q.weights[i] * grad_sq(v.grad(q.nodes[i]));
    return 0.5 * r * static_cast<double>(s);
}

double dirichlet_energy_halfball_volume(const AnalyticField& v, double r) {
    if (!(r > 0)) throw InvalidArgument("dirichlet_energy_halfball: r must be positive");
    if (r > 1) throw DomainViolation("dirichlet_energy_halfball: r > 1");
    QuadRule q = hemisphere_rule(64, 128);
    const GL& g = gl16();
    long double s = 0;
    for (std::size_t k = 0; k < g.x.size(); ++k) {
        double rho = r * g.x[k];
        long double shell = 0;
        for (std::size_t i = 0; i < q.size(); ++i) shell += q.weights[i] * grad_sq(v.grad(q.nodes[i] * rho));
        s += r * g.w[k] * rho * rho * shell;
    }
    return 0.5 * static_cast<double>(s);
}

// ---------------------------------------------------------------------------

L2BoundsReport extension_l2_bounds_check(const PlaneMap& u, const std::vector<double>& heights) {
    if (u.far_kind != FarField::constant || u.far_constant != cplx(0, 0))
        throw InvalidArgument("extension_l2_bounds_check: compactly supported map required");
    L2BoundsReport rep;
    rep.c_theory = 1 / (8 * kPi);
    const cplx o = u.support_center;
    const double L = u.support_radius;
    const int n_theta = u.radial ? 1 : 16;
    // norms of u over its support
    double l2 = 0, l1 = 0;
    if (L > 0) {
        const GL& g = gl12();
        int nt = 48;
        for (int p = 0; p < 4; ++p) {
            for (std::size_t k = 0; k < g.x.size(); ++k) {
                double r = L * (p + g.x[k]) / 4, w = L / 4 * g.w[k];
                for (int t = 0; t < nt; ++t) {
                    cplx val = u(o + std::polar(r, 2 * kPi * (t + 0.5) / nt));
                    l2 += w * r * (2 * kPi / nt) * std::norm(val);
                    l1 += w * r * (2 * kPi / nt) * std::abs(val);
                }
            }
        }
    }
    for (double x3 : heights) {
        if (!(x3 > 0)) throw InvalidArgument("extension_l2_bounds_check: heights must be positive");
        L2BoundRow row{x3, 0, l2, l1, 0, true, true};
        if (L > 0) {
            double Ls = std::max(L, x3);
            std::vector<double> br = {0, std::atan(0.5 * L / Ls), std::atan(L / Ls), std::atan(2 * L / Ls),
                                      std::atan(1.0), std::atan(4.0), kPi / 2};
            sort_unique(br);
            const GL& g = gl12();
            std::vector<std::pair<double, double>> nodes;
            for (std::size_t i = 0; i + 1 < br.size(); ++i) {
                double len = br[i + 1] - br[i];
                for (std::size_t k = 0; k < g.x.size(); ++k) nodes.push_back({br[i] + len * g.x[k], len * g.w[k]});
            }
            std::size_t N = nodes.size() * n_theta;
            std::vector<double> vals = parallel_map<double>(N, [&](std::size_t i) {
                auto [a, w] = nodes[i / n_theta];
                double ta = std::tan(a), r = Ls * ta;
                double th = 2 * kPi * (static_cast<double>(i % n_theta) + 0.5) / n_theta;
                cplx x = o + std::polar(r, th);
                double jac = Ls * (1 + ta * ta) * w * r * (2 * kPi / n_theta);
                return jac * std::norm(poisson_extend(u, {x.real(), x.imag(), x3}));
            });
            long double s = 0;
            for (double v : vals) s += v;
            row.ext_l2_sq = static_cast<double>(s);
        }
        double slack = 1e-9 * std::max(l2, 1e-300);
        row.l2_bound_ok = row.ext_l2_sq <= l2 + slack;
        row.c_empirical = l1 > 0 ? row.ext_l2_sq * x3 * x3 / (l1 * l1) : 0;
        row.l1_bound_ok = row.ext_l2_sq <= rep.c_theory * l1 * l1 / (x3 * x3) * (1 + 1e-9) + 1e-300;
        rep.all_ok = rep.all_ok && row.l2_bound_ok && row.l1_bound_ok;
        rep.rows.push_back(row);
    }
    return rep;
}

MonotoneReport monotone_density(const BlaschkeProduct& B, const std::vector<double>& radii) {
    MonotoneReport rep;
    AnalyticField f = AnalyticField::from_blaschke(B);
    std::vector<double> rs = radii;
    std::sort(rs.begin(), rs.end());
    for (double r : rs) {
        if (!(r > 0) || r > 1) throw InvalidArgument("monotone_density: radii must lie in (0, 1]");
        rep.radii.push_back(r);
        rep.density.push_back(dirichlet_energy_halfball_volume(f, r) / r);
    }
    for (std::size_t i = 1; i < rep.density.size(); ++i)
        if (rep.density[i] < rep.density[i - 1] - 1e-9 * std::max(1.0, std::abs(rep.density[i])))
            rep.nondecreasing = false;
    rep.theta = rep.density.empty() ? 0 : rep.density.front();
    return rep;
}

void write_extension_slice_csv(std::ostream& os, const PlaneMap& u, double x2, double x1a, double x1b, int n1,
                               double x3a, double x3b, int n3) {
    if (n1 < 1 || n3 < 1) throw InvalidArgument("write_extension_slice_csv: need n1, n3 >= 1");
    if (!(x3a > 0) || !(x3b >= x3a)) throw DomainViolation("write_extension_slice_csv: need 0 < x3a <= x3b");
    os << "x1,x2,x3,v1,v2\n";
    os << std::setprecision(12);
    for (int k = 0; k < n3; ++k) {
        double x3 = n3 == 1 ? x3a : x3a + (x3b - x3a) * k / (n3 - 1);
        for (int i = 0; i < n1; ++i) {
            double x1 = n1 == 1 ? x1a : x1a + (x1b - x1a) * i / (n1 - 1);
            cplx v = poisson_extend(u, {x1, x2, x3});
            os << x1 << ',' << x2 << ',' << x3 << ',' << v.real() << ',' << v.imag() << '\n';
        }
    }
}

}  // namespace halfharm
