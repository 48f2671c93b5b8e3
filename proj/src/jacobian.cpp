#include "halfharm/jacobian.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "halfharm/conformal.hpp"
#include "halfharm/errors.hpp"
#include "halfharm/parallel.hpp"
#include "halfharm/quadrature.hpp"

namespace halfharm {

Vec3 wedge(const Grad3& g) {
    Vec3 a = component(g, 0), b = component(g, 1);
    return cross(a, b) * 2.0;
}

namespace {

constexpr int kPerm[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};

// gradient on the Kuhn simplex sigma of a cell: steps along axes sigma[0], sigma[1], sigma[2]
template <class T, class Get>
std::array<T, 3> kuhn_grad(const int* sigma, double h, Get get) {
    std::array<T, 3> g{};
    int b = 0;
    T prev = get(0);
    for (int k = 0; k < 3; ++k) {
        b |= 1 << sigma[k];
        T cur = get(b);
        g[sigma[k]] = (cur - prev) / h;
        prev = cur;
    }
    return g;
}

double grad_sq(const Grad3& g) { return std::norm(g[0]) + std::norm(g[1]) + std::norm(g[2]); }

// graded breaks toward boundary points of the chart disc
void graded(const std::vector<double>& angles, double width, std::vector<double>& ang, std::vector<double>& rad) {
    for (double a : angles) ang.push_back(a);
    if (!(width > 0)) return;
    for (double d = width; d < 0.5; d *= 4) {
        rad.push_back(1 - d);
        for (double a : angles) {
            ang.push_back(a - d);
            ang.push_back(a + d);
        }
    }
}

double checked(const IntegrationResult& r, const char* what) {
    if (!r.converged) throw NumericalFailure(std::string(what) + ": quadrature did not converge");
    return r.value;
}

}  // namespace

std::vector<CellWedge> wedge_field(const HalfBallField& v) {
    const HalfBallGrid& g = *v.grid;
    std::vector<CellWedge> out(g.cells.size());
    for (std::size_t c = 0; c < g.cells.size(); ++c) {
        const auto& corner = g.cells[c].corner;
        Vec3 H;
        double gs = 0;
        for (const auto& s : kPerm) {
            Grad3 gr = kuhn_grad<cplx>(s, g.h, [&](int b) { return v.v[corner[b]]; });
            H += wedge(gr);
            gs += grad_sq(gr);
        }
        out[c] = {H / 6.0, gs / 6};
    }
    return out;
}

// ---------------------------------------------------------------------------
// tests

LipschitzTest LipschitzTest::constant(double c) {
    return {"const", [c](const Vec3&) { return c; }, [](const Vec3&) { return Vec3(); }, 0, {}};
}

LipschitzTest LipschitzTest::coordinate(int j) {
    if (j < 0 || j > 2) throw InvalidArgument("LipschitzTest::coordinate: j in {0, 1, 2}");
    const char* names[3] = {"x1", "x2", "x3"};
    return {names[j], [j](const Vec3& x) { return x[j]; },
            [j](const Vec3&) {
                Vec3 e;
                e[j] = 1;
                return e;
            },
            1, {}};
}

LipschitzTest LipschitzTest::distance(const Vec3& c) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "|x-(%.4g,%.4g,%.4g)|", c.x, c.y, c.z);
    return {buf, [c](const Vec3& x) { return norm(x - c); },
            [c](const Vec3& x) {
                double r = norm(x - c);
                return r > 0 ? (x - c) / r : Vec3();
            },
            1, {c}};
}

double LipschitzTest::sampled_lip(int pairs, unsigned seed) const {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1, 1);
    auto draw = [&] {
        for (;;) {
            Vec3 x(u(rng), u(rng), std::abs(u(rng)));
            if (norm(x) <= 1) return x;
        }
    };
    double best = 0;
    for (int i = 0; i < pairs; ++i) {
        Vec3 x = draw(), y = draw();
        double d = norm(x - y);
        if (d > 0) best = std::max(best, std::abs(f(x) - f(y)) / d);
    }
    return best;
}

// ---------------------------------------------------------------------------
// boundary data

cplx BoundaryField::chart(cplx z) const { return hemi(stereo(z)); }

BoundaryField BoundaryField::from_field(const AnalyticField& u, const AtomMeasure& atoms) {
    BoundaryField g;
    g.hemi = u.value;
    g.grad = u.grad;
    g.flat = [v = u.value](cplx x) { return v(Vec3(x.real(), x.imag(), 0)); };
    g.atoms = atoms;
    return g;
}

BoundaryField BoundaryField::from_blaschke(const BlaschkeProduct& B) {
    BoundaryField g;
    g.hemi = [B](const Vec3& x) { return homogeneous_extension(B, x); };
    g.grad = [B](const Vec3& x) { return homogeneous_extension_grad(B, x); };
    g.flat = [B](cplx x) {
        double r = std::abs(x);
        if (r == 0) throw DomainViolation("BoundaryField: flat trace at the atom");
        return eval(B, x / r);
    };
    if (B.factors() > 0) g.atoms.atoms = {{cplx(0, 0), degree_of(B)}};
    return g;
}

void BoundaryField::check_atoms() const {
    atoms.validate();
    double sep = 1;
    for (std::size_t i = 0; i < atoms.atoms.size(); ++i)
        for (std::size_t j = 0; j < i; ++j) sep = std::min(sep, std::abs(atoms.atoms[i].a - atoms.atoms[j].a));
    if (sep < 1e-3) throw PreconditionViolation("BoundaryField: atoms closer than the check resolution 1e-3");
    for (const Atom& a : atoms.atoms) {
        double m = std::abs(a.a);
        if (m > 1 - 1e-3) continue;
        double rho = std::min({0.25 * sep, 0.5 * (1 - m), 0.05});
        int w = winding_number_adaptive([&](double t) { return flat(a.a + std::polar(rho, t)); }, 64);
        if (w != a.d)
            throw PreconditionViolation("BoundaryField: atom degree " + std::to_string(a.d) + " but the trace winds " +
                                        std::to_string(w));
    }
}

AnalyticField vortex_product(const AtomMeasure& atoms) {
    atoms.validate();
    AnalyticField f;
    auto factor = [](const Atom& at, const Vec3& X, cplx& val, Grad3& grad) {
        Vec3 Y(X.x - at.a.real(), X.y - at.a.imag(), X.z);
        double r = norm(Y);
        if (r == 0) throw DomainViolation("vortex_product: evaluated at an atom");
        double s = r + Y.z;
        cplx q(Y.x, Y.y);
        cplx V = q / s;
        Grad3 dV = {cplx(1, 0) / s - q * (Y.x / r) / (s * s), cplx(0, 1) / s - q * (Y.y / r) / (s * s),
                    -q * (Y.z / r + 1) / (s * s)};
        int k = std::abs(at.d);
        if (at.d < 0) {
            V = std::conj(V);
            for (auto& c : dV) c = std::conj(c);
        }
        // V^k and k V^{k-1} dV
        cplx p = 1;
        for (int i = 0; i + 1 < k; ++i) p *= V;
        val = p * V;
        for (int j = 0; j < 3; ++j) grad[j] = static_cast<double>(k) * p * dV[j];
        if (k == 0) {
            val = 1;
            grad = {};
        }
    };
    f.value = [atoms, factor](const Vec3& X) {
        cplx v = 1;
        for (const Atom& a : atoms.atoms) {
            cplx fv;
            Grad3 g;
            factor(a, X, fv, g);
            v *= fv;
        }
        return v;
    };
    f.grad = [atoms, factor](const Vec3& X) {
        std::size_t n = atoms.atoms.size();
        std::vector<cplx> val(n);
        std::vector<Grad3> gr(n);
        for (std::size_t i = 0; i < n; ++i) factor(atoms.atoms[i], X, val[i], gr[i]);
        Grad3 out{};
        for (std::size_t i = 0; i < n; ++i) {
            cplx rest = 1;
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) rest *= val[j];
            for (int c = 0; c < 3; ++c) out[c] += rest * gr[i][c];
        }
        return out;
    };
    f.homogeneous0 = atoms.atoms.empty() || (atoms.atoms.size() == 1 && atoms.atoms[0].a == cplx(0, 0));
    return f;
}

// ---------------------------------------------------------------------------
// pairings

namespace {

struct P1Pairing {
    double pairing = 0;
    double lip = 0;  // largest simplex gradient of the interpolated test
};

P1Pairing p1_pairing(const HalfBallField& v, const LipschitzTest& phi) {
    const HalfBallGrid& g = *v.grid;
    std::vector<double> ph(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) ph[i] = phi(g.pos[i]);
    const double vol = g.h * g.h * g.h / 6;
    long double s = 0;
    double lip = 0;
    for (const auto& cell : g.cells) {
        for (const auto& sg : kPerm) {
            Grad3 gv = kuhn_grad<cplx>(sg, g.h, [&](int b) { return v.v[cell.corner[b]]; });
            std::array<double, 3> gp = kuhn_grad<double>(sg, g.h, [&](int b) { return ph[cell.corner[b]]; });
            Vec3 H = wedge(gv);
            s += vol * (H.x * gp[0] + H.y * gp[1] + H.z * gp[2]);
            lip = std::max(lip, std::sqrt(gp[0] * gp[0] + gp[1] * gp[1] + gp[2] * gp[2]));
        }
    }
    return {static_cast<double>(s), lip};
}

}  // namespace

double pairing_volume(const HalfBallField& v, const LipschitzTest& phi) { return p1_pairing(v, phi).pairing; }

double p1_energy(const HalfBallField& v) {
    const HalfBallGrid& g = *v.grid;
    const double vol = g.h * g.h * g.h / 6;
    long double s = 0;
    for (const auto& cell : g.cells)
        for (const auto& sg : kPerm)
            s += vol * 0.5 * grad_sq(kuhn_grad<cplx>(sg, g.h, [&](int b) { return v.v[cell.corner[b]]; }));
    return static_cast<double>(s);
}

double pairing_volume(const AnalyticField& v, const LipschitzTest& phi, const AtomMeasure& singular, double tol) {
    std::vector<double> angles, radii;
    AtomMeasure marks = singular;
    for (const Vec3& c : phi.kinks)
        if (c.z == 0 && std::abs(cplx(c.x, c.y)) > 0) marks.atoms.push_back({cplx(c.x, c.y), 0});
    for (const Atom& a : marks.atoms) {
        double m = std::abs(a.a);
        if (m > 0) {
            angles.push_back(std::arg(a.a));
            radii.push_back(m);
        }
    }
    auto shell = [&](double rho) {
        if (rho == 0) return 0.0;
        double width = 0;
        for (double m : radii) width = width == 0 ? std::abs(rho - m) : std::min(width, std::abs(rho - m));
        std::vector<double> ang, rad;
        graded(angles, radii.empty() ? 0.0 : 0.5 * width, ang, rad);
        auto f = [&](cplx z) {
            Vec3 X = stereo(z) * rho;
            Vec3 H = wedge(v.grad(X));
            return dot(H, phi.grad(X)) * stereo_density(z);
        };
        // a point singularity at distance w from the shell leaves relative noise ~ 1e-16 / w^2
        double rel = radii.empty() ? 0.1 * tol : std::max(tol, 1e-15 / (width * width));
        return rho * rho * checked(adaptive_disc(f, {0.1 * tol, rel, 50}, ang, rad), "pairing_volume shell");
    };
    IntegrateOptions opt;
    opt.singular = radii;
    for (const Vec3& c : phi.kinks)
        if (norm(c) > 0 && norm(c) < 1) opt.breakpoints.push_back(norm(c));
    return checked(adaptive_integrate(shell, 0, 1, {tol, tol, 50}, opt), "pairing_volume");
}

double surface_term(const BoundaryField& g, const LipschitzTest& phi) {
    // one-sided three-point differences pointing into the chart disc
    const double h = 1e-5;
    auto partial = [&](cplx z, cplx e) {
        double s = (std::real(std::conj(e) * z) > 0) ? -1.0 : 1.0;
        cplx d = s * h * e;
        return s * (-3.0 * g.chart(z) + 4.0 * g.chart(z + d) - g.chart(z + 2.0 * d)) / (2 * h);
    };
    std::vector<double> br;
    for (const Atom& a : g.atoms.atoms)
        if (std::abs(a.a) > 0.9) br.push_back(std::arg(a.a));
    auto f = [&](cplx z) {
        cplx a, b;
        Vec3 X = stereo(z);
        if (g.grad) {
            // chain rule through S(z) = (2x, 2y, 1 - |z|^2) / (1 + |z|^2)
            double x = z.real(), y = z.imag(), q = 1 + x * x + y * y, q2 = q * q;
            Vec3 Sx(2 / q - 4 * x * x / q2, -4 * x * y / q2, -4 * x / q2);
            Vec3 Sy(-4 * x * y / q2, 2 / q - 4 * y * y / q2, -4 * y / q2);
            Grad3 G = g.grad(X);
            a = G[0] * Sx.x + G[1] * Sx.y + G[2] * Sx.z;
            b = G[0] * Sy.x + G[1] * Sy.y + G[2] * Sy.z;
        } else {
            a = partial(z, 1);
            b = partial(z, cplx(0, 1));
        }
        return std::imag(std::conj(a) * b) * phi(X);
    };
    return checked(adaptive_disc(f, {g.grad ? 1e-11 : 1e-8, 1e-9, 40}, br), "surface_term");
}

double pairing_surface(const BoundaryField& g, const LipschitzTest& phi) {
    g.check_atoms();
    double s = 2 * surface_term(g, phi);
    for (const Atom& a : g.atoms.atoms) s -= 2 * kPi * a.d * phi(Vec3(a.a.real(), a.a.imag(), 0));
    return s;
}

// ---------------------------------------------------------------------------
// continuity

double boundary_seminorm(const BoundaryField& g, double h) {
    auto grid = build_grid(h);
    HalfBallField F = HalfBallField::from_function(grid, [&](const Vec3& x) {
        double r = norm(x);
        if (x.z == 0 && r < 1) return g.flat(planar(x));
        if (x.z == 0) return g.hemi(x / r);
        return r >= 1 ? g.hemi(x / r) : cplx(0, 0);
    });
    const HalfBallGrid& G = *grid;
    std::vector<int> inner;
    for (std::size_t i = 0; i < G.size(); ++i)
        if (G.kind[i] == NodeKind::interior) inner.push_back(static_cast<int>(i));
    double e = discrete_energy(F);
    for (int it = 0; it < 20000; ++it) {
        auto upd = [&](int i) {
            cplx S(0, 0);
            double C = 0;
            for (int d = 0; d < 6; ++d) {
                int j = G.nbr[i][d];
                if (j < 0) continue;
                S += G.coef[i][d] * F.v[j];
                C += G.coef[i][d];
            }
            if (C > 0) F.v[i] = S / C;
        };
        for (int i : inner) upd(i);
        for (auto p = inner.rbegin(); p != inner.rend(); ++p) upd(*p);
        double en = discrete_energy(F);
        if (e - en <= 1e-10 * e) {
            e = en;
            break;
        }
        e = en;
    }
    return std::sqrt(2 * e);
}

ContinuityReport continuity_gap(const BoundaryField& g1, const BoundaryField& g2, const LipschitzTest& phi, double h) {
    ContinuityReport r;
    r.gap = std::abs(pairing_surface(g1, phi) - pairing_surface(g2, phi));
    BoundaryField diff;
    diff.hemi = [&](const Vec3& x) { return g1.hemi(x) - g2.hemi(x); };
    diff.flat = [&](cplx x) { return g1.flat(x) - g2.flat(x); };
    r.seminorm1 = boundary_seminorm(g1, h);
    r.seminorm2 = boundary_seminorm(g2, h);
    r.seminorm_diff = boundary_seminorm(diff, h);
    r.lip = phi.lip;
    r.bound = (r.seminorm1 + r.seminorm2) * r.seminorm_diff * r.lip;
    r.ratio = r.bound > 0 ? r.gap / r.bound : 0;
    return r;
}

// ---------------------------------------------------------------------------
// lower bounds

double bcl_potential(cplx c) {
    Vec3 C(c.real(), c.imag(), 0);
    // dH^2 / (1 + x3)^2 is Lebesgue measure in the chart
    return checked(adaptive_disc([&](cplx z) { return norm(stereo(z) - C); }, {1e-13, 1e-12, 40}), "bcl_potential");
}

BclReport bcl_lower_bound_report(const AtomMeasure& nu, double grid_spacing) {
    nu.validate();
    if (nu.total() != 1) throw PreconditionViolation("bcl_lower_bound: total degree must be 1");
    if (!(grid_spacing > 0 && grid_spacing <= 0.5)) throw InvalidArgument("bcl_lower_bound: bad grid spacing");
    std::vector<cplx> pts;
    int n = static_cast<int>(std::floor(1 / grid_spacing));
    for (int i = -n; i <= n; ++i)
        for (int j = -n; j <= n; ++j) {
            cplx c(i * grid_spacing, j * grid_spacing);
            if (std::abs(c) <= 1 + 1e-12) pts.push_back(c);
        }
    std::vector<double> vals = parallel_map<double>(pts.size(), [&](std::size_t k) { return bcl_potential(pts[k]); });
    std::size_t best = static_cast<std::size_t>(std::min_element(vals.begin(), vals.end()) - vals.begin());
    BclReport r;
    r.grid_spacing = grid_spacing;
    r.argmin = pts[best];
    r.value = vals[best];
    // compass search, V convex
    for (double step = grid_spacing / 2; step > 1e-7; step /= 2) {
        bool moved = true;
        while (moved) {
            moved = false;
            for (cplx d : {cplx(1, 0), cplx(-1, 0), cplx(0, 1), cplx(0, -1)}) {
                cplx c = r.argmin + step * d;
                if (std::abs(c) > 1) continue;
                double v = bcl_potential(c);
                if (v < r.value) {
                    r.value = v;
                    r.argmin = c;
                    moved = true;
                }
            }
        }
    }
    return r;
}

double bcl_lower_bound(const AtomMeasure& nu) { return bcl_lower_bound_report(nu).value; }

std::vector<LipschitzTest> lipschitz_dictionary(double spacing) {
    std::vector<LipschitzTest> out = {LipschitzTest::coordinate(0), LipschitzTest::coordinate(1),
                                      LipschitzTest::coordinate(2)};
    int n = static_cast<int>(std::floor(1 / spacing));
    for (int i = -n; i <= n; ++i)
        for (int j = -n; j <= n; ++j) {
            cplx c(i * spacing, j * spacing);
            if (std::abs(c) <= 1 + 1e-12) out.push_back(LipschitzTest::distance(Vec3(c.real(), c.imag(), 0)));
        }
    return out;
}

LowerBoundReport energy_lower_bound_check(const HalfBallField& v, double pi_tol, const std::vector<LipschitzTest>& extra) {
    LowerBoundReport r;
    r.energy_p1 = p1_energy(v);
    r.energy_weighted = discrete_energy(v);
    std::vector<LipschitzTest> dict = lipschitz_dictionary();
    dict.insert(dict.end(), extra.begin(), extra.end());
    std::vector<P1Pairing> pr = parallel_map<P1Pairing>(dict.size(), [&](std::size_t k) { return p1_pairing(v, dict[k]); });
    r.sup_bound = -kInf;
    r.sup_bound_strict = -kInf;
    for (std::size_t k = 0; k < dict.size(); ++k) {
        double b = dict[k].lip > 0 ? 0.5 * pr[k].pairing / dict[k].lip : 0.0;
        r.entries.emplace_back(dict[k].name, b);
        if (b > r.sup_bound) {
            r.sup_bound = b;
            r.sup_test_name = dict[k].name;
        }
        // rescaled so the interpolated test is 1-Lipschitz on every simplex
        if (pr[k].lip > 0) r.sup_bound_strict = std::max(r.sup_bound_strict, 0.5 * pr[k].pairing / pr[k].lip);
    }
    r.bound_holds = r.energy_p1 >= r.sup_bound * (1 - 1e-12) && r.energy_p1 >= r.sup_bound_strict * (1 - 1e-12);
    r.near_pi = r.sup_bound >= kPi * (1 - pi_tol);
    return r;
}

}  // namespace halfharm
