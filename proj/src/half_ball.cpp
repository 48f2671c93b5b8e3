#include "halfharm/half_ball.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "halfharm/errors.hpp"
#include "halfharm/quadrature.hpp"

namespace halfharm {

int AtomMeasure::total() const {
    int s = 0;
    for (const Atom& a : atoms) s += a.d;
    return s;
}

void AtomMeasure::validate() const {
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (std::abs(atoms[i].a) > 1 + 1e-12) throw PreconditionViolation("AtomMeasure: atom outside the closed disc");
        for (std::size_t j = 0; j < i; ++j)
            if (std::abs(atoms[i].a - atoms[j].a) <= 1e-9) throw PreconditionViolation("AtomMeasure: coincident atoms");
    }
}

const char* node_kind_name(NodeKind k) {
    switch (k) {
        case NodeKind::interior: return "interior";
        case NodeKind::hemisphere_fixed: return "hemisphere_fixed";
        case NodeKind::flat_free: return "flat_free";
        case NodeKind::equator_fixed: return "equator_fixed";
    }
    return "?";
}

int HalfBallGrid::node_at(int i, int j, int k) const {
    if (i < -n || i >= n || j < -n || j >= n || k < 0 || k > n) return -1;
    return index[(static_cast<std::size_t>(i + n) * 2 * n + (j + n)) * (n + 1) + k];
}

std::size_t HalfBallGrid::count(NodeKind k) const { return static_cast<std::size_t>(std::count(kind.begin(), kind.end(), k)); }

double cell_fraction(const Vec3& lo, double h, double r) {
    // nearest and farthest points of the cell
    double near2 = 0, far2 = 0;
    for (int c = 0; c < 3; ++c) {
        double a = lo[c], b = lo[c] + h;
        double nc = a > 0 ? a : (b < 0 ? b : 0);
        double fc = std::max(std::abs(a), std::abs(b));
        near2 += nc * nc;
        far2 += fc * fc;
    }
    if (far2 <= r * r) return 1;
    if (near2 >= r * r) return 0;
    // midpoint sampling, exact along x3 via the chord length
    const int m = 16;
    double s = 0;
    for (int p = 0; p < m; ++p)
        for (int q = 0; q < m; ++q) {
            double x = lo.x + (p + 0.5) * h / m, y = lo.y + (q + 0.5) * h / m;
            double t = r * r - x * x - y * y;
            if (t <= 0) continue;
            double zt = std::sqrt(t);
            double a = std::max(lo.z, -zt), b = std::min(lo.z + h, zt);
            if (b > a) s += (b - a) / h;
        }
    return s / (m * m);
}

std::shared_ptr<const HalfBallGrid> build_grid(double h) {
    if (!(h > 0 && h <= 0.2)) throw InvalidArgument("build_grid: h must lie in (0, 0.2]");
    auto g = std::make_shared<HalfBallGrid>();
    g->h = h;
    int n = static_cast<int>(std::ceil(1 / h)) + 1;
    g->n = n;
    g->index.assign(static_cast<std::size_t>(2 * n) * 2 * n * (n + 1), -1);
    auto slot = [&](int i, int j, int k) -> int& {
        return g->index[(static_cast<std::size_t>(i + n) * 2 * n + (j + n)) * (n + 1) + k];
    };
    auto at = [h](int i, int j, int k) { return Vec3((i + 0.5) * h, (j + 0.5) * h, k * h); };

    // cells (i, j, k) span lattice points i..i+1, j..j+1, k..k+1
    struct Raw {
        int i, j, k;
        double w;
    };
    std::vector<Raw> raw;
    for (int i = -n; i + 1 < n; ++i)
        for (int j = -n; j + 1 < n; ++j)
            for (int k = 0; k < n; ++k) {
                Vec3 lo = at(i, j, k);
                double w = cell_fraction(lo, h, 1);
                // slivers below the sampling resolution still keep the mesh conforming
                bool corner_inside = false;
                for (int b = 0; b < 8; ++b) {
                    Vec3 x = lo + Vec3((b & 1) * h, ((b >> 1) & 1) * h, ((b >> 2) & 1) * h);
                    if (x.z > 0 && norm(x) < 1) corner_inside = true;
                }
                if (w > 0 || corner_inside) raw.push_back({i, j, k, w});
            }
    for (const Raw& c : raw)
        for (int b = 0; b < 8; ++b) {
            int i = c.i + (b & 1), j = c.j + ((b >> 1) & 1), k = c.k + ((b >> 2) & 1);
            int& s = slot(i, j, k);
            if (s < 0) s = 0;
        }
    // number nodes lexicographically for a deterministic sweep order
    for (int i = -n; i < n; ++i)
        for (int j = -n; j < n; ++j)
            for (int k = 0; k <= n; ++k) {
                int& s = slot(i, j, k);
                if (s < 0) continue;
                s = static_cast<int>(g->pos.size());
                Vec3 x = at(i, j, k);
                g->pos.push_back(x);
                g->ijk.push_back({i, j, k});
                double r = norm(x);
                NodeKind kd;
                if (k == 0)
                    kd = r < 1 - h ? NodeKind::flat_free : NodeKind::equator_fixed;
                else
                    kd = r < 1 ? NodeKind::interior : NodeKind::hemisphere_fixed;
                g->kind.push_back(kd);
            }
    std::size_t N = g->pos.size();
    g->nbr.assign(N, {-1, -1, -1, -1, -1, -1});
    g->coef.assign(N, {0, 0, 0, 0, 0, 0});
    for (const Raw& c : raw) {
        std::array<int, 8> corner;
        for (int b = 0; b < 8; ++b) corner[b] = slot(c.i + (b & 1), c.j + ((b >> 1) & 1), c.k + ((b >> 2) & 1));
        g->cells.push_back({corner, c.w});
        // each lattice edge is shared by 4 cells: h/2 per edge in the bulk
        double e = c.w * h / 8;
        for (int b = 0; b < 8; ++b)
            for (int axis = 0; axis < 3; ++axis) {
                if (b & (1 << axis)) continue;
                int lo = corner[b], hi = corner[b | (1 << axis)];
                g->nbr[lo][2 * axis] = hi;
                g->nbr[hi][2 * axis + 1] = lo;
                g->coef[lo][2 * axis] += e;
                g->coef[hi][2 * axis + 1] += e;
            }
    }
    return g;
}

cplx project_circle(cplx v, bool* was_zero) {
    double m = std::abs(v);
    if (was_zero) *was_zero = !(m > 0);
    if (!(m > 0)) return {1, 0};
    return v / m;
}

HalfBallField HalfBallField::from_function(std::shared_ptr<const HalfBallGrid> g,
                                           const std::function<cplx(const Vec3&)>& f) {
    HalfBallField F;
    F.v.resize(g->size());
    F.flagged.assign(g->size(), 0);
    for (std::size_t i = 0; i < g->size(); ++i) F.v[i] = f(g->pos[i]);
    F.grid = std::move(g);
    return F;
}

HalfBallField set_boundary_data(std::shared_ptr<const HalfBallGrid> grid, const BlaschkeProduct& B) {
    HalfBallField F = HalfBallField::from_function(grid, [&](const Vec3& x) { return homogeneous_extension(B, x); });
    for (std::size_t i = 0; i < F.grid->size(); ++i) {
        if (F.grid->kind[i] != NodeKind::flat_free) continue;
        bool zero = false;
        F.v[i] = project_circle(F.v[i], &zero);
        F.flagged[i] = zero;
    }
    return F;
}

double discrete_energy(const HalfBallField& f) {
    const HalfBallGrid& g = *f.grid;
    long double s = 0;
    for (std::size_t i = 0; i < g.size(); ++i)
        for (int d = 0; d < 6; d += 2) {
            int j = g.nbr[i][d];
            if (j >= 0) s += g.coef[i][d] * std::norm(f.v[i] - f.v[j]);
        }
    return static_cast<double>(s);
}

double discrete_energy_ball(const HalfBallField& f, double r) {
    const HalfBallGrid& g = *f.grid;
    long double s = 0;
    double h = g.h;
    for (const HalfBallGrid::Cell& c : g.cells) {
        double w = cell_fraction(g.pos[c.corner[0]], h, r);
        if (w == 0) continue;
        double e = 0;
        for (int b = 0; b < 8; ++b)
            for (int axis = 0; axis < 3; ++axis)
                if (!(b & (1 << axis))) e += std::norm(f.v[c.corner[b]] - f.v[c.corner[b | (1 << axis)]]);
        s += w * h / 8 * e;
    }
    return static_cast<double>(s);
}

AtomMeasure flat_singularities(const HalfBallField& f) {
    const HalfBallGrid& g = *f.grid;
    AtomMeasure m;
    int n = g.n;
    for (int i = -n; i + 1 < n; ++i)
        for (int j = -n; j + 1 < n; ++j) {
            int c[4] = {g.node_at(i, j, 0), g.node_at(i + 1, j, 0), g.node_at(i + 1, j + 1, 0), g.node_at(i, j + 1, 0)};
            if (c[0] < 0 || c[1] < 0 || c[2] < 0 || c[3] < 0) continue;
            double tot = 0;
            for (int e = 0; e < 4; ++e) {
                cplx a = f.v[c[e]], b = f.v[c[(e + 1) % 4]];
                if (a == cplx(0, 0) || b == cplx(0, 0)) throw RefineNeeded("flat_singularities: zero value on the flat disc");
                double jump = std::arg(b / a);
                // only a half turn leaves the orientation undecided
                if (std::abs(jump) >= kPi - 1e-9) {
                    std::ostringstream os;
                    os << "flat_singularities: phase jump " << jump << " in cell (" << i << ", " << j << ")";
                    throw RefineNeeded(os.str());
                }
                tot += jump;
            }
            int d = static_cast<int>(std::lround(tot / (2 * kPi)));
            if (d != 0) m.atoms.push_back({cplx((i + 1) * g.h, (j + 1) * g.h), d});
        }
    return m;
}

bool SolverReport::nonincreasing() const {
    for (std::size_t i = 1; i < energy.size(); ++i)
        if (energy[i] > energy[i - 1]) return false;
    return true;
}

SolverReport relax(HalfBallField& f, int max_iters, double tol) {
    if (max_iters < 0) throw InvalidArgument("relax: max_iters must be >= 0");
    const HalfBallGrid& g = *f.grid;
    SolverReport rep;
    std::vector<int> free_nodes;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (g.is_free(static_cast<int>(i))) free_nodes.push_back(static_cast<int>(i));
    if (f.flagged.size() != g.size()) f.flagged.assign(g.size(), 0);

    auto update = [&](int i) {
        cplx S(0, 0);
        double C = 0;
        for (int d = 0; d < 6; ++d) {
            int j = g.nbr[i][d];
            if (j < 0) continue;
            S += g.coef[i][d] * f.v[j];
            C += g.coef[i][d];
        }
        if (C == 0) return;
        if (g.kind[i] == NodeKind::interior) {
            f.v[i] = S / C;
        } else {
            // C|u|^2 - 2 Re(conj(u) S) on the circle is smallest at S/|S|
            if (std::abs(S) == 0) {
                f.flagged[i] = 1;
                return;
            }
            f.v[i] = S / std::abs(S);
            f.flagged[i] = 0;
        }
    };

    // rounding scale of the energy sum
    double scale = 0;
    for (std::size_t i = 0; i < g.size(); ++i)
        for (int d = 0; d < 6; d += 2)
            if (g.nbr[i][d] >= 0) scale += g.coef[i][d] * (std::norm(f.v[i]) + std::norm(f.v[g.nbr[i][d]]));

    double e = discrete_energy(f);
    rep.energy.push_back(e);
    std::vector<cplx> keep;
    for (int it = 0; it < max_iters; ++it) {
        keep = f.v;
        for (int i : free_nodes) update(i);
        for (auto p = free_nodes.rbegin(); p != free_nodes.rend(); ++p) update(*p);
        double en = discrete_energy(f);
        rep.iterations = it + 1;
        if (en > e) {
            // exact per-node minimisation cannot raise the energy; anything left is rounding
            if (en - e > 1e-12 * scale) throw NumericalFailure("relax: energy increased during a sweep");
            f.v = keep;
            rep.converged = true;
            rep.note = "stopped at rounding level";
            break;
        }
        rep.energy.push_back(en);
        if (e - en <= tol * e) {
            rep.converged = true;
            e = en;
            break;
        }
        e = en;
    }
    rep.final_energy = e;
    rep.flagged_nodes = static_cast<int>(std::count(f.flagged.begin(), f.flagged.end(), 1));
    try {
        rep.atoms = flat_singularities(f);
    } catch (const RefineNeeded& ex) {
        rep.atoms_resolved = false;
        rep.note = ex.what();
    }
    return rep;
}

MonotoneReport monotonicity_check(const HalfBallField& f, const std::vector<double>& radii, double rel_tol) {
    MonotoneReport rep;
    std::vector<double> rs = radii;
    std::sort(rs.begin(), rs.end());
    for (double r : rs) {
        if (!(r > 0) || r > 1) throw InvalidArgument("monotonicity_check: radii must lie in (0, 1]");
        rep.radii.push_back(r);
        rep.density.push_back(discrete_energy_ball(f, r) / r);
    }
    for (std::size_t i = 1; i < rep.density.size(); ++i)
        if (rep.density[i] < rep.density[i - 1] - rel_tol * std::max(1e-12, std::abs(rep.density[i - 1])))
            rep.nondecreasing = false;
    rep.theta = rep.density.empty() ? 0 : rep.density.front();
    return rep;
}

void write_field_slice_csv(std::ostream& os, const HalfBallField& f, int k) {
    const HalfBallGrid& g = *f.grid;
    if (k < 0 || k > g.n) throw InvalidArgument("write_field_slice_csv: slice index out of range");
    os << "x1,x2,x3,v1,v2,modulus,phase,kind\n" << std::setprecision(12);
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (g.ijk[i][2] != k) continue;
        const Vec3& x = g.pos[i];
        cplx v = f.v[i];
        os << x.x << ',' << x.y << ',' << x.z << ',' << v.real() << ',' << v.imag() << ',' << std::abs(v) << ','
           << std::arg(v) << ',' << node_kind_name(g.kind[i]) << '\n';
    }
}

}  // namespace halfharm
