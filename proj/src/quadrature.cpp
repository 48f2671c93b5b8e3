#include "halfharm/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <queue>
#include <sstream>

#include "halfharm/conformal.hpp"
#include "halfharm/errors.hpp"

namespace halfharm {

namespace {

// Kronrod 15-point abscissae (positive half) and weights; Gauss 7-point weights
// sit on the odd-indexed abscissae.
constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

void legendre_nodes(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1, p2 = 0;
            for (int j = 1; j <= n; ++j) {
                double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            double dz = p1 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        // one more derivative evaluation at the converged node
        double p1 = 1, p2 = 0;
        for (int j = 1; j <= n; ++j) {
            double p3 = p2;
            p2 = p1;
            p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
        }
        pp = n * (z * p1 - p2) / (z * z - 1.0);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
    }
    if (n % 2 == 1) x[n / 2] = 0.0;
}

struct GLCache {
    std::vector<std::vector<double>> x, w;
    GLCache() {
        x.resize(257);
        w.resize(257);
        for (int n = 1; n <= 256; ++n) legendre_nodes(n, x[n], w[n]);
    }
};

const GLCache& gl_cache() {
    static const GLCache cache;
    return cache;
}

struct Piece {
    double a, b, value, err;
    int seg, depth;
    long id;
};

struct PieceOrder {
    bool operator()(const Piece& p, const Piece& q) const {
        if (p.err != q.err) return p.err < q.err;
        return p.id > q.id;
    }
};

}  // namespace

double QuadRule::weight_sum() const {
    double s = 0;
    for (double w : weights) s += w;
    return s;
}

void gauss_legendre_on(int n, double a, double b, std::vector<double>& x, std::vector<double>& w) {
    if (n < 1) throw InvalidArgument("gauss_legendre: n must be >= 1");
    std::vector<double> xs, ws;
    const std::vector<double>* px;
    const std::vector<double>* pw;
    if (n <= 256) {
        px = &gl_cache().x[n];
        pw = &gl_cache().w[n];
    } else {
        legendre_nodes(n, xs, ws);
        px = &xs;
        pw = &ws;
    }
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    x.resize(n);
    w.resize(n);
    for (int i = 0; i < n; ++i) {
        x[i] = c + h * (*px)[i];
        w[i] = h * (*pw)[i];
    }
}

QuadRule gauss_legendre(int n) {
    if (n < 1) throw InvalidArgument("gauss_legendre: n must be >= 1");
    QuadRule q;
    q.domain = Domain::interval;
    std::vector<double> x, w;
    gauss_legendre_on(n, -1, 1, x, w);
    for (int i = 0; i < n; ++i) q.nodes.push_back({x[i], 0, 0});
    q.weights = w;
    return q;
}

QuadRule circle_rule(int n) {
    if (n < 2) throw InvalidArgument("circle_rule: n must be >= 2");
    QuadRule q;
    q.domain = Domain::circle;
    for (int k = 0; k < n; ++k) {
        double phi = 2 * kPi * k / n;
        q.nodes.push_back({std::cos(phi), std::sin(phi), 0});
        q.weights.push_back(2 * kPi / n);
    }
    return q;
}

QuadRule disc_rule(int n_r, int n_t) {
    if (n_r < 1 || n_t < 2) throw InvalidArgument("disc_rule: need n_r >= 1 and n_t >= 2");
    QuadRule q;
    q.domain = Domain::disc;
    std::vector<double> r, wr;
    gauss_legendre_on(n_r, 0, 1, r, wr);
    for (int i = 0; i < n_r; ++i) {
        for (int k = 0; k < n_t; ++k) {
            double phi = 2 * kPi * k / n_t;
            q.nodes.push_back({r[i] * std::cos(phi), r[i] * std::sin(phi), 0});
            q.weights.push_back(wr[i] * r[i] * 2 * kPi / n_t);
        }
    }
    return q;
}

QuadRule hemisphere_rule(int n_r, int n_t) {
    QuadRule d = disc_rule(n_r, n_t);
    QuadRule q;
    q.domain = Domain::hemisphere;
    for (std::size_t i = 0; i < d.size(); ++i) {
        cplx z(d.nodes[i].x, d.nodes[i].y);
        q.nodes.push_back(stereo(z));
        q.weights.push_back(d.weights[i] * stereo_density(z));
    }
    return q;
}

double gamma_fn(double x) {
    if (!(x > 0)) throw InvalidArgument("gamma_fn: x must be > 0");
    static const double p[9] = {0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                                771.32342877765313,   -176.61502916214059,   12.507343278686905,
                                -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    if (x < 0.5) return kPi / (std::sin(kPi * x) * gamma_fn(1 - x));
    x -= 1;
    double a = p[0];
    double t = x + 7.5;
    for (int i = 1; i < 9; ++i) a += p[i] / (x + i);
    return std::sqrt(2 * kPi) * std::pow(t, x + 0.5) * std::exp(-t) * a;
}

double invert_monotone(const std::function<double(double)>& f, double a, double b, double y,
                       const Tolerance& tol) {
    if (!(a < b)) throw InvalidArgument("invert_monotone: need a < b");
    double fa = f(a), fb = f(b);
    const int ns = 32;
    double prev = fa;
    for (int i = 1; i <= ns; ++i) {
        double v = f(a + (b - a) * i / ns);
        if (!(v > prev)) throw PreconditionViolation("invert_monotone: samples not strictly increasing");
        prev = v;
    }
    double slack = tol.abs_tol + tol.rel_tol * std::abs(y);
    if (y < fa - slack || y > fb + slack) throw OutOfRange("invert_monotone: y outside [f(a), f(b)]");
    if (y <= fa) return a;
    if (y >= fb) return b;
    double lo = a, hi = b, flo = fa, fhi = fb;
    for (int it = 0; it < 400; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        double fm = f(mid);
        if (fm < flo || fm > fhi) throw PreconditionViolation("invert_monotone: non-monotone on bracket");
        if (fm == y) return mid;
        if (fm < y) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }
    double x = (y - flo <= fhi - y) ? lo : hi;
    return x;
}

IntegrationResult adaptive_integrate(const std::function<double(double)>& f, double a, double b,
                                     const Tolerance& tol, const IntegrateOptions& opt) {
    if (tol.abs_tol < 0 || tol.rel_tol < 0 || tol.abs_tol + tol.rel_tol <= 0)
        throw InvalidArgument("adaptive_integrate: invalid tolerance");
    if (a == b) return {};
    double sign = 1;
    if (a > b) {
        std::swap(a, b);
        sign = -1;
    }

    // map to a finite parameter interval
    int mode = 0;  // 0 finite, 1 [a,inf), 2 (-inf,b], 3 (-inf,inf)
    if (std::isinf(a) && std::isinf(b)) mode = 3;
    else if (std::isinf(b)) mode = 1;
    else if (std::isinf(a)) mode = 2;
    auto to_x = [&](double s) {
        switch (mode) {
            case 1: return a + std::tan(s);
            case 2: return b - std::tan(s);
            case 3: return std::tan(s);
            default: return s;
        }
    };
    auto to_s = [&](double x) {
        switch (mode) {
            case 1: return std::atan(x - a);
            case 2: return std::atan(b - x);
            case 3: return std::atan(x);
            default: return x;
        }
    };
    auto jac = [&](double s) {
        if (mode == 0) return 1.0;
        double c = std::cos(s);
        return 1.0 / (c * c);
    };
    double sa, sb;
    switch (mode) {
        case 1: sa = 0; sb = kPi / 2; break;
        case 2: sa = 0; sb = kPi / 2; break;
        case 3: sa = -kPi / 2; sb = kPi / 2; break;
        default: sa = a; sb = b;
    }

    struct Seg {
        double p, q;
        bool sing_p, sing_q;
    };
    std::vector<double> cuts;
    std::vector<bool> cut_sing;
    auto add_cut = [&](double x, bool sing) {
        if (!(x > a && x < b)) return;
        cuts.push_back(to_s(x));
        cut_sing.push_back(sing);
    };
    for (double x : opt.singular) add_cut(x, true);
    for (double x : opt.breakpoints) add_cut(x, false);
    std::vector<std::size_t> order(cuts.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return cuts[i] < cuts[j]; });
    bool sing_a = false, sing_b = false;
    for (double x : opt.singular) {
        if (x == a) sing_a = true;
        if (x == b) sing_b = true;
    }
    std::vector<Seg> segs;
    double prev = sa;
    bool prev_sing = (mode == 2) ? sing_b : (mode == 3 ? false : sing_a);
    for (std::size_t k : order) {
        if (cuts[k] <= prev) {
            prev_sing = prev_sing || cut_sing[k];
            continue;
        }
        segs.push_back({prev, cuts[k], prev_sing, static_cast<bool>(cut_sing[k])});
        prev = cuts[k];
        prev_sing = cut_sing[k];
    }
    segs.push_back({prev, sb, prev_sing, mode == 0 ? sing_b : false});

    // segment-local parameter u in [0,1]
    auto eval = [&](int si, double u) {
        const Seg& g = segs[si];
        double L = g.q - g.p, s, ds;
        if (g.sing_p && g.sing_q) {
            s = g.p + L * u * u * (3 - 2 * u);
            ds = 6 * L * u * (1 - u);
        } else if (g.sing_p) {
            s = g.p + L * u * u;
            ds = 2 * L * u;
        } else if (g.sing_q) {
            double v = 1 - u;
            s = g.q - L * v * v;
            ds = 2 * L * v;
        } else {
            s = g.p + L * u;
            ds = L;
        }
        if (ds == 0) return 0.0;
        double v = f(to_x(s)) * jac(s) * ds;
        if (!std::isfinite(v)) {
            std::ostringstream os;
            os << "adaptive_integrate: non-finite integrand at x = " << to_x(s);
            throw NumericalFailure(os.str());
        }
        return v;
    };
    auto gk = [&](int si, double lo, double hi, double& err) {
        double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
        double fc = eval(si, c);
        double k = fc * kWgk[7], g = fc * kWg[3];
        for (int j = 0; j < 7; ++j) {
            double f1 = eval(si, c - h * kXgk[j]), f2 = eval(si, c + h * kXgk[j]);
            k += kWgk[j] * (f1 + f2);
            if (j % 2 == 1) g += kWg[j / 2] * (f1 + f2);
        }
        err = std::abs((k - g) * h);
        return k * h;
    };

    std::priority_queue<Piece, std::vector<Piece>, PieceOrder> heap;
    std::vector<Piece> done;
    long next_id = 0;
    long double total = 0, total_err = 0;
    for (int si = 0; si < static_cast<int>(segs.size()); ++si) {
        double e;
        double v = gk(si, 0, 1, e);
        heap.push({0, 1, v, e, si, 0, next_id++});
        total += v;
        total_err += e;
    }
    bool converged = true;
    int count = static_cast<int>(segs.size());
    while (!heap.empty()) {
        double target = std::max(tol.abs_tol, tol.rel_tol * std::abs(static_cast<double>(total)));
        if (total_err <= target) break;
        Piece p = heap.top();
        heap.pop();
        if (p.depth >= tol.max_refinements || count >= opt.max_intervals) {
            done.push_back(p);
            converged = false;
            if (count >= opt.max_intervals) break;
            continue;
        }
        double m = 0.5 * (p.a + p.b), e1, e2;
        double v1 = gk(p.seg, p.a, m, e1), v2 = gk(p.seg, m, p.b, e2);
        total += (v1 + v2) - p.value;
        total_err += (e1 + e2) - p.err;
        heap.push({p.a, m, v1, e1, p.seg, p.depth + 1, next_id++});
        heap.push({m, p.b, v2, e2, p.seg, p.depth + 1, next_id++});
        ++count;
    }
    while (!heap.empty()) {
        done.push_back(heap.top());
        heap.pop();
    }
    std::sort(done.begin(), done.end(), [](const Piece& p, const Piece& q) {
        return p.seg != q.seg ? p.seg < q.seg : p.a < q.a;
    });
    IntegrationResult r;
    long double s = 0, se = 0;
    for (const Piece& p : done) {
        s += p.value;
        se += p.err;
    }
    r.value = sign * static_cast<double>(s);
    r.err_estimate = static_cast<double>(se);
    r.converged = converged && se <= std::max(tol.abs_tol, tol.rel_tol * std::abs(static_cast<double>(s)));
    r.intervals = static_cast<int>(done.size());
    return r;
}

double graded_integrate(const std::function<double(double)>& f, double a, double b, int levels, int order) {
    std::vector<double> x, w;
    long double s = 0;
    double lo = a, len = b - a;
    for (int k = 0; k < levels; ++k) {
        double hi = b - len * std::ldexp(1.0, -(k + 1));
        gauss_legendre_on(order, lo, hi, x, w);
        for (int i = 0; i < order; ++i) s += w[i] * f(x[i]);
        lo = hi;
    }
    gauss_legendre_on(order, lo, b, x, w);
    for (int i = 0; i < order; ++i) s += w[i] * f(x[i]);
    return static_cast<double>(s);
}

IntegrationResult adaptive_disc(const std::function<double(cplx)>& f, const Tolerance& tol,
                                const std::vector<double>& angle_breaks, const std::vector<double>& radial_breaks) {
    Tolerance inner = tol;
    inner.abs_tol = tol.abs_tol * 1e-2;
    inner.rel_tol = tol.rel_tol * 1e-2;
    IntegrateOptions iopt;
    double t0 = 0;
    if (!angle_breaks.empty()) {
        t0 = angle_breaks.front();
        for (double t : angle_breaks) {
            double u = std::remainder(t - t0, 2 * kPi);
            if (u < 0) u += 2 * kPi;
            if (u > 0) iopt.breakpoints.push_back(t0 + u);
        }
    }
    bool ok = true;
    auto radial = [&](double r) {
        auto ang = [&](double th) { return f(std::polar(r, th)); };
        IntegrationResult in = adaptive_integrate(ang, t0, t0 + 2 * kPi, inner, iopt);
        if (!in.converged) ok = false;
        return r * in.value;
    };
    IntegrateOptions ropt;
    for (double r : radial_breaks)
        if (r > 0 && r < 1) ropt.breakpoints.push_back(r);
    IntegrationResult out = adaptive_integrate(radial, 0, 1, tol, ropt);
    out.converged = out.converged && ok;
    return out;
}

}  // namespace halfharm
