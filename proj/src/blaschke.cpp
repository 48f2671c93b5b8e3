#include "halfharm/blaschke.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "halfharm/conformal.hpp"
#include "halfharm/errors.hpp"
#include "halfharm/quadrature.hpp"
#include "json.hpp"

namespace halfharm {

BlaschkeProduct::BlaschkeProduct(double theta, std::vector<cplx> zeros, bool conjugated)
    : theta_(std::remainder(theta, 2 * kPi)), zeros_(std::move(zeros)), conjugated_(conjugated) {
    if (theta_ < 0) theta_ += 2 * kPi;
    for (cplx a : zeros_) {
        if (!(std::abs(a) < 1 - 1e-12)) throw InvalidArgument("BlaschkeProduct: zero outside the open disc");
    }
}

double BlaschkeProduct::delta() const {
    double d = 0;
    for (cplx a : zeros_) d = std::max(d, std::abs(a));
    return d;
}

std::string BlaschkeProduct::to_json() const {
    nlohmann::json j;
    j["theta"] = theta_;
    j["zeros"] = nlohmann::json::array();
    for (cplx a : zeros_) j["zeros"].push_back({a.real(), a.imag()});
    j["conjugated"] = conjugated_;
    return j.dump();
}

BlaschkeProduct BlaschkeProduct::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("BlaschkeProduct JSON: ") + e.what());
    }
    std::vector<cplx> zs;
    const nlohmann::json& zj = j.is_array() ? j : j.value("zeros", nlohmann::json::array());
    for (const auto& p : zj) {
        if (!p.is_array() || p.size() != 2) throw InvalidArgument("BlaschkeProduct JSON: zero must be [re, im]");
        zs.emplace_back(p[0].get<double>(), p[1].get<double>());
    }
    double theta = j.is_object() ? j.value("theta", 0.0) : 0.0;
    bool conj = j.is_object() ? j.value("conjugated", false) : false;
    return BlaschkeProduct(theta, zs, conj);
}

CircleSample::CircleSample(std::vector<cplx> v) : values(std::move(v)) {
    if (values.size() < 8) throw InvalidArgument("CircleSample: need n >= 8");
}

cplx eval(const BlaschkeProduct& B, cplx z) {
    if (std::abs(z) > 1 + 1e-12) throw DomainViolation("eval: |z| > 1");
    cplx w = std::polar(1.0, B.theta());
    for (cplx a : B.zeros()) w *= (z - a) / (1.0 - std::conj(a) * z);
    return B.conjugated() ? std::conj(w) : w;
}

Derivative derivative(const BlaschkeProduct& B, cplx z) {
    if (std::abs(z) > 1 + 1e-12) throw DomainViolation("derivative: |z| > 1");
    const auto& zs = B.zeros();
    cplx e = std::polar(1.0, B.theta());
    bool near_zero = false;
    for (cplx a : zs)
        if (std::abs(z - a) < 1e-14) near_zero = true;
    cplx d(0, 0);
    if (!near_zero) {
        cplx w = e, s(0, 0);
        for (cplx a : zs) {
            w *= (z - a) / (1.0 - std::conj(a) * z);
            s += (1.0 - std::norm(a)) / ((z - a) * (1.0 - std::conj(a) * z));
        }
        d = w * s;
    } else {
        for (std::size_t j = 0; j < zs.size(); ++j) {
            cplx a = zs[j];
            cplx den = 1.0 - std::conj(a) * z;
            cplx t = e * (1.0 - std::norm(a)) / (den * den);
            for (std::size_t k = 0; k < zs.size(); ++k)
                if (k != j) t *= (z - zs[k]) / (1.0 - std::conj(zs[k]) * z);
            d += t;
        }
    }
    return {d, B.conjugated()};
}

double derivative_sq(const BlaschkeProduct& B, cplx z) { return std::norm(derivative(B, z).value); }

CircleSample boundary_trace(const BlaschkeProduct& B, int n) {
    if (n < 8) throw InvalidArgument("boundary_trace: need n >= 8");
    std::vector<cplx> v(n);
    for (int k = 0; k < n; ++k) v[k] = eval(B, std::polar(1.0, 2 * kPi * k / n));
    return CircleSample(std::move(v));
}

int winding_number(const CircleSample& s) {
    std::size_t n = s.n();
    double total = 0;
    for (std::size_t k = 0; k < n; ++k) {
        cplx a = s.values[k], b = s.values[(k + 1) % n];
        if (a == cplx(0, 0) || b == cplx(0, 0)) throw Undersampled("winding_number: zero sample");
        double jump = std::arg(b / a);
        if (std::abs(jump) >= kPi / 2) {
            std::ostringstream os;
            os << "winding_number: phase jump " << jump << " at sample " << k;
            throw Undersampled(os.str());
        }
        total += jump;
    }
    return static_cast<int>(std::lround(total / (2 * kPi)));
}

int winding_number_adaptive(const std::function<cplx(double)>& g, int n0) {
    for (int n = std::max(8, n0); n <= (1 << 20); n *= 2) {
        std::vector<cplx> v(n);
        for (int k = 0; k < n; ++k) v[k] = g(2 * kPi * k / n);
        try {
            return winding_number(CircleSample(std::move(v)));
        } catch (const Undersampled&) {
        }
    }
    throw Undersampled("winding_number_adaptive: still undersampled at 2^20 samples");
}

int degree_of(const BlaschkeProduct& B) { return B.conjugated() ? -B.factors() : B.factors(); }

double circle_energy_analytic(const BlaschkeProduct& B) { return kPi * B.factors(); }

cplx homogeneous_extension(const BlaschkeProduct& B, const Vec3& X) {
    double r = norm(X);
    if (r == 0) throw DomainViolation("homogeneous_extension: X = 0");
    return eval(B, stereo_inv(X / r));
}

Grad3 homogeneous_extension_grad(const BlaschkeProduct& B, const Vec3& X) {
    double r = norm(X);
    if (r == 0) throw DomainViolation("homogeneous_extension_grad: X = 0");
    double s = r + X.z;
    cplx q(X.x, X.y);
    cplx z = q / s;
    // partials of z(X) = (x1 + i x2) / (|X| + x3)
    Grad3 dz = {cplx(1, 0) / s - q * (X.x / r) / (s * s), cplx(0, 1) / s - q * (X.y / r) / (s * s),
                -q * (X.z / r + 1) / (s * s)};
    Derivative d = derivative(B, z);
    Grad3 g;
    for (int j = 0; j < 3; ++j) {
        g[j] = d.value * dz[j];
        if (d.conjugated) g[j] = std::conj(g[j]);
    }
    return g;
}

double modulus_bound_margin(const BlaschkeProduct& B, int n_samples) {
    int d = B.factors();
    if (d < 1) throw InvalidArgument("modulus_bound_margin: need d >= 1");
    int nr = std::max(2, n_samples), nt = 2 * std::max(4, n_samples);
    double best = 0;
    for (int i = 0; i <= nr; ++i) {
        double r = static_cast<double>(i) / nr;
        double fac = std::pow((r + 3) / (3 * r + 1), d);
        for (int k = 0; k < nt; ++k) {
            cplx z = std::polar(r, 2 * kPi * k / nt);
            best = std::max(best, std::abs(eval(B, z)) * fac);
        }
    }
    return best;
}

cplx balance_vector(const BlaschkeProduct& B) {
    std::vector<double> breaks;
    for (cplx a : B.zeros())
        if (std::abs(a) > 0) breaks.push_back(std::arg(a));
    Tolerance tol{1e-12, 1e-11, 40};
    auto comp = [&](int c) {
        auto f = [&](cplx z) {
            double w = derivative_sq(B, z) / (1 + std::norm(z));
            return w * (c == 0 ? z.real() : z.imag());
        };
        IntegrationResult r = adaptive_disc(f, tol, breaks);
        if (!r.converged) throw NumericalFailure("balance_vector: disc quadrature did not converge");
        return r.value;
    };
    return {comp(0), comp(1)};
}

}  // namespace halfharm
