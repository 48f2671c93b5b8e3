#pragma once

#include <functional>
#include <string>
#include <vector>

#include "halfharm/vec3.hpp"

namespace halfharm {

class BlaschkeProduct {
public:
    BlaschkeProduct() = default;
    BlaschkeProduct(double theta, std::vector<cplx> zeros, bool conjugated = false);

    double theta() const { return theta_; }
    const std::vector<cplx>& zeros() const { return zeros_; }
    bool conjugated() const { return conjugated_; }
    int factors() const { return static_cast<int>(zeros_.size()); }
    double delta() const;

    std::string to_json() const;
    static BlaschkeProduct from_json(const std::string& text);

private:
    double theta_ = 0;
    std::vector<cplx> zeros_;
    bool conjugated_ = false;
};

// Complex derivative of the underlying (unconjugated) product.
struct Derivative {
    cplx value;
    bool conjugated;
};

struct CircleSample {
    std::vector<cplx> values;  // at angles 2 pi k / n

    CircleSample() = default;
    explicit CircleSample(std::vector<cplx> v);
    std::size_t n() const { return values.size(); }
};

cplx eval(const BlaschkeProduct& B, cplx z);
Derivative derivative(const BlaschkeProduct& B, cplx z);
// |w'(z)|^2, the same for the product and its conjugate
double derivative_sq(const BlaschkeProduct& B, cplx z);

CircleSample boundary_trace(const BlaschkeProduct& B, int n);

int winding_number(const CircleSample& s);
// samples at 64 (d+1), doubled on undersampling up to 2^20
int winding_number_adaptive(const std::function<cplx(double)>& g, int n0);
int degree_of(const BlaschkeProduct& B);

double circle_energy_analytic(const BlaschkeProduct& B);

cplx homogeneous_extension(const BlaschkeProduct& B, const Vec3& X);
Grad3 homogeneous_extension_grad(const BlaschkeProduct& B, const Vec3& X);

double modulus_bound_margin(const BlaschkeProduct& B, int n_samples);
cplx balance_vector(const BlaschkeProduct& B);

}  // namespace halfharm
