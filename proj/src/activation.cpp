#include "sgdlab/activation.hpp"

#include <cmath>
#include <string>

#include "sgdlab/errors.hpp"

namespace sgdlab {

double hermite_poly(int k, double x) {
    if (k < 0 || k > 64)
        throw config_error("hermite_poly: degree must be in [0, 64], got " +
                           std::to_string(k));
    double prev = 0.0;
    double cur = 1.0;
    for (int j = 0; j < k; ++j) {
        const double next =
            (x * cur - std::sqrt(double(j)) * prev) / std::sqrt(double(j + 1));
        prev = cur;
        cur = next;
    }
    return cur;
}

HermiteCoefficients hermite_coeffs(const Activation& f, int K,
                                   const QuadratureRule& rule) {
    if (K < 0) throw config_error("hermite_coeffs: K must be nonnegative");
    if (rule.order < K + 10)
        throw config_error("hermite_coeffs: rule order must be >= K + 10");
    HermiteCoefficients out;
    out.truncation = K;
    out.a.resize(K + 1);
    double partial = 0.0;
    for (int k = 0; k <= K; ++k) {
        out.a[k] =
            expect_1d([&](double x) { return f(x) * hermite_poly(k, x); }, rule);
        partial += out.a[k] * out.a[k];
    }
    const double norm_sq = expect_1d([&](double x) {
        const double v = f(x);
        return v * v;
    }, rule);
    out.tail_mass = norm_sq - partial;
    return out;
}

int information_exponent(const Activation& f, const QuadratureRule& rule,
                         double tol) {
    if (!(tol > 0.0))
        throw config_error("information_exponent: tol must be positive");
    constexpr int kScanLimit = 16;
    const HermiteCoefficients coeffs = hermite_coeffs(f, kScanLimit, rule);
    for (int k = 1; k <= kScanLimit; ++k)
        if (std::abs(coeffs.a[k]) > tol) return k;
    throw config_error("information_exponent: exponent of '" + f.label +
                       "' exceeds scan range (all a_1..a_16 below tolerance)");
}

Activation purify(const Activation& g1, const Activation& g2,
                  const QuadratureRule& rule) {
    const double a1_g1 = expect_1d([&](double x) { return x * g1(x); }, rule);
    const double a1_g2 = expect_1d([&](double x) { return x * g2(x); }, rule);
    if (std::abs(a1_g2) < 1e-10)
        throw config_error("purify: degenerate purifier, a1(" + g2.label +
                           ") is below 1e-10");
    const double c = a1_g1 / a1_g2;

    Activation f;
    const auto e1 = g1.eval, e2 = g2.eval;
    const auto d1 = g1.deriv1, d2 = g2.deriv1;
    const auto s1 = g1.deriv2, s2 = g2.deriv2;
    f.eval = [e1, e2, c](double x) { return e1(x) - c * e2(x); };
    f.deriv1 = [d1, d2, c](double x) { return d1(x) - c * d2(x); };
    f.deriv2 = [s1, s2, c](double x) { return s1(x) - c * s2(x); };
    f.bounded = g1.bounded && g2.bounded;
    f.bound = g1.bound + std::abs(c) * g2.bound;
    f.label = "purified(" + g1.label + "," + g2.label + ")";
    return f;
}

ScalarFunctionals scalar_functionals(const Activation& f,
                                     const QuadratureRule& rule) {
    ScalarFunctionals s;
    s.norm_f_sq = expect_1d([&](double x) {
        const double v = f(x);
        return v * v;
    }, rule);
    s.norm_fprime_sq = expect_1d([&](double x) {
        const double v = f.deriv1(x);
        return v * v;
    }, rule);
    s.inner_f_fpp =
        expect_1d([&](double x) { return f(x) * f.deriv2(x); }, rule);
    s.a0 = expect_1d(f.eval, rule);
    return s;
}

namespace {

Activation make_identity() {
    Activation f;
    f.eval = [](double x) { return x; };
    f.deriv1 = [](double) { return 1.0; };
    f.deriv2 = [](double) { return 0.0; };
    f.label = "identity";
    return f;
}

Activation make_h2() {
    const double inv = 1.0 / std::sqrt(2.0);
    Activation f;
    f.eval = [inv](double x) { return (x * x - 1.0) * inv; };
    f.deriv1 = [inv](double x) { return 2.0 * x * inv; };
    f.deriv2 = [inv](double) { return 2.0 * inv; };
    f.label = "h2";
    return f;
}

Activation make_h3() {
    const double inv = 1.0 / std::sqrt(6.0);
    Activation f;
    f.eval = [inv](double x) { return x * (x * x - 3.0) * inv; };
    f.deriv1 = [inv](double x) { return (3.0 * x * x - 3.0) * inv; };
    f.deriv2 = [inv](double x) { return 6.0 * x * inv; };
    f.label = "h3";
    return f;
}

Activation make_tanh() {
    Activation f;
    f.eval = [](double x) { return std::tanh(x); };
    f.deriv1 = [](double x) {
        const double t = std::tanh(x);
        return 1.0 - t * t;
    };
    f.deriv2 = [](double x) {
        const double t = std::tanh(x);
        return -2.0 * t * (1.0 - t * t);
    };
    f.bounded = true;
    f.bound = 1.0;
    f.label = "tanh";
    return f;
}

// erf(x / sqrt(2)), i.e. 2*Phi(x) - 1 for the standard normal CDF Phi.
Activation make_erf() {
    const double scale = std::sqrt(2.0 / M_PI);
    Activation f;
    f.eval = [](double x) { return std::erf(x * M_SQRT1_2); };
    f.deriv1 = [scale](double x) { return scale * std::exp(-0.5 * x * x); };
    f.deriv2 = [scale](double x) {
        return -x * scale * std::exp(-0.5 * x * x);
    };
    f.bounded = true;
    f.bound = 1.0;
    f.label = "erf";
    return f;
}

}  // namespace

Activation make_activation(const std::string& label,
                           const QuadratureRule& rule) {
    if (label == "identity") return make_identity();
    if (label == "h2") return make_h2();
    if (label == "h3") return make_h3();
    if (label == "tanh") return make_tanh();
    if (label == "erf") return make_erf();
    if (label == "purified") return purify(make_tanh(), make_erf(), rule);
    throw config_error("unknown activation label '" + label + "'");
}

std::vector<std::string> activation_labels() {
    return {"identity", "h2", "h3", "tanh", "erf", "purified"};
}

}  // namespace sgdlab
