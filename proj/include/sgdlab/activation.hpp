#ifndef SGDLAB_ACTIVATION_HPP
#define SGDLAB_ACTIVATION_HPP

#include <functional>
#include <string>
#include <vector>

#include "sgdlab/quadrature.hpp"

namespace sgdlab {

// Student/teacher nonlinearity with two closed-form derivatives.
struct Activation {
    std::function<double(double)> eval;
    std::function<double(double)> deriv1;
    std::function<double(double)> deriv2;
    bool bounded = false;
    double bound = 0.0;  // |f| <= bound when bounded
    std::string label;

    double operator()(double x) const { return eval(x); }
};

// Orthonormal probabilists' Hermite polynomial h_k(x), <h_j, h_k> = delta_jk
// in L^2(gamma). Three-term recurrence; 0 <= k <= 64.
double hermite_poly(int k, double x);

struct HermiteCoefficients {
    std::vector<double> a;  // a[k] = <f, h_k>, k = 0..truncation
    int truncation = 0;
    double tail_mass = 0.0;  // ||f||^2 - sum a_k^2
};

// a_k = E[f(Z) h_k(Z)] for k = 0..K; requires rule.order >= K + 10.
HermiteCoefficients hermite_coeffs(const Activation& f, int K,
                                   const QuadratureRule& rule);

// Smallest k >= 1 with |a_k| > tol, scanning k <= 16. Throws config_error
// when every scanned coefficient is below tol.
int information_exponent(const Activation& f, const QuadratureRule& rule,
                         double tol = 1e-8);

// f = g1 - c*g2 with c = a1(g1)/a1(g2): bounded and odd with a1(f) = 0, so
// the information exponent of f is at least 3.
Activation purify(const Activation& g1, const Activation& g2,
                  const QuadratureRule& rule);

struct ScalarFunctionals {
    double norm_f_sq = 0.0;      // E[f^2]
    double norm_fprime_sq = 0.0; // E[f'^2]
    double inner_f_fpp = 0.0;    // E[f f'']
    double a0 = 0.0;             // E[f]
};

ScalarFunctionals scalar_functionals(const Activation& f,
                                     const QuadratureRule& rule);

// Built-in catalog: identity, h2, h3, tanh, erf, purified.
// "erf" is x -> erf(x/sqrt(2)); "purified" is purify(tanh, erf).
Activation make_activation(const std::string& label,
                           const QuadratureRule& rule);
std::vector<std::string> activation_labels();

}  // namespace sgdlab

#endif  // SGDLAB_ACTIVATION_HPP
