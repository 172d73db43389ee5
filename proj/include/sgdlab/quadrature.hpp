#ifndef SGDLAB_QUADRATURE_HPP
#define SGDLAB_QUADRATURE_HPP

#include <functional>
#include <vector>

#include "sgdlab/random.hpp"

namespace sgdlab {

// Order-doubling from here to kMaxQuadOrder moves the bounded built-in
// activations' drift and volatility values by less than 1e-8; see the
// quadrature tests.
inline constexpr int kDefaultQuadOrder = 400;
inline constexpr int kMaxQuadOrder = 512;

// Gauss-Hermite rule in probabilists' normalization: weights sum to 1 and
// expect_1d(g) approximates E[g(Z)] for Z ~ N(0,1).
struct QuadratureRule {
    int order = 0;
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Golub-Welsch: nodes/weights from the symmetric tridiagonal Jacobi matrix
// of the probabilists' Hermite polynomials. 1 <= order <= kMaxQuadOrder;
// exact for polynomials of degree <= 2*order - 1.
QuadratureRule gh_rule(int order);

// sum_i w_i g(x_i) ~= E[g(Z)].
double expect_1d(const std::function<double(double)>& g,
                 const QuadratureRule& rule);

// Tensor product, ~= E[g(Z1, Z2)] with Z1, Z2 independent standard normals.
double expect_2d(const std::function<double(double, double)>& g,
                 const QuadratureRule& rule);

struct McEstimate {
    double mean = 0.0;
    double std_err = 0.0;
};

// Monte Carlo oracle for the same expectations; n_samples >= 100.
McEstimate mc_expect(const std::function<double(double)>& g,
                     long long n_samples, RandomStream& stream);
McEstimate mc_expect(const std::function<double(double, double)>& g,
                     long long n_samples, RandomStream& stream);

}  // namespace sgdlab

#endif  // SGDLAB_QUADRATURE_HPP
