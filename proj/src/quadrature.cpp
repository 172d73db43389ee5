#include "sgdlab/quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "sgdlab/errors.hpp"

namespace sgdlab {

QuadratureRule gh_rule(int order) {
    if (order < 1 || order > kMaxQuadOrder)
        throw config_error("gh_rule: order must be in [1, " +
                           std::to_string(kMaxQuadOrder) + "], got " +
                           std::to_string(order));

    QuadratureRule rule;
    rule.order = order;
    if (order == 1) {
        rule.nodes = {0.0};
        rule.weights = {1.0};
        return rule;
    }

    // Jacobi matrix: zero diagonal, off-diagonal beta_k = sqrt(k).
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(order);
    Eigen::VectorXd subdiag(order - 1);
    for (int k = 1; k < order; ++k) subdiag[k - 1] = std::sqrt(double(k));

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, subdiag);
    if (solver.info() != Eigen::Success)
        throw config_error("gh_rule: eigen-decomposition failed");

    rule.nodes.resize(order);
    rule.weights.resize(order);
    for (int i = 0; i < order; ++i) {
        rule.nodes[i] = solver.eigenvalues()[i];
        const double v = solver.eigenvectors()(0, i);
        rule.weights[i] = v * v;  // total mass of gamma is 1
    }

    // Enforce the exact +/- symmetry the spectrum has in exact arithmetic.
    for (int i = 0, j = order - 1; i < j; ++i, --j) {
        const double x = 0.5 * (rule.nodes[i] - rule.nodes[j]);
        rule.nodes[i] = x;
        rule.nodes[j] = -x;
        const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
        rule.weights[i] = rule.weights[j] = w;
    }
    if (order % 2 == 1) rule.nodes[order / 2] = 0.0;

    double total = 0.0;
    for (double w : rule.weights) total += w;
    for (double& w : rule.weights) w /= total;
    return rule;
}

double expect_1d(const std::function<double(double)>& g,
                 const QuadratureRule& rule) {
    double sum = 0.0;
    for (int i = 0; i < rule.order; ++i) {
        const double v = g(rule.nodes[i]);
        if (!std::isfinite(v))
            throw eval_error("expect_1d: non-finite integrand at node " +
                             std::to_string(rule.nodes[i]));
        sum += rule.weights[i] * v;
    }
    return sum;
}

double expect_2d(const std::function<double(double, double)>& g,
                 const QuadratureRule& rule) {
    double sum = 0.0;
    for (int i = 0; i < rule.order; ++i) {
        double row = 0.0;
        for (int j = 0; j < rule.order; ++j) {
            const double v = g(rule.nodes[i], rule.nodes[j]);
            if (!std::isfinite(v))
                throw eval_error("expect_2d: non-finite integrand at node (" +
                                 std::to_string(rule.nodes[i]) + ", " +
                                 std::to_string(rule.nodes[j]) + ")");
            row += rule.weights[j] * v;
        }
        sum += rule.weights[i] * row;
    }
    return sum;
}

namespace {

McEstimate finish(double sum, double sum_sq, long long n) {
    McEstimate est;
    est.mean = sum / double(n);
    const double var = (sum_sq / double(n) - est.mean * est.mean) *
                       double(n) / double(n - 1);
    est.std_err = std::sqrt(std::max(var, 0.0) / double(n));
    return est;
}

}  // namespace

McEstimate mc_expect(const std::function<double(double)>& g,
                     long long n_samples, RandomStream& stream) {
    if (n_samples < 100)
        throw config_error("mc_expect: need at least 100 samples");
    double sum = 0.0, sum_sq = 0.0;
    for (long long i = 0; i < n_samples; ++i) {
        const double v = g(stream.gaussian());
        if (!std::isfinite(v)) throw eval_error("mc_expect: non-finite value");
        sum += v;
        sum_sq += v * v;
    }
    return finish(sum, sum_sq, n_samples);
}

McEstimate mc_expect(const std::function<double(double, double)>& g,
                     long long n_samples, RandomStream& stream) {
    if (n_samples < 100)
        throw config_error("mc_expect: need at least 100 samples");
    double sum = 0.0, sum_sq = 0.0;
    for (long long i = 0; i < n_samples; ++i) {
        const double a = stream.gaussian();
        const double b = stream.gaussian();
        const double v = g(a, b);
        if (!std::isfinite(v)) throw eval_error("mc_expect: non-finite value");
        sum += v;
        sum_sq += v * v;
    }
    return finish(sum, sum_sq, n_samples);
}

}  // namespace sgdlab
