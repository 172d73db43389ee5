#ifndef SGDLAB_TESTS_SUPPORT_HPP
#define SGDLAB_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "sgdlab/activation.hpp"

namespace testsupport {

inline double normal_cdf(double x, double mean = 0.0, double sd = 1.0) {
    return 0.5 * std::erfc(-(x - mean) / (sd * std::sqrt(2.0)));
}

// Two-sample KS with the asymptotic Kolmogorov p-value at the effective
// sample size n1*n2/(n1+n2). Test-only oracle for law-equality checks.
struct TwoSampleKs {
    double statistic;
    double p_value;
};

inline TwoSampleKs ks_two_sample(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = double(a.size()), nb = double(b.size());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j]) ++i;
        else ++j;
        d = std::max(d, std::abs(double(i) / na - double(j) / nb));
    }
    const double n_eff = na * nb / (na + nb);
    const double lambda = std::sqrt(n_eff) * d;
    double sum = 0.0, sign = 1.0;
    for (int k = 1; k <= 100000; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        if (term < 1e-12) break;
        sum += sign * term;
        sign = -sign;
    }
    return {d, std::clamp(2.0 * sum, 0.0, 1.0)};
}

// Small custom activations for edge-case tests.
inline sgdlab::Activation zero_activation() {
    sgdlab::Activation f;
    f.eval = [](double) { return 0.0; };
    f.deriv1 = [](double) { return 0.0; };
    f.deriv2 = [](double) { return 0.0; };
    f.bounded = true;
    f.bound = 0.0;
    f.label = "zero";
    return f;
}

inline sgdlab::Activation shifted_tanh(double shift) {
    sgdlab::Activation f;
    f.eval = [shift](double x) { return std::tanh(x) + shift; };
    f.deriv1 = [](double x) {
        const double t = std::tanh(x);
        return 1.0 - t * t;
    };
    f.deriv2 = [](double x) {
        const double t = std::tanh(x);
        return -2.0 * t * (1.0 - t * t);
    };
    f.bounded = true;
    f.bound = 1.0 + std::abs(shift);
    f.label = "shifted_tanh";
    return f;
}

inline sgdlab::Activation square_activation() {
    sgdlab::Activation f;
    f.eval = [](double x) { return x * x; };
    f.deriv1 = [](double x) { return 2.0 * x; };
    f.deriv2 = [](double) { return 2.0; };
    f.label = "square";
    return f;
}

}  // namespace testsupport

#endif  // SGDLAB_TESTS_SUPPORT_HPP
