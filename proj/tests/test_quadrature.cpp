#include <doctest.h>

#include <cmath>
#include <limits>

#include "sgdlab/errors.hpp"
#include "sgdlab/quadrature.hpp"

using namespace sgdlab;

namespace {

double double_factorial(int n) {  // (2m-1)!! for odd n, 1 for n <= 0
    double out = 1.0;
    for (int k = n; k > 1; k -= 2) out *= k;
    return out;
}

}  // namespace

TEST_SUITE("quadrature") {

TEST_CASE("low-order rules have the hand-solved nodes and weights") {
    const QuadratureRule r1 = gh_rule(1);
    CHECK(r1.nodes[0] == 0.0);
    CHECK(r1.weights[0] == doctest::Approx(1.0));

    const QuadratureRule r2 = gh_rule(2);
    CHECK(r2.nodes[0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(r2.nodes[1] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r2.weights[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(r2.weights[1] == doctest::Approx(0.5).epsilon(1e-14));

    // order 3: solve E[1]=1, E[Z^2]=1, E[Z^4]=3 with symmetric nodes
    // {-x, 0, x}: w x^2 = 1/2 per side and w x^4 = 3/2 gives x = sqrt(3),
    // w = 1/6, middle weight 2/3.
    const QuadratureRule r3 = gh_rule(3);
    CHECK(r3.nodes[0] == doctest::Approx(-std::sqrt(3.0)).epsilon(1e-14));
    CHECK(r3.nodes[1] == 0.0);
    CHECK(r3.nodes[2] == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));
    CHECK(r3.weights[0] == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    CHECK(r3.weights[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(r3.weights[2] == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
}

TEST_CASE("rule invariants hold up to the maximum order") {
    for (int order : {1, 2, 3, 7, 40, 80, 257, 400, 512}) {
        CAPTURE(order);
        const QuadratureRule rule = gh_rule(order);
        double w_sum = 0.0, second = 0.0;
        for (int i = 0; i < order; ++i) {
            w_sum += rule.weights[i];
            second += rule.weights[i] * rule.nodes[i] * rule.nodes[i];
        }
        CHECK(std::abs(w_sum - 1.0) < 1e-12);
        if (order >= 2) CHECK(std::abs(second - 1.0) < 1e-10);
        for (int i = 0; i < order; ++i)
            CHECK(std::abs(rule.nodes[i] + rule.nodes[order - 1 - i]) < 1e-12);
    }
}

TEST_CASE("order outside [1, 512] is a configuration error") {
    CHECK_THROWS_AS(gh_rule(0), config_error);
    CHECK_THROWS_AS(gh_rule(-3), config_error);
    CHECK_THROWS_AS(gh_rule(513), config_error);
}

TEST_CASE("gaussian moments integrate exactly up to degree 2n-1") {
    for (int order : {1, 2, 3, 4, 6, 8}) {
        const QuadratureRule rule = gh_rule(order);
        for (int deg = 0; deg <= 2 * order - 1; ++deg) {
            CAPTURE(order);
            CAPTURE(deg);
            const double got = expect_1d(
                [deg](double x) { return std::pow(x, deg); }, rule);
            const double want =
                (deg % 2 == 1) ? 0.0 : double_factorial(deg - 1);
            CHECK(std::abs(got - want) < 1e-9 * std::max(1.0, want));
        }
    }
}

TEST_CASE("expect_1d matches the stated examples") {
    const QuadratureRule rule = gh_rule(16);
    CHECK(expect_1d([](double x) { return x * x; }, rule) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(expect_1d([](double x) { return x * x * x * x; }, rule) ==
          doctest::Approx(3.0).epsilon(1e-12));
    // orthonormal h_3 squared
    CHECK(expect_1d(
              [](double x) {
                  const double h3 = x * (x * x - 3.0) / std::sqrt(6.0);
                  return h3 * h3;
              },
              rule) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("non-finite integrand reports the offending node") {
    // order-5 rule contains the node 0, where 1/x is infinite
    const QuadratureRule rule = gh_rule(5);
    CHECK_THROWS_WITH_AS(expect_1d([](double x) { return 1.0 / x; }, rule),
                         doctest::Contains("node"), eval_error);
    CHECK_THROWS_AS(
        expect_2d([](double x, double) { return 1.0 / x; }, rule), eval_error);
}

TEST_CASE("expect_2d separates products and matches the Wick value") {
    const QuadratureRule rule = gh_rule(24);
    CHECK(std::abs(expect_2d([](double x, double y) { return x * y; }, rule)) <
          1e-14);
    CHECK(expect_2d([](double x, double y) { return x * x * y * y; }, rule) ==
          doctest::Approx(1.0).epsilon(1e-12));
    // E[Z1 (0.3 Z1 + 0.8 Z2)^3] = 3 * 0.3 * (0.09 + 0.64) = 0.657 by Isserlis
    const double got = expect_2d(
        [](double x, double y) {
            const double s = 0.3 * x + 0.8 * y;
            return x * s * s * s;
        },
        rule);
    CHECK(got == doctest::Approx(0.657).epsilon(1e-12));
}

TEST_CASE("tensor product equals the product of marginals") {
    const QuadratureRule rule = gh_rule(31);
    auto g1 = [](double x) { return std::cos(x) + 0.2 * x * x; };
    auto g2 = [](double y) { return std::exp(-0.3 * y * y) + y; };
    const double joint =
        expect_2d([&](double x, double y) { return g1(x) * g2(y); }, rule);
    const double split = expect_1d(g1, rule) * expect_1d(g2, rule);
    CHECK(std::abs(joint - split) < 1e-12);
}

TEST_CASE("mc_expect agrees with the known gaussian moments") {
    RandomStream stream(42);
    const McEstimate zero =
        mc_expect([](double x) { return x; }, 1'000'000, stream);
    CHECK(std::abs(zero.mean) < 4.0 * zero.std_err);
    const McEstimate one =
        mc_expect([](double x) { return x * x; }, 1'000'000, stream);
    CHECK(std::abs(one.mean - 1.0) < 4.0 * one.std_err);
    const McEstimate cross = mc_expect(
        [](double x, double y) { return x * y; }, 500'000, stream);
    CHECK(std::abs(cross.mean) < 4.0 * cross.std_err);
    CHECK_THROWS_AS(mc_expect([](double x) { return x; }, 99, stream),
                    config_error);
}

TEST_CASE("random streams are reproducible with distinct substreams") {
    RandomStream a(7), b(7), c(8);
    bool all_equal = true, any_diff = false;
    for (int i = 0; i < 100; ++i) {
        const auto va = a.next_u64();
        all_equal = all_equal && va == b.next_u64();
        any_diff = any_diff || va != c.next_u64();
    }
    CHECK(all_equal);
    CHECK(any_diff);

    RandomStream s0 = RandomStream::substream(7, 0);
    RandomStream s1 = RandomStream::substream(7, 1);
    bool differ = false;
    for (int i = 0; i < 100; ++i) differ = differ || s0.next_u64() != s1.next_u64();
    CHECK(differ);
}

TEST_CASE("gaussian and chi-square draws have the right first moments") {
    RandomStream stream(11);
    const int n = 200'000;
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = stream.gaussian();
        sum += z;
        sum_sq += z * z;
    }
    CHECK(std::abs(sum / n) < 4.0 / std::sqrt(double(n)));
    CHECK(std::abs(sum_sq / n - 1.0) < 4.0 * std::sqrt(2.0 / double(n)));

    double chi_sum = 0.0;
    const double dof = 10.0;
    for (int i = 0; i < n; ++i) chi_sum += stream.chi_square(dof);
    const double se = std::sqrt(2.0 * dof / double(n));
    CHECK(std::abs(chi_sum / n - dof) < 4.0 * se);
}

}  // TEST_SUITE
