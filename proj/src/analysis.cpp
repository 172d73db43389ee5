#include "sgdlab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sgdlab/errors.hpp"

namespace sgdlab {

DeviationReport sup_deviation(const Trajectory& a, const Trajectory& b,
                              const std::vector<double>& grid) {
    if (grid.empty()) throw config_error("sup_deviation: empty grid");
    for (double t : grid) {
        if (t < a.t_begin() - 1e-12 || t > a.t_end() + 1e-12 ||
            t < b.t_begin() - 1e-12 || t > b.t_end() + 1e-12)
            throw domain_error("sup_deviation: grid point " +
                               std::to_string(t) +
                               " outside a trajectory span");
    }
    const std::size_t dim = a.states.front().size();
    if (dim != b.states.front().size())
        throw config_error("sup_deviation: dimension mismatch");

    DeviationReport rep;
    rep.grid = grid;
    rep.per_point.assign(dim, std::vector<double>(grid.size()));
    rep.sup.assign(dim, 0.0);
    for (std::size_t c = 0; c < dim; ++c) {
        for (std::size_t k = 0; k < grid.size(); ++k) {
            const double d = std::abs(a.interpolate(grid[k], int(c)) -
                                      b.interpolate(grid[k], int(c)));
            rep.per_point[c][k] = d;
            if (d > rep.sup[c]) rep.sup[c] = d;
        }
    }
    return rep;
}

double ks_statistic(std::vector<double> samples,
                    const std::function<double(double)>& cdf) {
    if (samples.empty()) throw config_error("ks_statistic: empty sample");
    std::sort(samples.begin(), samples.end());
    const double n = double(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double F = cdf(samples[i]);
        d = std::max(d, (double(i) + 1.0) / n - F);
        d = std::max(d, F - double(i) / n);
    }
    return d;
}

namespace {

// Asymptotic Kolmogorov survival function 2 sum (-1)^{k-1} e^{-2 k^2 x^2}.
double kolmogorov_p(double lambda) {
    if (lambda <= 0.0) return 1.0;
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 100000; ++k) {
        const double term = std::exp(-2.0 * double(k) * double(k) * lambda * lambda);
        if (term < 1e-12) break;
        sum += sign * term;
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

}  // namespace

KsResult ks_test(const std::vector<double>& samples,
                 const std::function<double(double)>& cdf) {
    if (samples.size() < 8)
        throw config_error("ks_test: need at least 8 samples for the "
                           "asymptotic p-value");
    KsResult res;
    res.statistic = ks_statistic(samples, cdf);
    res.p_value = kolmogorov_p(std::sqrt(double(samples.size())) * res.statistic);
    return res;
}

MomentEstimate empirical_moments(const std::vector<double>& samples, int k) {
    if (k != 2 && k != 4 && k != 8)
        throw config_error("empirical_moments: k must be 2, 4, or 8");
    const std::size_t n = samples.size();
    if (n < 2) throw config_error("empirical_moments: need >= 2 samples");

    std::vector<double> powers(n);
    for (std::size_t i = 0; i < n; ++i) {
        double v = samples[i] * samples[i];
        if (k >= 4) v *= v;
        if (k == 8) v *= v;
        powers[i] = v;
    }
    double mean = 0.0;
    for (double v : powers) mean += v;
    mean /= double(n);

    // Jackknife over leave-one-out means: theta_(i) = (n*theta - x_i)/(n-1).
    double ss = 0.0;
    for (double v : powers) {
        const double loo = (double(n) * mean - v) / double(n - 1);
        ss += (loo - mean) * (loo - mean);
    }
    MomentEstimate est;
    est.moment = mean;
    est.std_err = std::sqrt(ss * double(n - 1) / double(n));
    return est;
}

ScalingTable localizability_diagnostics(const ModelFunctions& mdl,
                                        const std::vector<std::int64_t>& N_list,
                                        std::int64_t n_samples, double m,
                                        double r2, std::uint64_t seed) {
    if (N_list.empty())
        throw config_error("localizability_diagnostics: empty N list");
    for (auto n : N_list)
        if (n < 32)
            throw config_error("localizability_diagnostics: each N must be >= 32");
    if (n_samples < 100)
        throw config_error("localizability_diagnostics: need >= 100 samples");

    const double r = std::sqrt(r2);
    const GradCoeffs phi = population_grad_coeffs({m, r2, {}}, mdl);
    // x = m e_1 + r e_2 so grad Phi = d_m e_1 + 2 r d_r2 e_2 and
    // grad r_perp^2 = 2 r e_2.
    const double gp1 = phi.d_m;
    const double gp2 = 2.0 * r * phi.d_r2;
    const double gp_norm_sq = gp1 * gp1 + gp2 * gp2;
    const auto& f = mdl.f;

    ScalingTable table;
    table.N = N_list;
    for (std::size_t idx = 0; idx < N_list.size(); ++idx) {
        const double N = double(N_list[idx]);
        RandomStream stream = RandomStream::substream(seed, idx);
        std::vector<double> c0(n_samples), c1(n_samples), c2(n_samples);
        for (std::int64_t i = 0; i < n_samples; ++i) {
            const double a1 = stream.gaussian();
            const double a2 = stream.gaussian();
            const double w = stream.chi_square(N - 2.0);
            const double eps = mdl.c_eps > 0.0
                                   ? std::sqrt(mdl.c_eps) * stream.gaussian()
                                   : 0.0;
            const double pre = m * a1 + r * a2;
            const double g = 2.0 * (f(pre) - f(a1) - eps) * f.deriv1(pre);
            // grad H = g a - grad Phi
            const double h_norm_sq = g * g * (a1 * a1 + a2 * a2 + w) -
                                     2.0 * g * (gp1 * a1 + gp2 * a2) +
                                     gp_norm_sq;
            const double h1 = g * a1 - gp1;
            const double h2 = g * a2 - gp2;
            const double hn2 = h_norm_sq * h_norm_sq;
            c0[i] = hn2 * hn2 / (N * N * N * N);       // ||grad H||^8 / N^4
            const double ip = 2.0 * r * h2;            // <grad H, grad r2>
            const double ip2 = ip * ip;
            c1[i] = ip2 * ip2 / (N * N);
            const double h1_2 = h1 * h1;               // <grad H, grad mt>^4/N^2
            c2[i] = h1_2 * h1_2;
        }
        auto mean_se = [&](const std::vector<double>& xs) {
            double mean = 0.0;
            for (double x : xs) mean += x;
            mean /= double(xs.size());
            double ss = 0.0;
            for (double x : xs) ss += (x - mean) * (x - mean);
            const double se =
                std::sqrt(ss / double(xs.size() - 1) / double(xs.size()));
            return std::array<double, 2>{mean, se};
        };
        const auto s0 = mean_se(c0), s1 = mean_se(c1), s2 = mean_se(c2);
        table.value.push_back({s0[0], s1[0], s2[0]});
        table.std_err.push_back({s0[1], s1[1], s2[1]});
    }
    for (int c = 0; c < 3; ++c) {
        const double first = table.value.front()[c];
        const double last = table.value.back()[c];
        if (first > 0.0 && last / first > 4.0) table.flagged[c] = true;
    }
    return table;
}

}  // namespace sgdlab
