#ifndef SGDLAB_ANALYSIS_HPP
#define SGDLAB_ANALYSIS_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "sgdlab/dynamics.hpp"
#include "sgdlab/integrators.hpp"

namespace sgdlab {

// Pointwise and sup deviations between two trajectories on a common grid.
struct DeviationReport {
    std::vector<double> grid;
    // per_point[c][k]: |a - b| of coordinate c at grid[k]
    std::vector<std::vector<double>> per_point;
    std::vector<double> sup;  // per coordinate
    std::int64_t N = 0;
    int n_seeds = 0;
};

// Interpolates both trajectories onto `grid` and reports absolute
// differences per coordinate. Both spans must cover the grid.
DeviationReport sup_deviation(const Trajectory& a, const Trajectory& b,
                              const std::vector<double>& grid);

// One-sided KS statistic D for any sample size >= 1.
double ks_statistic(std::vector<double> samples,
                    const std::function<double(double)>& cdf);

struct KsResult {
    double statistic = 0.0;
    double p_value = 0.0;
};

// D plus the asymptotic Kolmogorov p-value
// p = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 n D^2); requires n >= 8.
KsResult ks_test(const std::vector<double>& samples,
                 const std::function<double(double)>& cdf);

struct MomentEstimate {
    double moment = 0.0;
    double std_err = 0.0;
};

// Sample k-th raw moment with jackknife standard error; k in {2, 4, 8}.
MomentEstimate empirical_moments(const std::vector<double>& samples, int k);

// Scaling of the sample-wise gradient-error moments with dimension, at a
// fixed summary point. Columns:
//   0: E||grad H||^8 / N^4
//   1: E<grad H, grad r_perp^2>^4 / N^2
//   2: E<grad H, grad m_tilde>^4 / N^2
// flagged[c] is set when column c GROWS by more than 4x from the smallest to
// the largest N (the boundedness being probed is an upper bound; decay is
// fine).
struct ScalingTable {
    std::vector<std::int64_t> N;
    std::vector<std::array<double, 3>> value;    // per N
    std::vector<std::array<double, 3>> std_err;  // per N
    std::array<bool, 3> flagged{false, false, false};
};

// Monte Carlo estimate at the point x = m e_1 + r_perp e_2 (grad Phi from
// population_grad_coeffs, grad m = e_1, grad r_perp^2 = 2(x - m e_1)).
// The N-vector sample a enters only through (a_1, a_2, |a|^2), which makes
// each sample O(1) in N without changing the law.
ScalingTable localizability_diagnostics(const ModelFunctions& mdl,
                                        const std::vector<std::int64_t>& N_list,
                                        std::int64_t n_samples, double m,
                                        double r2, std::uint64_t seed);

}  // namespace sgdlab

#endif  // SGDLAB_ANALYSIS_HPP
