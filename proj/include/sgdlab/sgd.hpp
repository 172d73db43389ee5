#ifndef SGDLAB_SGD_HPP
#define SGDLAB_SGD_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "sgdlab/activation.hpp"
#include "sgdlab/random.hpp"

namespace sgdlab {

enum class NoiseLaw { gaussian, two_point };

// Online SGD on the sphere model: step size delta = c_delta / N, macroscopic
// horizon t_end (one time unit = N steps), X0 ~ N(0, init_sigma2 / N * I).
struct SimConfig {
    std::int64_t N = 0;          // dimension, >= 8
    double c_delta = 1.0;        // delta_N = c_delta / N
    double t_end = 0.0;          // macroscopic horizon, > 0
    double init_sigma2 = 1.0;    // X0 ~ N(0, sigma^2/N I)
    bool init_at_fixed_point = false;  // caller substitutes sigma^2 = r2_star
    double c_eps = 0.0;          // label noise variance
    NoiseLaw noise = NoiseLaw::gaussian;
    std::int64_t record_stride = 0;  // steps between records; 0 = max(1, N/100)

    void validate() const;
    std::int64_t steps() const;          // ceil(t_end * N / c_delta)
    std::int64_t effective_stride() const;
    std::string digest() const;          // FNV-1a hash of the fields, hex
};

// Teacher direction is the first basis vector; only x is stored.
struct FullState {
    std::vector<double> x;
};

// Summary-statistic chain state: correlation m and q = r_perp^2.
struct ReducedState {
    double m = 0.0;
    double q = 0.0;
};

// Recorded summary statistics of one run; m_tilde[k] = sqrt(N) * m[k].
struct SummaryTrajectory {
    std::vector<double> times;
    std::vector<double> m;
    std::vector<double> r2;
    std::vector<double> m_tilde;
    std::uint64_t seed = 0;
    std::string config_digest;
};

// Gradient of the single-sample loss (y - f(<a,x>))^2 in x:
// -2 (y - f(<a,x>)) f'(<a,x>) a.
std::vector<double> grad_loss(const std::vector<double>& x,
                              const std::vector<double>& a, double y,
                              const Activation& f);

// One online step: y = f(a_1) + eps, x <- x - (c_delta/N) grad_loss(x, a, y).
void sgd_step_full(FullState& state, const std::vector<double>& a, double eps,
                   const SimConfig& cfg, const Activation& f);

// Exact O(1) step of the summary-statistic chain. Draws: a1 = <a, X*>,
// a2 = <a, x_perp>/r_perp, w = |a|^2 - a1^2 - a2^2 ~ chi^2_{N-2}, plus the
// label noise eps. Equal in law to the summary statistics of sgd_step_full.
ReducedState reduced_step(const ReducedState& state, double a1, double a2,
                          double w, double eps, const SimConfig& cfg,
                          const Activation& f);

SummaryTrajectory run_full(const SimConfig& cfg, const Activation& f,
                           RandomStream& stream);

// Same law as run_full at O(1) cost per step; N may be as large as 1e9
// subject to the step-count guard.
SummaryTrajectory run_reduced(const SimConfig& cfg, const Activation& f,
                              RandomStream& stream);

enum class ChainMode { full, reduced };

// Per-time ensemble statistics plus the per-seed samples behind them.
// samples_*[k][s] is the value at times[k] for seed index s. Deterministic
// given base_seed regardless of n_threads.
struct EnsembleStats {
    std::vector<double> times;
    std::vector<double> m_mean, m_var;
    std::vector<double> r2_mean, r2_var;
    std::vector<double> mt_mean, mt_var;
    std::vector<std::vector<double>> samples_m;
    std::vector<std::vector<double>> samples_r2;
    std::vector<std::vector<double>> samples_mt;
    int n_seeds = 0;
    std::int64_t N = 0;
};

EnsembleStats run_ensemble(const SimConfig& cfg, const Activation& f,
                           int n_seeds, ChainMode mode,
                           std::uint64_t base_seed, int n_threads = 1);

// Runs the full chain and the reduced chain on the same per-step draws and
// returns max over steps of |m_full - m_red| + |q_full - q_red|. Up to
// roundoff this is zero: the reduced step is an algebraic identity.
double coupled_check(const SimConfig& cfg, const Activation& f,
                     RandomStream& stream, std::int64_t n_steps);

}  // namespace sgdlab

#endif  // SGDLAB_SGD_HPP
