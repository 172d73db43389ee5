#include "sgdlab/sgd.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <thread>

#include "sgdlab/errors.hpp"
#include "sgdlab/integrators.hpp"

namespace sgdlab {

namespace {

constexpr std::int64_t kMaxSteps = 100'000'000;  // per-run guard

double draw_noise(const SimConfig& cfg, RandomStream& stream) {
    if (cfg.c_eps == 0.0) return 0.0;
    const double s = std::sqrt(cfg.c_eps);
    if (cfg.noise == NoiseLaw::gaussian) return s * stream.gaussian();
    return stream.uniform() < 0.5 ? s : -s;  // two-point, mean 0, var C_eps
}

void check_summary_finite(double m, double q, double t) {
    if (!std::isfinite(m) || !std::isfinite(q) ||
        std::abs(m) > kDivergenceThreshold || q > kDivergenceThreshold)
        throw divergence_error(
            "SGD summary statistics diverged at t = " + std::to_string(t), t);
}

}  // namespace

void SimConfig::validate() const {
    if (N < 8) throw config_error("SimConfig: N must be >= 8");
    if (!(c_delta > 0.0)) throw config_error("SimConfig: c_delta must be > 0");
    if (!(t_end > 0.0)) throw config_error("SimConfig: t_end must be > 0");
    if (init_sigma2 < 0.0)
        throw config_error("SimConfig: init_sigma2 must be >= 0");
    if (c_eps < 0.0) throw config_error("SimConfig: C_eps must be >= 0");
    if (record_stride < 0)
        throw config_error("SimConfig: record_stride must be >= 0");
    if (steps() > kMaxSteps)
        throw config_error("SimConfig: t_end * N / c_delta exceeds the 1e8 "
                           "step guard");
}

std::int64_t SimConfig::steps() const {
    return static_cast<std::int64_t>(
        std::ceil(t_end * double(N) / c_delta - 1e-9));
}

std::int64_t SimConfig::effective_stride() const {
    if (record_stride > 0) return record_stride;
    return std::max<std::int64_t>(1, N / 100);
}

std::string SimConfig::digest() const {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%lld|%.17g|%.17g|%.17g|%d|%.17g|%d|%lld",
                  static_cast<long long>(N), c_delta, t_end, init_sigma2,
                  init_at_fixed_point ? 1 : 0, c_eps,
                  noise == NoiseLaw::gaussian ? 0 : 1,
                  static_cast<long long>(record_stride));
    std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
    for (const char* p = buf; *p; ++p) {
        h ^= static_cast<unsigned char>(*p);
        h *= 1099511628211ULL;
    }
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::vector<double> grad_loss(const std::vector<double>& x,
                              const std::vector<double>& a, double y,
                              const Activation& f) {
    double pre = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) pre += a[i] * x[i];
    const double g = -2.0 * (y - f(pre)) * f.deriv1(pre);
    std::vector<double> grad(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) grad[i] = g * a[i];
    return grad;
}

void sgd_step_full(FullState& state, const std::vector<double>& a, double eps,
                   const SimConfig& cfg, const Activation& f) {
    auto& x = state.x;
    const double delta = cfg.c_delta / double(cfg.N);
    double pre = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) pre += a[i] * x[i];
    const double y = f(a[0]) + eps;  // teacher direction is e_1
    const double g = 2.0 * (f(pre) - y) * f.deriv1(pre);
    const double scale = delta * g;
    for (std::size_t i = 0; i < x.size(); ++i) x[i] -= scale * a[i];
}

ReducedState reduced_step(const ReducedState& state, double a1, double a2,
                          double w, double eps, const SimConfig& cfg,
                          const Activation& f) {
    if (w < 0.0) throw domain_error("reduced_step: w must be >= 0");
    if (state.q < 0.0) throw domain_error("reduced_step: q must be >= 0");
    const double delta = cfg.c_delta / double(cfg.N);
    const double r = std::sqrt(state.q);
    const double pre = state.m * a1 + r * a2;
    const double y = f(a1) + eps;
    const double g = 2.0 * (f(pre) - y) * f.deriv1(pre);

    ReducedState next;
    next.m = state.m - delta * g * a1;
    const double norm_sq = (state.m * state.m + state.q) -
                           2.0 * delta * g * pre +
                           delta * delta * g * g * (a1 * a1 + a2 * a2 + w);
    double q = norm_sq - next.m * next.m;
    if (q < -1e-12)
        throw invariant_error("reduced_step: q went below -1e-12 (" +
                              std::to_string(q) + ")");
    next.q = q < 0.0 ? 0.0 : q;
    return next;
}

namespace {

struct Recorder {
    explicit Recorder(const SimConfig& cfg, std::uint64_t seed)
        : stride(cfg.effective_stride()),
          delta(cfg.c_delta / double(cfg.N)),
          sqrt_n(std::sqrt(double(cfg.N))) {
        traj.seed = seed;
        traj.config_digest = cfg.digest();
    }

    void record(std::int64_t step, double m, double q) {
        traj.times.push_back(double(step) * delta);
        traj.m.push_back(m);
        traj.r2.push_back(q);
        traj.m_tilde.push_back(sqrt_n * m);
    }

    bool due(std::int64_t step, std::int64_t total) const {
        return step % stride == 0 || step == total;
    }

    SummaryTrajectory traj;
    std::int64_t stride;
    double delta;
    double sqrt_n;
};

}  // namespace

SummaryTrajectory run_full(const SimConfig& cfg, const Activation& f,
                           RandomStream& stream) {
    cfg.validate();
    const std::int64_t n = cfg.N;
    const std::int64_t total = cfg.steps();

    FullState state;
    state.x.assign(n, 0.0);
    if (cfg.init_sigma2 > 0.0) {
        const double scale = std::sqrt(cfg.init_sigma2 / double(n));
        for (auto& xi : state.x) xi = scale * stream.gaussian();
    }

    Recorder rec(cfg, stream.seed());
    std::vector<double> a(n);
    auto summary = [&](double& m, double& q) {
        m = state.x[0];
        q = 0.0;
        for (std::int64_t i = 1; i < n; ++i) q += state.x[i] * state.x[i];
    };
    double m, q;
    summary(m, q);
    rec.record(0, m, q);

    for (std::int64_t step = 1; step <= total; ++step) {
        for (auto& ai : a) ai = stream.gaussian();
        const double eps = draw_noise(cfg, stream);
        sgd_step_full(state, a, eps, cfg, f);
        if (rec.due(step, total)) {
            summary(m, q);
            check_summary_finite(m, q, double(step) * rec.delta);
            rec.record(step, m, q);
        }
    }
    return rec.traj;
}

SummaryTrajectory run_reduced(const SimConfig& cfg, const Activation& f,
                              RandomStream& stream) {
    cfg.validate();
    const std::int64_t total = cfg.steps();

    // Exact law of (m, r_perp^2) under X0 ~ N(0, sigma^2/N I):
    // m ~ N(0, sigma^2/N), q ~ (sigma^2/N) chi^2_{N-1}, independent.
    ReducedState state;
    if (cfg.init_sigma2 > 0.0) {
        state.m = std::sqrt(cfg.init_sigma2 / double(cfg.N)) * stream.gaussian();
        state.q = cfg.init_sigma2 / double(cfg.N) *
                  stream.chi_square(double(cfg.N - 1));
    }

    Recorder rec(cfg, stream.seed());
    rec.record(0, state.m, state.q);
    for (std::int64_t step = 1; step <= total; ++step) {
        const double a1 = stream.gaussian();
        const double a2 = stream.gaussian();
        const double w = stream.chi_square(double(cfg.N - 2));
        const double eps = draw_noise(cfg, stream);
        state = reduced_step(state, a1, a2, w, eps, cfg, f);
        if (rec.due(step, total)) {
            check_summary_finite(state.m, state.q, double(step) * rec.delta);
            rec.record(step, state.m, state.q);
        }
    }
    return rec.traj;
}

EnsembleStats run_ensemble(const SimConfig& cfg, const Activation& f,
                           int n_seeds, ChainMode mode,
                           std::uint64_t base_seed, int n_threads) {
    cfg.validate();
    if (n_seeds < 2) throw config_error("run_ensemble: need n_seeds >= 2");
    if (n_threads < 1) n_threads = 1;

    std::vector<SummaryTrajectory> runs(n_seeds);
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (;;) {
            const int s = next.fetch_add(1);
            if (s >= n_seeds) return;
            RandomStream stream = RandomStream::substream(base_seed, s);
            runs[s] = (mode == ChainMode::full) ? run_full(cfg, f, stream)
                                                : run_reduced(cfg, f, stream);
        }
    };
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    const std::size_t n_times = runs[0].times.size();
    EnsembleStats out;
    out.times = runs[0].times;
    out.n_seeds = n_seeds;
    out.N = cfg.N;
    out.samples_m.assign(n_times, std::vector<double>(n_seeds));
    out.samples_r2.assign(n_times, std::vector<double>(n_seeds));
    out.samples_mt.assign(n_times, std::vector<double>(n_seeds));
    for (int s = 0; s < n_seeds; ++s) {
        if (runs[s].times.size() != n_times)
            throw invariant_error("run_ensemble: inconsistent record grids");
        for (std::size_t k = 0; k < n_times; ++k) {
            out.samples_m[k][s] = runs[s].m[k];
            out.samples_r2[k][s] = runs[s].r2[k];
            out.samples_mt[k][s] = runs[s].m_tilde[k];
        }
    }
    auto reduce = [n_seeds](const std::vector<double>& xs, double& mean,
                            double& var) {
        double s = 0.0;
        for (double x : xs) s += x;
        mean = s / n_seeds;
        double ss = 0.0;
        for (double x : xs) ss += (x - mean) * (x - mean);
        var = ss / (n_seeds - 1);
    };
    out.m_mean.resize(n_times);
    out.m_var.resize(n_times);
    out.r2_mean.resize(n_times);
    out.r2_var.resize(n_times);
    out.mt_mean.resize(n_times);
    out.mt_var.resize(n_times);
    for (std::size_t k = 0; k < n_times; ++k) {
        reduce(out.samples_m[k], out.m_mean[k], out.m_var[k]);
        reduce(out.samples_r2[k], out.r2_mean[k], out.r2_var[k]);
        reduce(out.samples_mt[k], out.mt_mean[k], out.mt_var[k]);
    }
    return out;
}

double coupled_check(const SimConfig& cfg, const Activation& f,
                     RandomStream& stream, std::int64_t n_steps) {
    cfg.validate();
    if (cfg.N > 4096) throw config_error("coupled_check: N must be <= 4096");
    const std::int64_t n = cfg.N;

    FullState full;
    full.x.assign(n, 0.0);
    if (cfg.init_sigma2 > 0.0) {
        const double scale = std::sqrt(cfg.init_sigma2 / double(n));
        for (auto& xi : full.x) xi = scale * stream.gaussian();
    }
    ReducedState red;
    red.m = full.x[0];
    red.q = 0.0;
    for (std::int64_t i = 1; i < n; ++i) red.q += full.x[i] * full.x[i];

    std::vector<double> a(n);
    double worst = 0.0;
    for (std::int64_t step = 0; step < n_steps; ++step) {
        for (auto& ai : a) ai = stream.gaussian();
        const double eps = draw_noise(cfg, stream);

        // Extract the reduced draws from the full vector before stepping.
        const double a1 = a[0];
        double a_dot_xperp = 0.0, norm_a_sq = 0.0;
        for (std::int64_t i = 0; i < n; ++i) norm_a_sq += a[i] * a[i];
        for (std::int64_t i = 1; i < n; ++i) a_dot_xperp += a[i] * full.x[i];
        const double r = std::sqrt(red.q);
        const double a2 = r > 0.0 ? a_dot_xperp / r : 0.0;
        const double w = std::max(norm_a_sq - a1 * a1 - a2 * a2, 0.0);

        sgd_step_full(full, a, eps, cfg, f);
        red = reduced_step(red, a1, a2, w, eps, cfg, f);

        const double m_full = full.x[0];
        double q_full = 0.0;
        for (std::int64_t i = 1; i < n; ++i) q_full += full.x[i] * full.x[i];
        const double dev = std::abs(m_full - red.m) + std::abs(q_full - red.q);
        if (dev > worst) worst = dev;
    }
    return worst;
}

}  // namespace sgdlab
