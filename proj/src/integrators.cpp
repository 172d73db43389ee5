#include "sgdlab/integrators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sgdlab/errors.hpp"

namespace sgdlab {

double Trajectory::interpolate(double t, int coord) const {
    if (times.empty()) throw domain_error("interpolate: empty trajectory");
    if (t < times.front() - 1e-12 || t > times.back() + 1e-12)
        throw domain_error("interpolate: t = " + std::to_string(t) +
                           " outside span [" + std::to_string(times.front()) +
                           ", " + std::to_string(times.back()) + "]");
    t = std::clamp(t, times.front(), times.back());
    const auto it = std::lower_bound(times.begin(), times.end(), t);
    const std::size_t hi = std::min<std::size_t>(
        std::max<std::ptrdiff_t>(it - times.begin(), 1), times.size() - 1);
    const std::size_t lo = hi - 1;
    const double span = times[hi] - times[lo];
    const double w = span > 0.0 ? (t - times[lo]) / span : 0.0;
    return (1.0 - w) * states[lo][coord] + w * states[hi][coord];
}

namespace {

void check_finite(const Vec& u, double t) {
    for (double v : u) {
        if (!std::isfinite(v))
            throw divergence_error(
                "integration diverged (non-finite state) at t = " +
                    std::to_string(t),
                t);
        if (std::abs(v) > kDivergenceThreshold)
            throw divergence_error(
                "integration diverged (|state| > 1e8) at t = " +
                    std::to_string(t),
                t);
    }
}

}  // namespace

Trajectory rk4(const std::function<Vec(const Vec&)>& rhs, Vec u0, double t_end,
               double dt) {
    if (!(dt > 0.0) || !(t_end >= dt))
        throw config_error("rk4: need dt > 0 and t_end >= dt");
    const std::size_t dim = u0.size();
    const long long n_steps = static_cast<long long>(std::ceil(t_end / dt - 1e-12));

    Trajectory traj;
    traj.times.reserve(n_steps + 1);
    traj.states.reserve(n_steps + 1);
    traj.times.push_back(0.0);
    traj.states.push_back(u0);

    Vec u = std::move(u0);
    Vec k1, k2, k3, k4, tmp(dim);
    double t = 0.0;
    for (long long step = 0; step < n_steps; ++step) {
        const double h = std::min(dt, t_end - t);
        k1 = rhs(u);
        for (std::size_t i = 0; i < dim; ++i) tmp[i] = u[i] + 0.5 * h * k1[i];
        k2 = rhs(tmp);
        for (std::size_t i = 0; i < dim; ++i) tmp[i] = u[i] + 0.5 * h * k2[i];
        k3 = rhs(tmp);
        for (std::size_t i = 0; i < dim; ++i) tmp[i] = u[i] + h * k3[i];
        k4 = rhs(tmp);
        for (std::size_t i = 0; i < dim; ++i)
            u[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        t = (step + 1 == n_steps) ? t_end : t + h;
        check_finite(u, t);
        traj.times.push_back(t);
        traj.states.push_back(u);
    }
    return traj;
}

Trajectory euler_maruyama(const std::function<Vec(const Vec&)>& drift,
                          const std::function<Mat(const Vec&)>& vol, Vec u0,
                          double t_end, double dt, RandomStream& stream) {
    if (!(dt > 0.0)) throw config_error("euler_maruyama: need dt > 0");
    const std::size_t dim = u0.size();
    const long long n_steps = static_cast<long long>(std::ceil(t_end / dt - 1e-12));
    const double sqdt = std::sqrt(dt);

    Trajectory traj;
    traj.times.reserve(n_steps + 1);
    traj.states.reserve(n_steps + 1);
    traj.times.push_back(0.0);
    traj.states.push_back(u0);

    Vec u = std::move(u0);
    Vec xi(dim);
    double t = 0.0;
    for (long long step = 0; step < n_steps; ++step) {
        const double h = std::min(dt, t_end - t);
        const Vec b = drift(u);
        const Mat s = vol(u);
        for (std::size_t i = 0; i < dim; ++i) xi[i] = stream.gaussian();
        for (std::size_t i = 0; i < dim; ++i) {
            double noise = 0.0;
            for (int j = 0; j < s.cols; ++j)
                noise += s(static_cast<int>(i), j) * xi[j];
            u[i] += b[i] * h + noise * (h == dt ? sqdt : std::sqrt(h));
        }
        t = (step + 1 == n_steps) ? t_end : t + h;
        check_finite(u, t);
        traj.times.push_back(t);
        traj.states.push_back(u);
    }
    return traj;
}

OUMoments ou_moments(double theta, double vol, double m0, double t) {
    if (!(theta > 0.0)) throw domain_error("ou_moments: theta must be > 0");
    if (!(t >= 0.0)) throw domain_error("ou_moments: t must be >= 0");
    OUMoments out;
    out.mean = m0 * std::exp(-theta * t);
    out.var = vol * vol * (1.0 - std::exp(-2.0 * theta * t)) / (2.0 * theta);
    return out;
}

}  // namespace sgdlab
