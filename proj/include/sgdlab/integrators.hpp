#ifndef SGDLAB_INTEGRATORS_HPP
#define SGDLAB_INTEGRATORS_HPP

#include <functional>
#include <string>
#include <vector>

#include "sgdlab/random.hpp"

namespace sgdlab {

using Vec = std::vector<double>;

// Dense row-major matrix, only ever tiny (state dimension 1 or 2).
struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    double operator()(int r, int c) const { return data[r * cols + c]; }
};

// Sampled path on the macroscopic clock: times strictly increasing from 0.
struct Trajectory {
    std::vector<double> times;
    std::vector<Vec> states;
    std::vector<std::string> meta;  // one label per coordinate

    // Linear interpolation of coordinate `coord` at time t (t within span).
    double interpolate(double t, int coord) const;
    double t_begin() const { return times.front(); }
    double t_end() const { return times.back(); }
};

// Any coordinate beyond this magnitude aborts integration with
// divergence_error carrying the blow-up time.
inline constexpr double kDivergenceThreshold = 1e8;

// Classical fourth-order Runge-Kutta on a uniform grid (last step shortened
// to land on t_end exactly).
Trajectory rk4(const std::function<Vec(const Vec&)>& rhs, Vec u0, double t_end,
               double dt);

// u_{n+1} = u_n + drift(u_n) dt + vol(u_n) sqrt(dt) xi_n, xi_n ~ N(0, I).
Trajectory euler_maruyama(const std::function<Vec(const Vec&)>& drift,
                          const std::function<Mat(const Vec&)>& vol, Vec u0,
                          double t_end, double dt, RandomStream& stream);

struct OUMoments {
    double mean = 0.0;
    double var = 0.0;
};

// Marginal law of dX = -theta X dt + vol dB from X(0) = m0:
// mean = m0 e^{-theta t}, var = vol^2 (1 - e^{-2 theta t}) / (2 theta).
OUMoments ou_moments(double theta, double vol, double m0, double t);

}  // namespace sgdlab

#endif  // SGDLAB_INTEGRATORS_HPP
