#ifndef SGDLAB_DYNAMICS_HPP
#define SGDLAB_DYNAMICS_HPP

#include <optional>

#include "sgdlab/activation.hpp"
#include "sgdlab/quadrature.hpp"

namespace sgdlab {

// Activation + label-noise variance + quadrature rule; all drift, corrector
// and volatility evaluations go through one of these. Immutable, shareable.
struct ModelFunctions {
    ModelFunctions(Activation activation, double noise_var,
                   QuadratureRule rule);

    Activation f;
    double c_eps = 0.0;  // Var(eps) of the label noise
    QuadratureRule rule;
    ScalarFunctionals fn;  // cached ||f||^2, ||f'||^2, <f,f''>, a0
};

// State of the summary statistics: correlation m = <x, X*> and orthogonal
// radius squared r2 = ||x||^2 - m^2; m_tilde = sqrt(N) m when tracked.
struct SummaryPoint {
    double m = 0.0;
    double r2 = 0.0;
    std::optional<double> m_tilde;
};

struct SummaryRates {
    double m = 0.0;
    double r2 = 0.0;
};

// Population drift F = (F_m, F_r2):
//   F_m  = 2 E[a1 f'(s) (f(s) - f(a1))],        s = a1 m + a2 r_perp
//   F_r2 = 4 r_perp E[a2 f'(s) (f(s) - f(a1))]
SummaryRates population_drift(const SummaryPoint& p, const ModelFunctions& mdl);

// Corrector G = (0, G_r2), G_r2 = 4 E[f'(s)^2 ((f(s) - f(a1))^2 + C_eps)].
SummaryRates corrector(const SummaryPoint& p, const ModelFunctions& mdl);

// Effective drift H = -F + G; right-hand side of the ballistic system.
SummaryRates effective_drift(const SummaryPoint& p, const ModelFunctions& mdl);

// Closed-form radial rhs on the saddle set m = 0 (valid when a0(f) = 0):
//   4 E[f'^2](C_eps + ||f||^2 - r2) + 4 E[f'^2 f^2] - 4 r2 E[f'' f],
// all expectations of the argument a2 * r_perp. Agrees with the r2 component
// of effective_drift at m = 0.
double ode_rhs_m0(double r2, const ModelFunctions& mdl);

// Drift of the rescaled correlation: -2 m_tilde E[f'^2 + f f''](a2 r_perp).
double rescaled_drift_mtilde(double m_tilde, double r2,
                             const ModelFunctions& mdl);

// The paper-internal volatility expressions disagree; `direct` evaluates the
// defining integrand and is authoritative, the other two reproduce the
// printed closed forms for comparison.
enum class SigmaVariant { direct, theorem_statement, proof_form };

// Sigma_11 at m = 0:
//   direct:            4 E[a1^2 f'(a2 r)^2 ((f(a2 r) - f(a1))^2 + C_eps)]
//   theorem_statement: 4 (E[f'^2 f^2] + E[f^2](||f||^2 + 2||f'||^2 + 2<f,f''>))
//   proof_form:        4 E[f'^2 f^2]
//                      + 4 (E[f'^2] + C_eps)(||f||^2 + 2||f'||^2 + 2<f,f''>)
double volatility_sigma11(double r2, const ModelFunctions& mdl,
                          SigmaVariant variant);

struct FixedPoint {
    double r2_star = 0.0;
    double residual = 0.0;  // ode_rhs_m0 at r2_star
};

// Leftmost zero of ode_rhs_m0 in the bracket: scans a geometric grid for the
// first sign change, then bisects to |residual| <= 1e-10 (or 200 iterations).
// Throws bracket_error when no sign change exists (e.g. unbounded f whose
// radial dynamics diverge, or noise too large for this activation).
FixedPoint fixed_point(const ModelFunctions& mdl, double r2_lo = 1e-4,
                       double r2_hi = 25.0);

// Mean reversion of the rescaled correlation at the radial fixed point.
struct OUParams {
    double theta = 0.0;           // rate, > 0
    double vol = 0.0;             // diffusion coefficient
    double stationary_var = 0.0;  // vol^2 / (2 theta)
};

// theta = 2 E[f'^2 + f f''](a2 r_perp*), vol = sqrt(Sigma_11 direct).
// Throws invariant_error when theta <= 0.
OUParams ou_params(const FixedPoint& fp, const ModelFunctions& mdl);

// Partial derivatives of the population loss in the summary coordinates:
//   d_m phi  = 2 E[a1 f'(s)(f(s) - f(a1))]
//   d_r2 phi = (1/r_perp) E[a2 f'(s)(f(s) - f(a1))]
struct GradCoeffs {
    double d_m = 0.0;
    double d_r2 = 0.0;
};

GradCoeffs population_grad_coeffs(const SummaryPoint& p,
                                  const ModelFunctions& mdl);

}  // namespace sgdlab

#endif  // SGDLAB_DYNAMICS_HPP
