#include "sgdlab/dynamics.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "sgdlab/errors.hpp"

namespace sgdlab {

ModelFunctions::ModelFunctions(Activation activation, double noise_var,
                               QuadratureRule quad)
    : f(std::move(activation)), c_eps(noise_var), rule(std::move(quad)) {
    if (c_eps < 0.0) throw config_error("ModelFunctions: C_eps must be >= 0");
    fn = scalar_functionals(f, rule);
}

namespace {

void require_positive_r2(double r2, const char* who) {
    if (!(r2 > 0.0))
        throw domain_error(std::string(who) + ": requires r2 > 0, got " +
                           std::to_string(r2));
}

}  // namespace

SummaryRates population_drift(const SummaryPoint& p,
                              const ModelFunctions& mdl) {
    require_positive_r2(p.r2, "population_drift");
    const double m = p.m;
    const double r = std::sqrt(p.r2);
    const auto& f = mdl.f;
    const double fm = 2.0 * expect_2d(
        [&](double a1, double a2) {
            const double s = a1 * m + a2 * r;
            return a1 * f.deriv1(s) * (f(s) - f(a1));
        },
        mdl.rule);
    const double fr2 = 4.0 * r * expect_2d(
        [&](double a1, double a2) {
            const double s = a1 * m + a2 * r;
            return a2 * f.deriv1(s) * (f(s) - f(a1));
        },
        mdl.rule);
    return {fm, fr2};
}

SummaryRates corrector(const SummaryPoint& p, const ModelFunctions& mdl) {
    require_positive_r2(p.r2, "corrector");
    const double m = p.m;
    const double r = std::sqrt(p.r2);
    const auto& f = mdl.f;
    const double g = 4.0 * expect_2d(
        [&](double a1, double a2) {
            const double s = a1 * m + a2 * r;
            const double d = f(s) - f(a1);
            const double fp = f.deriv1(s);
            return fp * fp * (d * d + mdl.c_eps);
        },
        mdl.rule);
    return {0.0, g};
}

SummaryRates effective_drift(const SummaryPoint& p, const ModelFunctions& mdl) {
    const SummaryRates F = population_drift(p, mdl);
    const SummaryRates G = corrector(p, mdl);
    return {-F.m + G.m, -F.r2 + G.r2};
}

double ode_rhs_m0(double r2, const ModelFunctions& mdl) {
    require_positive_r2(r2, "ode_rhs_m0");
    if (std::abs(mdl.fn.a0) > 1e-9)
        throw domain_error(
            "ode_rhs_m0: closed form requires a0(f) = 0 (a0 = " +
            std::to_string(mdl.fn.a0) + " for '" + mdl.f.label +
            "'); use effective_drift instead");
    const double r = std::sqrt(r2);
    const auto& f = mdl.f;
    const double e_fp2 = expect_1d(
        [&](double z) {
            const double v = f.deriv1(r * z);
            return v * v;
        },
        mdl.rule);
    const double e_fp2_f2 = expect_1d(
        [&](double z) {
            const double fp = f.deriv1(r * z);
            const double fv = f(r * z);
            return fp * fp * fv * fv;
        },
        mdl.rule);
    const double e_fpp_f = expect_1d(
        [&](double z) { return f.deriv2(r * z) * f(r * z); }, mdl.rule);
    return 4.0 * e_fp2 * (mdl.c_eps + mdl.fn.norm_f_sq - r2) +
           4.0 * e_fp2_f2 - 4.0 * r2 * e_fpp_f;
}

double rescaled_drift_mtilde(double m_tilde, double r2,
                             const ModelFunctions& mdl) {
    require_positive_r2(r2, "rescaled_drift_mtilde");
    const double r = std::sqrt(r2);
    const auto& f = mdl.f;
    const double coeff = expect_1d(
        [&](double z) {
            const double fp = f.deriv1(r * z);
            return fp * fp + f(r * z) * f.deriv2(r * z);
        },
        mdl.rule);
    return -2.0 * m_tilde * coeff;
}

double volatility_sigma11(double r2, const ModelFunctions& mdl,
                          SigmaVariant variant) {
    require_positive_r2(r2, "volatility_sigma11");
    const double r = std::sqrt(r2);
    const auto& f = mdl.f;
    switch (variant) {
        case SigmaVariant::direct:
            return 4.0 * expect_2d(
                [&](double a1, double a2) {
                    const double fp = f.deriv1(a2 * r);
                    const double d = f(a2 * r) - f(a1);
                    return a1 * a1 * fp * fp * (d * d + mdl.c_eps);
                },
                mdl.rule);
        case SigmaVariant::theorem_statement: {
            const double e_fp2_f2 = expect_1d(
                [&](double z) {
                    const double fp = f.deriv1(r * z);
                    const double fv = f(r * z);
                    return fp * fp * fv * fv;
                },
                mdl.rule);
            const double e_f2 = expect_1d(
                [&](double z) {
                    const double fv = f(r * z);
                    return fv * fv;
                },
                mdl.rule);
            const double bracket = mdl.fn.norm_f_sq +
                                   2.0 * mdl.fn.norm_fprime_sq +
                                   2.0 * mdl.fn.inner_f_fpp;
            return 4.0 * (e_fp2_f2 + e_f2 * bracket);
        }
        case SigmaVariant::proof_form: {
            const double e_fp2_f2 = expect_1d(
                [&](double z) {
                    const double fp = f.deriv1(r * z);
                    const double fv = f(r * z);
                    return fp * fp * fv * fv;
                },
                mdl.rule);
            const double e_fp2 = expect_1d(
                [&](double z) {
                    const double fp = f.deriv1(r * z);
                    return fp * fp;
                },
                mdl.rule);
            const double bracket = mdl.fn.norm_f_sq +
                                   2.0 * mdl.fn.norm_fprime_sq +
                                   2.0 * mdl.fn.inner_f_fpp;
            return 4.0 * e_fp2_f2 + 4.0 * (e_fp2 + mdl.c_eps) * bracket;
        }
    }
    throw config_error("volatility_sigma11: unknown variant");
}

FixedPoint fixed_point(const ModelFunctions& mdl, double r2_lo, double r2_hi) {
    if (!(r2_lo > 0.0) || !(r2_hi > r2_lo))
        throw config_error("fixed_point: need 0 < r2_lo < r2_hi");

    // Geometric scan for the leftmost sign change; the rhs need not be
    // monotone in r2.
    constexpr int kScanPoints = 128;
    const double ratio = std::pow(r2_hi / r2_lo, 1.0 / (kScanPoints - 1));
    double a = r2_lo;
    double fa = ode_rhs_m0(a, mdl);
    double b = 0.0, fb = 0.0;
    bool bracketed = false;
    for (int i = 1; i < kScanPoints; ++i) {
        b = (i == kScanPoints - 1) ? r2_hi : a * ratio;
        fb = ode_rhs_m0(b, mdl);
        if (fa == 0.0 || (fa < 0.0) != (fb < 0.0)) {
            bracketed = true;
            break;
        }
        a = b;
        fa = fb;
    }
    if (!bracketed)
        throw bracket_error(
            "fixed_point: no fixed point bracketed in [" +
            std::to_string(r2_lo) + ", " + std::to_string(r2_hi) +
            "] for '" + mdl.f.label + "' (radial drift does not change sign)");

    double mid = a, fmid = fa;
    for (int iter = 0; iter < 200 && std::abs(fmid) > 1e-10; ++iter) {
        mid = 0.5 * (a + b);
        fmid = ode_rhs_m0(mid, mdl);
        if ((fmid < 0.0) == (fa < 0.0)) {
            a = mid;
            fa = fmid;
        } else {
            b = mid;
        }
    }
    return {mid, fmid};
}

OUParams ou_params(const FixedPoint& fp, const ModelFunctions& mdl) {
    require_positive_r2(fp.r2_star, "ou_params");
    const double r = std::sqrt(fp.r2_star);
    const auto& f = mdl.f;
    OUParams out;
    out.theta = 2.0 * expect_1d(
        [&](double z) {
            const double fpv = f.deriv1(r * z);
            return fpv * fpv + f(r * z) * f.deriv2(r * z);
        },
        mdl.rule);
    if (!(out.theta > 0.0))
        throw invariant_error(
            "ou_params: mean-reversion rate is not positive (theta = " +
            std::to_string(out.theta) + ")");
    out.vol =
        std::sqrt(volatility_sigma11(fp.r2_star, mdl, SigmaVariant::direct));
    out.stationary_var = out.vol * out.vol / (2.0 * out.theta);
    return out;
}

GradCoeffs population_grad_coeffs(const SummaryPoint& p,
                                  const ModelFunctions& mdl) {
    require_positive_r2(p.r2, "population_grad_coeffs");
    const double m = p.m;
    const double r = std::sqrt(p.r2);
    const auto& f = mdl.f;
    GradCoeffs out;
    out.d_m = 2.0 * expect_2d(
        [&](double a1, double a2) {
            const double s = a1 * m + a2 * r;
            return a1 * f.deriv1(s) * (f(s) - f(a1));
        },
        mdl.rule);
    out.d_r2 = (1.0 / r) * expect_2d(
        [&](double a1, double a2) {
            const double s = a1 * m + a2 * r;
            return a2 * f.deriv1(s) * (f(s) - f(a1));
        },
        mdl.rule);
    return out;
}

}  // namespace sgdlab
