// sgdlab: experiments on online SGD for single-index teacher-student models
// and their ballistic (ODE) / diffusive (SDE) effective dynamics.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "sgdlab/analysis.hpp"
#include "sgdlab/config.hpp"
#include "sgdlab/csv.hpp"
#include "sgdlab/dynamics.hpp"
#include "sgdlab/errors.hpp"
#include "sgdlab/integrators.hpp"
#include "sgdlab/sgd.hpp"
#include "sgdlab/svg.hpp"

namespace {

constexpr const char* kVersion = "sgdlab 0.1.0";

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitDivergence = 3;
constexpr int kExitStatFail = 4;

using namespace sgdlab;

struct Context {
    ExperimentConfig cfg;
    QuadratureRule rule;
    Activation f;
    ModelFunctions mdl;
};

Context make_context(const ExperimentConfig& cfg) {
    QuadratureRule rule = gh_rule(cfg.quad_order);
    Activation f;
    if (cfg.activation_label == "purified")
        f = purify(make_activation(cfg.purify_g1, rule),
                   make_activation(cfg.purify_g2, rule), rule);
    else
        f = make_activation(cfg.activation_label, rule);
    ModelFunctions mdl(f, cfg.c_eps, rule);
    return Context{cfg, std::move(rule), std::move(f), std::move(mdl)};
}

std::string path_join(const std::string& dir, const std::string& name) {
    return dir + "/" + name;
}

void write_manifest(const ExperimentConfig& cfg) {
    std::string text = "# ";
    text += kVersion;
    text += " manifest; re-run with: sgdlab ";
    text += cfg.kind + " --config manifest.ini\n" + cfg.to_ini();
    write_text_file(path_join(cfg.out_dir, "manifest.ini"), text);
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? int(hw) : 1;
}

std::vector<double> uniform_grid(double t_end, int n_points = 101) {
    std::vector<double> grid(n_points);
    for (int i = 0; i < n_points; ++i)
        grid[i] = t_end * double(i) / double(n_points - 1);
    return grid;
}

// Reference trajectory of the ballistic system. From the saddle set
// (init_m = 0, a0(f) = 0) the radial closed form applies and the correlation
// stays zero; otherwise the bivariate drift is integrated directly.
Trajectory ballistic_reference(const Context& ctx, double t_end) {
    const auto& cfg = ctx.cfg;
    if (cfg.init_m == 0.0 && std::abs(ctx.mdl.fn.a0) <= 1e-9) {
        Trajectory radial = rk4(
            [&](const Vec& u) { return Vec{ode_rhs_m0(u[0], ctx.mdl)}; },
            Vec{cfg.init_sigma2}, t_end, cfg.dt);
        Trajectory out;
        out.times = radial.times;
        out.meta = {"m", "r2"};
        out.states.reserve(radial.states.size());
        for (const auto& s : radial.states) out.states.push_back({0.0, s[0]});
        return out;
    }
    Trajectory out = rk4(
        [&](const Vec& u) {
            const SummaryRates h = effective_drift({u[0], u[1], {}}, ctx.mdl);
            return Vec{h.m, h.r2};
        },
        Vec{cfg.init_m, cfg.init_sigma2}, t_end, cfg.dt);
    out.meta = {"m", "r2"};
    return out;
}

void maybe_svg_trajectory(const Context& ctx, const EnsembleStats& ens,
                          const std::string& name) {
    if (!ctx.cfg.svg) return;
    std::vector<SvgSeries> series(2);
    series[0] = {"mean m", "#1f77b4", ens.times, ens.m_mean};
    series[1] = {"mean r2", "#d62728", ens.times, ens.r2_mean};
    write_text_file(path_join(ctx.cfg.out_dir, name + ".svg"),
                    render_line_chart(name, "t", "summary statistics", series));
}

void write_ensemble_csv(const Context& ctx, const EnsembleStats& ens,
                        const std::string& name) {
    CsvWriter csv(path_join(ctx.cfg.out_dir, name + ".csv"),
                  {"t", "m_mean", "m_var", "r2_mean", "r2_var", "mtilde_mean",
                   "mtilde_var", "n_seeds", "N"});
    for (std::size_t k = 0; k < ens.times.size(); ++k)
        csv.row({ens.times[k], ens.m_mean[k], ens.m_var[k], ens.r2_mean[k],
                 ens.r2_var[k], ens.mt_mean[k], ens.mt_var[k],
                 double(ens.n_seeds), double(ens.N)});
}

// ---------------------------------------------------------------------------
// subcommands
// ---------------------------------------------------------------------------

int cmd_hermite(const Context& ctx) {
    constexpr int kCoeffs = 16;
    const HermiteCoefficients coeffs =
        hermite_coeffs(ctx.f, kCoeffs, ctx.rule);
    CsvWriter csv(path_join(ctx.cfg.out_dir, "hermite.csv"), {"k", "a_k"});
    std::printf("activation %s\n", ctx.f.label.c_str());
    for (int k = 0; k <= kCoeffs; ++k) {
        csv.row({double(k), coeffs.a[k]});
        std::printf("  a_%-2d = %+.12e\n", k, coeffs.a[k]);
    }
    std::printf("  tail mass = %.3e\n", coeffs.tail_mass);
    const int exponent = information_exponent(ctx.f, ctx.rule);
    std::printf("  information exponent = %d\n", exponent);
    return kExitOk;
}

int cmd_ode(const Context& ctx) {
    const Trajectory traj = ballistic_reference(ctx, ctx.cfg.t_end);
    CsvWriter csv(path_join(ctx.cfg.out_dir, "ode.csv"), {"t", "m", "r2"});
    for (std::size_t k = 0; k < traj.times.size(); ++k)
        csv.row({traj.times[k], traj.states[k][0], traj.states[k][1]});
    if (ctx.cfg.svg) {
        std::vector<SvgSeries> series(2);
        series[0].label = "m";
        series[0].color = "#1f77b4";
        series[1].label = "r2";
        series[1].color = "#d62728";
        for (std::size_t k = 0; k < traj.times.size(); ++k) {
            series[0].x.push_back(traj.times[k]);
            series[0].y.push_back(traj.states[k][0]);
            series[1].x.push_back(traj.times[k]);
            series[1].y.push_back(traj.states[k][1]);
        }
        write_text_file(path_join(ctx.cfg.out_dir, "ode.svg"),
                        render_line_chart("ballistic dynamics", "t", "state",
                                          series));
    }
    std::printf("ode: %zu points, final (m, r2) = (%.6g, %.6g)\n",
                traj.times.size(), traj.states.back()[0],
                traj.states.back()[1]);
    return kExitOk;
}

int cmd_sde(const Context& ctx) {
    const auto& cfg = ctx.cfg;
    double sigma2 = cfg.init_sigma2;
    if (cfg.init_at_fixed_point) {
        const FixedPoint fp = fixed_point(ctx.mdl);
        sigma2 = fp.r2_star;
        std::printf("sde: initializing at fixed point r2* = %.9g\n", sigma2);
    }

    // The radial coordinate is deterministic; integrate it once and tabulate
    // the m-tilde drift/volatility coefficients on the step grid.
    Trajectory radial = rk4(
        [&](const Vec& u) { return Vec{ode_rhs_m0(u[0], ctx.mdl)}; },
        Vec{sigma2}, cfg.t_end, cfg.dt);
    const std::size_t n_steps = radial.times.size() - 1;
    std::vector<double> coeff(n_steps), vol(n_steps);
    for (std::size_t k = 0; k < n_steps; ++k) {
        const double r2 = radial.states[k][0];
        coeff[k] = -0.5 * rescaled_drift_mtilde(1.0, r2, ctx.mdl);
        vol[k] = std::sqrt(
            volatility_sigma11(r2, ctx.mdl, cfg.sigma_variant));
    }

    const double sqdt = std::sqrt(cfg.dt);
    std::vector<std::vector<double>> paths(
        n_steps + 1, std::vector<double>(cfg.n_seeds));
    for (int s = 0; s < cfg.n_seeds; ++s) {
        RandomStream stream = RandomStream::substream(cfg.seed, s);
        double mt = std::sqrt(sigma2) * stream.gaussian();
        paths[0][s] = mt;
        for (std::size_t k = 0; k < n_steps; ++k) {
            const double h = radial.times[k + 1] - radial.times[k];
            mt += -2.0 * coeff[k] * mt * h +
                  vol[k] * (h == cfg.dt ? sqdt : std::sqrt(h)) *
                      stream.gaussian();
            paths[k + 1][s] = mt;
        }
    }

    CsvWriter csv(path_join(cfg.out_dir, "sde.csv"),
                  {"t", "mtilde_mean", "mtilde_var", "r2", "n_paths"});
    for (std::size_t k = 0; k <= n_steps; ++k) {
        double mean = 0.0;
        for (double v : paths[k]) mean += v;
        mean /= cfg.n_seeds;
        double var = 0.0;
        for (double v : paths[k]) var += (v - mean) * (v - mean);
        var /= (cfg.n_seeds - 1);
        csv.row({radial.times[k], mean, var, radial.states[k][0],
                 double(cfg.n_seeds)});
    }
    std::printf("sde: %d paths over [0, %g], sigma variant %s\n", cfg.n_seeds,
                cfg.t_end, sigma_variant_name(cfg.sigma_variant).c_str());
    return kExitOk;
}

int cmd_sgd(const Context& ctx) {
    const auto& cfg = ctx.cfg;
    SimConfig sim = cfg.sim_config();
    if (cfg.init_at_fixed_point) {
        const FixedPoint fp = fixed_point(ctx.mdl);
        sim.init_sigma2 = fp.r2_star;
        std::printf("sgd: initializing at fixed point r2* = %.9g\n",
                    fp.r2_star);
    }
    const EnsembleStats ens =
        run_ensemble(sim, ctx.f, cfg.n_seeds, ctx.cfg.chain_mode(), cfg.seed,
                     resolve_threads(cfg.threads));
    write_ensemble_csv(ctx, ens, "trajectory");
    maybe_svg_trajectory(ctx, ens, "trajectory");
    std::printf("sgd: N = %lld, %d seeds, %zu record times\n",
                static_cast<long long>(ens.N), ens.n_seeds, ens.times.size());
    return kExitOk;
}

int cmd_compare(const Context& ctx) {
    const auto& cfg = ctx.cfg;
    std::vector<std::int64_t> n_list = cfg.N_list;
    if (n_list.empty()) n_list = {cfg.N};

    CsvWriter summary(path_join(cfg.out_dir, "summary.csv"),
                      {"N", "sup_dev_m", "sup_dev_r2", "sup_dev", "n_seeds"});
    const std::vector<double> grid = uniform_grid(cfg.t_end);
    std::vector<double> joint_devs;
    Trajectory reference;  // depends only on (init, t_end), not on N

    for (std::size_t i = 0; i < n_list.size(); ++i) {
        SimConfig sim = cfg.sim_config();
        sim.N = n_list[i];
        const EnsembleStats ens =
            run_ensemble(sim, ctx.f, cfg.n_seeds, cfg.chain_mode(), cfg.seed,
                         resolve_threads(cfg.threads));
        if (reference.times.empty())
            reference = ballistic_reference(ctx, ens.times.back());

        Trajectory mean;
        mean.times = ens.times;
        mean.meta = {"m", "r2"};
        for (std::size_t k = 0; k < ens.times.size(); ++k)
            mean.states.push_back({ens.m_mean[k], ens.r2_mean[k]});

        const DeviationReport rep = sup_deviation(mean, reference, grid);
        const double joint = std::max(rep.sup[0], rep.sup[1]);
        joint_devs.push_back(joint);

        const std::string tag = "N" + std::to_string(n_list[i]);
        write_ensemble_csv(ctx, ens, "trajectory_" + tag);
        CsvWriter dev(path_join(cfg.out_dir, "deviation_" + tag + ".csv"),
                      {"t", "dev_m", "dev_r2"});
        for (std::size_t k = 0; k < grid.size(); ++k)
            dev.row({grid[k], rep.per_point[0][k], rep.per_point[1][k]});
        summary.row({double(n_list[i]), rep.sup[0], rep.sup[1], joint,
                     double(cfg.n_seeds)});
        std::printf("compare: N = %-8lld sup dev m = %.5e  r2 = %.5e\n",
                    static_cast<long long>(n_list[i]), rep.sup[0], rep.sup[1]);
    }

    for (std::size_t i = 1; i < joint_devs.size(); ++i) {
        if (joint_devs[i] >= joint_devs[i - 1]) {
            std::fprintf(stderr,
                         "compare: deviation did not decrease from N = %lld "
                         "to N = %lld\n",
                         static_cast<long long>(n_list[i - 1]),
                         static_cast<long long>(n_list[i]));
            return kExitStatFail;
        }
    }
    return kExitOk;
}

int cmd_fixed_point(const Context& ctx) {
    const FixedPoint fp = fixed_point(ctx.mdl);
    const OUParams ou = ou_params(fp, ctx.mdl);
    const double s_dir =
        volatility_sigma11(fp.r2_star, ctx.mdl, SigmaVariant::direct);
    const double s_thm = volatility_sigma11(fp.r2_star, ctx.mdl,
                                            SigmaVariant::theorem_statement);
    const double s_prf =
        volatility_sigma11(fp.r2_star, ctx.mdl, SigmaVariant::proof_form);

    CsvWriter csv(path_join(ctx.cfg.out_dir, "fixed_point.csv"),
                  {"r2_star", "residual", "theta", "vol", "stationary_var",
                   "sigma11_direct", "sigma11_theorem_statement",
                   "sigma11_proof_form"});
    csv.row({fp.r2_star, fp.residual, ou.theta, ou.vol, ou.stationary_var,
             s_dir, s_thm, s_prf});
    std::printf("fixed point: r2* = %.12g (residual %.3e)\n", fp.r2_star,
                fp.residual);
    std::printf("OU: theta = %.9g, vol = %.9g, stationary var = %.9g\n",
                ou.theta, ou.vol, ou.stationary_var);
    std::printf("Sigma11: direct = %.9g, theorem_statement = %.9g "
                "(rel diff %.2f), proof_form = %.9g (rel diff %.2f)\n",
                s_dir, s_thm, (s_thm - s_dir) / s_dir, s_prf,
                (s_prf - s_dir) / s_dir);
    return kExitOk;
}

int cmd_ou_check(const Context& ctx) {
    const auto& cfg = ctx.cfg;
    FixedPoint fp;
    try {
        fp = fixed_point(ctx.mdl);
    } catch (const bracket_error& e) {
        std::fprintf(stderr,
                     "ou-check: %s\nThe OU reduction needs a radial fixed "
                     "point; lower model.c_eps or pick a bounded activation "
                     "whose radial drift changes sign.\n",
                     e.what());
        return kExitConfig;
    }
    const OUParams ou = ou_params(fp, ctx.mdl);
    const double s_dir =
        volatility_sigma11(fp.r2_star, ctx.mdl, SigmaVariant::direct);
    const double s_thm = volatility_sigma11(fp.r2_star, ctx.mdl,
                                            SigmaVariant::theorem_statement);
    const double s_prf =
        volatility_sigma11(fp.r2_star, ctx.mdl, SigmaVariant::proof_form);

    {
        CsvWriter params(path_join(cfg.out_dir, "ou_params.csv"),
                         {"r2_star", "theta", "vol", "stationary_var",
                          "sigma11_direct", "sigma11_theorem_statement",
                          "sigma11_proof_form", "reldiff_theorem_statement",
                          "reldiff_proof_form"});
        params.row({fp.r2_star, ou.theta, ou.vol, ou.stationary_var, s_dir,
                    s_thm, s_prf, (s_thm - s_dir) / s_dir,
                    (s_prf - s_dir) / s_dir});
    }
    std::printf("ou-check: r2* = %.9g, theta = %.9g, vol = %.9g, "
                "stationary var = %.9g\n",
                fp.r2_star, ou.theta, ou.vol, ou.stationary_var);
    std::printf("  Sigma11 direct %.6e | theorem_statement %.6e | "
                "proof_form %.6e\n",
                s_dir, s_thm, s_prf);

    SimConfig sim = cfg.sim_config();
    sim.init_sigma2 = fp.r2_star;
    sim.init_at_fixed_point = true;
    const EnsembleStats ens =
        run_ensemble(sim, ctx.f, cfg.n_seeds, cfg.chain_mode(), cfg.seed,
                     resolve_threads(cfg.threads));
    write_ensemble_csv(ctx, ens, "trajectory");

    CsvWriter csv(path_join(cfg.out_dir, "ou_check.csv"),
                  {"t", "ks_D", "ks_p", "empirical_var", "predicted_var"});
    int passed = 0;
    double last_ratio = 1.0;
    for (double t : cfg.checkpoints) {
        // nearest record time
        std::size_t best = 0;
        for (std::size_t k = 1; k < ens.times.size(); ++k)
            if (std::abs(ens.times[k] - t) < std::abs(ens.times[best] - t))
                best = k;
        const std::vector<double>& samples = ens.samples_mt[best];
        // Gaussian initialization at the fixed point propagated through the
        // OU flow: var(t) = r2* e^{-2 theta t} + stationary part.
        const OUMoments om = ou_moments(ou.theta, ou.vol, 0.0, t);
        const double pred_var =
            fp.r2_star * std::exp(-2.0 * ou.theta * t) + om.var;
        const double sd = std::sqrt(pred_var);
        const KsResult ks = ks_test(samples, [sd](double x) {
            return 0.5 * std::erfc(-x / (sd * std::sqrt(2.0)));
        });
        double emp_var = 0.0, mean = 0.0;
        for (double v : samples) mean += v;
        mean /= double(samples.size());
        for (double v : samples) emp_var += (v - mean) * (v - mean);
        emp_var /= double(samples.size() - 1);
        csv.row({ens.times[best], ks.statistic, ks.p_value, emp_var, pred_var});
        std::printf("  t = %-5g D = %.4f  p = %.4f  emp var = %.5g  "
                    "pred var = %.5g\n",
                    ens.times[best], ks.statistic, ks.p_value, emp_var,
                    pred_var);
        if (ks.p_value > 0.01) ++passed;
        last_ratio = emp_var / pred_var;
    }
    const bool var_ok = last_ratio > 0.8 && last_ratio < 1.2;
    const bool ks_ok = passed * 3 >= int(cfg.checkpoints.size()) * 2;
    if (!ks_ok || !var_ok) {
        std::fprintf(stderr,
                     "ou-check: statistical acceptance failed (KS pass %d/%zu, "
                     "final variance ratio %.3f)\n",
                     passed, cfg.checkpoints.size(), last_ratio);
        return kExitStatFail;
    }
    return kExitOk;
}

int cmd_diagnose(const Context& ctx) {
    const auto& cfg = ctx.cfg;
    std::vector<std::int64_t> n_list = cfg.N_list;
    if (n_list.empty()) n_list = {128, 256, 512};
    const std::int64_t samples = std::max<std::int64_t>(cfg.n_seeds, 100);

    const ScalingTable table = localizability_diagnostics(
        ctx.mdl, n_list, samples, cfg.init_m, cfg.init_sigma2, cfg.seed);
    CsvWriter csv(path_join(cfg.out_dir, "scaling.csv"),
                  {"N", "grad8_norm", "grad8_norm_se", "r2_pair4",
                   "r2_pair4_se", "mtilde_pair4", "mtilde_pair4_se"});
    for (std::size_t i = 0; i < table.N.size(); ++i) {
        csv.row({double(table.N[i]), table.value[i][0], table.std_err[i][0],
                 table.value[i][1], table.std_err[i][1], table.value[i][2],
                 table.std_err[i][2]});
        std::printf("  N = %-8lld E|gH|^8/N^4 = %.5e  <gH,gr2>^4/N^2 = %.5e  "
                    "<gH,gmt>^4/N^2 = %.5e\n",
                    static_cast<long long>(table.N[i]), table.value[i][0],
                    table.value[i][1], table.value[i][2]);
    }
    if (table.flagged[0] || table.flagged[1] || table.flagged[2]) {
        std::fprintf(stderr, "diagnose: a moment column grew by more than 4x "
                             "across the N list\n");
        return kExitStatFail;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string(kVersion) +
                 " - online SGD scaling-limit laboratory"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_override;
    std::uint64_t seed_override = 0;
    bool seed_set = false;
    int threads_override = -1;
    bool svg = false;

    const std::vector<std::string> kinds = {"hermite",     "ode",
                                            "sde",         "sgd",
                                            "compare",     "fixed-point",
                                            "ou-check",    "diagnose"};
    for (const auto& kind : kinds) {
        auto* sub = app.add_subcommand(kind);
        sub->add_option("--config", config_path, "experiment config file")
            ->required();
        sub->add_option("--out", out_override, "output directory override");
        sub->add_option("--seed", seed_override, "base seed override")
            ->each([&](const std::string&) { seed_set = true; });
        sub->add_option("--threads", threads_override,
                        "worker threads (0 = hardware)");
        sub->add_flag("--svg", svg, "also write SVG line plots");
    }

    CLI11_PARSE(app, argc, argv);
    const std::string kind = app.get_subcommands().front()->get_name();

    try {
        ExperimentConfig cfg = parse_config_file(config_path);
        if (cfg.kind != kind)
            throw config_error("config kind '" + cfg.kind +
                               "' does not match subcommand '" + kind + "'");
        if (!out_override.empty()) cfg.out_dir = out_override;
        if (seed_set) cfg.seed = seed_override;
        if (threads_override >= 0) cfg.threads = threads_override;
        if (svg) cfg.svg = true;

        ensure_directory(cfg.out_dir);
        write_manifest(cfg);
        const Context ctx = make_context(cfg);

        if (kind == "hermite") return cmd_hermite(ctx);
        if (kind == "ode") return cmd_ode(ctx);
        if (kind == "sde") return cmd_sde(ctx);
        if (kind == "sgd") return cmd_sgd(ctx);
        if (kind == "compare") return cmd_compare(ctx);
        if (kind == "fixed-point") return cmd_fixed_point(ctx);
        if (kind == "ou-check") return cmd_ou_check(ctx);
        if (kind == "diagnose") return cmd_diagnose(ctx);
        throw config_error("unknown subcommand");
    } catch (const divergence_error& e) {
        std::fprintf(stderr, "divergence: %s (blow-up time %.6g)\n", e.what(),
                     e.t_blowup);
        return kExitDivergence;
    } catch (const config_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const bracket_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
