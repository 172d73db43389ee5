#ifndef SGDLAB_CONFIG_HPP
#define SGDLAB_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "sgdlab/dynamics.hpp"
#include "sgdlab/sgd.hpp"

namespace sgdlab {

// Declarative experiment description, parsed from an INI-style file with
// [section] headers, key = value lines and '#' comments. Unknown sections or
// keys are rejected; every field is validated before any computation runs.
struct ExperimentConfig {
    std::string kind;  // hermite|ode|sde|sgd|compare|fixed-point|ou-check|diagnose

    // [activation]
    std::string activation_label = "purified";
    std::string purify_g1 = "tanh";  // components when label == purified
    std::string purify_g2 = "erf";

    // [model]
    double c_eps = 0.0;
    NoiseLaw noise = NoiseLaw::gaussian;
    int quad_order = kDefaultQuadOrder;
    SigmaVariant sigma_variant = SigmaVariant::direct;

    // [sim]
    std::int64_t N = 1024;
    std::vector<std::int64_t> N_list;
    double c_delta = 1.0;
    double t_end = 1.0;
    double init_m = 0.0;       // ode/sde starting correlation
    double init_sigma2 = 1.0;
    bool init_at_fixed_point = false;
    std::int64_t record_stride = 0;
    std::string chain = "reduced";  // full | reduced

    // [run]
    int n_seeds = 100;
    std::uint64_t seed = 1;
    double dt = 1e-3;
    int threads = 1;
    std::vector<double> checkpoints = {1.0, 2.0, 5.0};

    // [output]
    std::string out_dir = "out";
    bool svg = false;

    SimConfig sim_config() const;
    ChainMode chain_mode() const;

    // Canonical INI serialization; parsing it back reproduces the config.
    std::string to_ini() const;
};

ExperimentConfig parse_config_file(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);

std::string sigma_variant_name(SigmaVariant v);

}  // namespace sgdlab

#endif  // SGDLAB_CONFIG_HPP
