#include "sgdlab/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "sgdlab/errors.hpp"

namespace sgdlab {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

double parse_double(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    double out = 0.0;
    try {
        out = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw config_error("config: '" + key + "' is not a number: " + v);
    }
    if (pos != v.size() || !std::isfinite(out))
        throw config_error("config: '" + key + "' is not a finite number: " + v);
    return out;
}

std::int64_t parse_int(const std::string& key, const std::string& v) {
    const double d = parse_double(key, v);
    if (d != std::floor(d))
        throw config_error("config: '" + key + "' must be an integer: " + v);
    return static_cast<std::int64_t>(d);
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw config_error("config: '" + key + "' must be a boolean: " + v);
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

SimConfig ExperimentConfig::sim_config() const {
    SimConfig cfg;
    cfg.N = N;
    cfg.c_delta = c_delta;
    cfg.t_end = t_end;
    cfg.init_sigma2 = init_sigma2;
    cfg.init_at_fixed_point = init_at_fixed_point;
    cfg.c_eps = c_eps;
    cfg.noise = noise;
    cfg.record_stride = record_stride;
    return cfg;
}

ChainMode ExperimentConfig::chain_mode() const {
    if (chain == "full") return ChainMode::full;
    if (chain == "reduced") return ChainMode::reduced;
    throw config_error("config: sim.chain must be 'full' or 'reduced'");
}

std::string sigma_variant_name(SigmaVariant v) {
    switch (v) {
        case SigmaVariant::direct: return "direct";
        case SigmaVariant::theorem_statement: return "theorem_statement";
        case SigmaVariant::proof_form: return "proof_form";
    }
    return "direct";
}

std::string ExperimentConfig::to_ini() const {
    std::ostringstream out;
    out << "[experiment]\n";
    out << "kind = " << kind << "\n\n";
    out << "[activation]\n";
    out << "label = " << activation_label << "\n";
    if (activation_label == "purified") {
        out << "g1 = " << purify_g1 << "\n";
        out << "g2 = " << purify_g2 << "\n";
    }
    out << "\n[model]\n";
    out << "c_eps = " << fmt(c_eps) << "\n";
    out << "noise = " << (noise == NoiseLaw::gaussian ? "gaussian" : "two_point")
        << "\n";
    out << "quad_order = " << quad_order << "\n";
    out << "sigma_variant = " << sigma_variant_name(sigma_variant) << "\n";
    out << "\n[sim]\n";
    out << "N = " << N << "\n";
    if (!N_list.empty()) {
        out << "N_list = ";
        for (std::size_t i = 0; i < N_list.size(); ++i)
            out << (i ? ", " : "") << N_list[i];
        out << "\n";
    }
    out << "c_delta = " << fmt(c_delta) << "\n";
    out << "t_end = " << fmt(t_end) << "\n";
    out << "init_m = " << fmt(init_m) << "\n";
    out << "init_sigma2 = " << fmt(init_sigma2) << "\n";
    out << "init_at_fixed_point = " << (init_at_fixed_point ? "true" : "false")
        << "\n";
    out << "record_stride = " << record_stride << "\n";
    out << "chain = " << chain << "\n";
    out << "\n[run]\n";
    out << "n_seeds = " << n_seeds << "\n";
    out << "seed = " << seed << "\n";
    out << "dt = " << fmt(dt) << "\n";
    out << "threads = " << threads << "\n";
    out << "checkpoints = ";
    for (std::size_t i = 0; i < checkpoints.size(); ++i)
        out << (i ? ", " : "") << fmt(checkpoints[i]);
    out << "\n";
    out << "\n[output]\n";
    out << "out_dir = " << out_dir << "\n";
    out << "svg = " << (svg ? "true" : "false") << "\n";
    return out.str();
}

ExperimentConfig parse_config_text(const std::string& text) {
    std::map<std::string, std::string> kv;  // "section.key" -> value
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw config_error("config line " + std::to_string(lineno) +
                                   ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("config line " + std::to_string(lineno) +
                               ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty())
            throw config_error("config line " + std::to_string(lineno) +
                               ": key outside any [section]");
        const std::string full = section + "." + key;
        if (kv.count(full))
            throw config_error("config: duplicate key '" + full + "'");
        kv[full] = value;
    }

    ExperimentConfig cfg;
    auto take = [&kv](const std::string& full) {
        auto it = kv.find(full);
        if (it == kv.end()) return std::pair<bool, std::string>{false, ""};
        std::pair<bool, std::string> out{true, it->second};
        kv.erase(it);
        return out;
    };

    if (auto [ok, v] = take("experiment.kind"); ok) cfg.kind = v;
    else throw config_error("config: missing required key experiment.kind");

    if (auto [ok, v] = take("activation.label"); ok) cfg.activation_label = v;
    if (auto [ok, v] = take("activation.g1"); ok) cfg.purify_g1 = v;
    if (auto [ok, v] = take("activation.g2"); ok) cfg.purify_g2 = v;

    if (auto [ok, v] = take("model.c_eps"); ok) cfg.c_eps = parse_double("model.c_eps", v);
    if (auto [ok, v] = take("model.noise"); ok) {
        if (v == "gaussian") cfg.noise = NoiseLaw::gaussian;
        else if (v == "two_point") cfg.noise = NoiseLaw::two_point;
        else throw config_error("config: model.noise must be gaussian or two_point");
    }
    if (auto [ok, v] = take("model.quad_order"); ok)
        cfg.quad_order = int(parse_int("model.quad_order", v));
    if (auto [ok, v] = take("model.sigma_variant"); ok) {
        if (v == "direct") cfg.sigma_variant = SigmaVariant::direct;
        else if (v == "theorem_statement") cfg.sigma_variant = SigmaVariant::theorem_statement;
        else if (v == "proof_form") cfg.sigma_variant = SigmaVariant::proof_form;
        else throw config_error("config: model.sigma_variant must be direct, "
                                "theorem_statement, or proof_form");
    }

    if (auto [ok, v] = take("sim.N"); ok) cfg.N = parse_int("sim.N", v);
    if (auto [ok, v] = take("sim.N_list"); ok)
        for (const auto& item : split_list(v))
            cfg.N_list.push_back(parse_int("sim.N_list", item));
    if (auto [ok, v] = take("sim.c_delta"); ok) cfg.c_delta = parse_double("sim.c_delta", v);
    if (auto [ok, v] = take("sim.t_end"); ok) cfg.t_end = parse_double("sim.t_end", v);
    if (auto [ok, v] = take("sim.init_m"); ok) cfg.init_m = parse_double("sim.init_m", v);
    if (auto [ok, v] = take("sim.init_sigma2"); ok)
        cfg.init_sigma2 = parse_double("sim.init_sigma2", v);
    if (auto [ok, v] = take("sim.init_at_fixed_point"); ok)
        cfg.init_at_fixed_point = parse_bool("sim.init_at_fixed_point", v);
    if (auto [ok, v] = take("sim.record_stride"); ok)
        cfg.record_stride = parse_int("sim.record_stride", v);
    if (auto [ok, v] = take("sim.chain"); ok) cfg.chain = v;

    if (auto [ok, v] = take("run.n_seeds"); ok) cfg.n_seeds = int(parse_int("run.n_seeds", v));
    if (auto [ok, v] = take("run.seed"); ok)
        cfg.seed = static_cast<std::uint64_t>(parse_int("run.seed", v));
    if (auto [ok, v] = take("run.dt"); ok) cfg.dt = parse_double("run.dt", v);
    if (auto [ok, v] = take("run.threads"); ok) cfg.threads = int(parse_int("run.threads", v));
    if (auto [ok, v] = take("run.checkpoints"); ok) {
        cfg.checkpoints.clear();
        for (const auto& item : split_list(v))
            cfg.checkpoints.push_back(parse_double("run.checkpoints", item));
    }

    if (auto [ok, v] = take("output.out_dir"); ok) cfg.out_dir = v;
    if (auto [ok, v] = take("output.svg"); ok) cfg.svg = parse_bool("output.svg", v);

    if (!kv.empty())
        throw config_error("config: unknown key '" + kv.begin()->first + "'");

    // Validation up front, before any computation.
    static const std::vector<std::string> kinds = {
        "hermite", "ode", "sde", "sgd", "compare",
        "fixed-point", "ou-check", "diagnose"};
    bool kind_ok = false;
    for (const auto& k : kinds) kind_ok = kind_ok || k == cfg.kind;
    if (!kind_ok)
        throw config_error("config: unknown experiment kind '" + cfg.kind + "'");

    bool label_ok = false;
    for (const auto& l : activation_labels())
        label_ok = label_ok || l == cfg.activation_label;
    if (!label_ok)
        throw config_error("config: unknown activation label '" +
                           cfg.activation_label + "'");
    if (cfg.quad_order < 1 || cfg.quad_order > kMaxQuadOrder)
        throw config_error("config: model.quad_order out of range");
    if (cfg.c_eps < 0.0) throw config_error("config: model.c_eps must be >= 0");
    if (cfg.N < 8) throw config_error("config: sim.N must be >= 8");
    for (auto n : cfg.N_list)
        if (n < 8) throw config_error("config: sim.N_list entries must be >= 8");
    if (!(cfg.c_delta > 0.0)) throw config_error("config: sim.c_delta must be > 0");
    if (!(cfg.t_end > 0.0)) throw config_error("config: sim.t_end must be > 0");
    if (cfg.init_sigma2 < 0.0)
        throw config_error("config: sim.init_sigma2 must be >= 0");
    if (cfg.chain != "full" && cfg.chain != "reduced")
        throw config_error("config: sim.chain must be 'full' or 'reduced'");
    if (cfg.n_seeds < 2) throw config_error("config: run.n_seeds must be >= 2");
    if (!(cfg.dt > 0.0)) throw config_error("config: run.dt must be > 0");
    if (cfg.threads < 0) throw config_error("config: run.threads must be >= 0");
    for (double t : cfg.checkpoints)
        if (!(t > 0.0) || t > cfg.t_end)
            throw config_error("config: run.checkpoints must lie in (0, t_end]");
    if (cfg.out_dir.empty()) throw config_error("config: output.out_dir empty");
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

}  // namespace sgdlab
