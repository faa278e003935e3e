// config.hpp — flat key=value run configuration with dotted namespaces.
// Every key is validated with an explicit error naming the key; unknown keys
// are rejected. Flags override file values.

#pragma once

#include "hydrofine/feshbach.hpp"
#include "hydrofine/gamma.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <map>
#include <sstream>

namespace hydrofine {

using json = nlohmann::ordered_json;

struct RunConfig {
    PhysicalParams model;
    GridSpec grid;
    int fock_n_max{1};
    bool fock_include_quadratic{false};
    bool fock_include_spin{true};
    bool fock_include_current{true};
    std::size_t fock_max_dim{2'000'000};
    SpectrumOptions solver;
    std::string gamma_e_ref{"e0"};  // "e0" or "eg"
    GammaOptions gamma;
    FeshbachConfig feshbach;
    std::vector<double> feshbach_epsilons{1e-2, 1e-3};
    std::string sweep_parameter{"g"};
    std::string sweep_command{"spectrum"};
    std::string sweep_values{"0.02,0.04,0.08"};
    int sweep_workers{1};

    WOptions w_options() const {
        WOptions w;
        w.include_quadratic = fock_include_quadratic;
        w.include_spin = fock_include_spin;
        w.include_current = fock_include_current;
        w.form_factors = gamma.form_factors;
        return w;
    }
};

namespace detail {

inline double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: invalid numeric value '" + value + "' for key " + key);
    }
}

inline int parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: invalid integer value '" + value + "' for key " + key);
    }
}

inline bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "on") return true;
    if (value == "false" || value == "0" || value == "off") return false;
    throw ConfigError("config: invalid boolean value '" + value + "' for key " + key);
}

inline std::vector<double> parse_double_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(parse_double(key, item));
    }
    if (out.empty()) throw ConfigError("config: empty list for key " + key);
    return out;
}

}  // namespace detail

inline void apply_config_key(RunConfig& cfg, const std::string& key, const std::string& value) {
    using detail::parse_bool;
    using detail::parse_double;
    using detail::parse_double_list;
    using detail::parse_int;
    if (key == "model.m_el") cfg.model.m_el = parse_double(key, value);
    else if (key == "model.m_n") cfg.model.m_n = parse_double(key, value);
    else if (key == "model.g") cfg.model.g = parse_double(key, value);
    else if (key == "model.lambda_uv") cfg.model.lambda_uv = parse_double(key, value);
    else if (key == "model.px") cfg.model.p_total(0) = parse_double(key, value);
    else if (key == "model.py") cfg.model.p_total(1) = parse_double(key, value);
    else if (key == "model.pz") cfg.model.p_total(2) = parse_double(key, value);
    else if (key == "model.p_ceiling_factor") cfg.model.p_ceiling_factor = parse_double(key, value);
    else if (key == "grid.n_radial") cfg.grid.n_radial = parse_int(key, value);
    else if (key == "grid.n_costheta") cfg.grid.n_costheta = parse_int(key, value);
    else if (key == "grid.n_phi") cfg.grid.n_phi = parse_int(key, value);
    else if (key == "fock.n_max") cfg.fock_n_max = parse_int(key, value);
    else if (key == "fock.include_quadratic") cfg.fock_include_quadratic = parse_bool(key, value);
    else if (key == "fock.include_spin") cfg.fock_include_spin = parse_bool(key, value);
    else if (key == "fock.include_current") cfg.fock_include_current = parse_bool(key, value);
    else if (key == "fock.max_dim") cfg.fock_max_dim = static_cast<std::size_t>(parse_int(key, value));
    else if (key == "solver.num_eigenvalues") cfg.solver.num_eigenvalues = parse_int(key, value);
    else if (key == "solver.dense_threshold") cfg.solver.dense_threshold = parse_int(key, value);
    else if (key == "solver.tol_factor") cfg.solver.tol_factor = parse_double(key, value);
    else if (key == "solver.max_iterations") cfg.solver.max_iterations = parse_int(key, value);
    else if (key == "solver.cluster_tol_factor")
        cfg.solver.cluster_tol_factor = parse_double(key, value);
    else if (key == "gamma.e_ref") {
        if (value != "e0" && value != "eg")
            throw ConfigError("config: gamma.e_ref must be 'e0' or 'eg', got '" + value + "'");
        cfg.gamma_e_ref = value;
    } else if (key == "gamma.form_factors") cfg.gamma.form_factors = parse_bool(key, value);
    else if (key == "gamma.rel_tol") cfg.gamma.rel_tol = parse_double(key, value);
    else if (key == "gamma.max_panels") cfg.gamma.max_panels = parse_int(key, value);
    else if (key == "feshbach.tau") cfg.feshbach.tau = parse_double(key, value);
    else if (key == "feshbach.rho") cfg.feshbach.rho = parse_double(key, value);
    else if (key == "feshbach.epsilons") cfg.feshbach_epsilons = parse_double_list(key, value);
    else if (key == "feshbach.series_cap") cfg.feshbach.series_cap = parse_int(key, value);
    else if (key == "feshbach.regime_factor") cfg.feshbach.regime_factor = parse_double(key, value);
    else if (key == "feshbach.rho_max_fraction")
        cfg.feshbach.rho_max_fraction = parse_double(key, value);
    else if (key == "sweep.parameter") {
        if (value != "g" && value != "rho" && value != "p" && value != "grid")
            throw ConfigError("config: sweep.parameter must be g, rho, p, or grid; got '" +
                              value + "'");
        cfg.sweep_parameter = value;
    } else if (key == "sweep.command") {
        if (value != "spectrum" && value != "gamma" && value != "feshbach" && value != "c0")
            throw ConfigError("config: sweep.command must be spectrum, gamma, feshbach, or c0; "
                              "got '" + value + "'");
        cfg.sweep_command = value;
    } else if (key == "sweep.values") cfg.sweep_values = value;
    else if (key == "sweep.workers") cfg.sweep_workers = parse_int(key, value);
    else throw ConfigError("config: unknown key '" + key + "'");
}

// Parse "key = value" lines; '#' starts a comment, blank lines are skipped.
inline void load_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open file " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config: malformed line " + std::to_string(lineno) + " in " + path);
        }
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
        };
        apply_config_key(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
}

inline void apply_config_override(RunConfig& cfg, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) {
        throw ConfigError("config: --set expects key=value, got '" + assignment + "'");
    }
    apply_config_key(cfg, assignment.substr(0, eq), assignment.substr(eq + 1));
}

inline void validate_config(const RunConfig& cfg) {
    cfg.model.validate();
    cfg.grid.validate();
    if (cfg.fock_n_max < 0 || cfg.fock_n_max > 2) {
        throw ConfigError("config: fock.n_max must be in {0, 1, 2}");
    }
    if (cfg.solver.num_eigenvalues < 1) {
        throw ConfigError("config: solver.num_eigenvalues must be >= 1");
    }
    if (cfg.sweep_workers < 1) throw ConfigError("config: sweep.workers must be >= 1");
    if (!(cfg.gamma.rel_tol > 0.0)) throw ConfigError("config: gamma.rel_tol must be > 0");
}

// Complete snapshot of every value that influences a run.
inline json config_snapshot(const RunConfig& cfg) {
    json j;
    j["model.m_el"] = cfg.model.m_el;
    j["model.m_n"] = cfg.model.m_n;
    j["model.g"] = cfg.model.g;
    j["model.lambda_uv"] = cfg.model.lambda_uv;
    j["model.px"] = cfg.model.p_total(0);
    j["model.py"] = cfg.model.p_total(1);
    j["model.pz"] = cfg.model.p_total(2);
    j["model.p_ceiling_factor"] = cfg.model.p_ceiling_factor;
    j["grid.n_radial"] = cfg.grid.n_radial;
    j["grid.n_costheta"] = cfg.grid.n_costheta;
    j["grid.n_phi"] = cfg.grid.n_phi;
    j["fock.n_max"] = cfg.fock_n_max;
    j["fock.include_quadratic"] = cfg.fock_include_quadratic;
    j["fock.include_spin"] = cfg.fock_include_spin;
    j["fock.include_current"] = cfg.fock_include_current;
    j["fock.max_dim"] = cfg.fock_max_dim;
    j["solver.num_eigenvalues"] = cfg.solver.num_eigenvalues;
    j["solver.dense_threshold"] = cfg.solver.dense_threshold;
    j["solver.tol_factor"] = cfg.solver.tol_factor;
    j["solver.max_iterations"] = cfg.solver.max_iterations;
    j["solver.cluster_tol_factor"] = cfg.solver.cluster_tol_factor;
    j["gamma.e_ref"] = cfg.gamma_e_ref;
    j["gamma.form_factors"] = cfg.gamma.form_factors;
    j["gamma.rel_tol"] = cfg.gamma.rel_tol;
    j["gamma.max_panels"] = cfg.gamma.max_panels;
    j["feshbach.tau"] = cfg.feshbach.tau;
    j["feshbach.rho"] = cfg.feshbach.rho;
    j["feshbach.epsilons"] = cfg.feshbach_epsilons;
    j["feshbach.series_cap"] = cfg.feshbach.series_cap;
    j["feshbach.regime_factor"] = cfg.feshbach.regime_factor;
    j["feshbach.rho_max_fraction"] = cfg.feshbach.rho_max_fraction;
    j["sweep.parameter"] = cfg.sweep_parameter;
    j["sweep.command"] = cfg.sweep_command;
    j["sweep.values"] = cfg.sweep_values;
    j["sweep.workers"] = cfg.sweep_workers;
    return j;
}

}  // namespace hydrofine
