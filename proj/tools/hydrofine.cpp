// hydrofine.cpp — batch front door: configuration parsing, experiment
// orchestration, and machine-readable result emission.
//
//   hydrofine <command> [--config <path>] [--set key=value ...] [--out <dir>]
//
// Commands: c0, gamma, spectrum, feshbach, sweep, check.
// Exit codes: 0 success / all checks pass, 1 config error, 2 numerical budget
// failure, 3 check-suite failure.

#include "hydrofine/checks.hpp"
#include "hydrofine/record.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <future>
#include <iostream>

namespace {

using namespace hydrofine;

struct Clock {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

json spin_matrix_json(const SpinMatrix& m) { return matrix_to_json(Eigen::MatrixXcd(m)); }

double gamma_e_ref_value(const RunConfig& cfg, const DerivedConstants& d,
                         const FockBasis* basis_for_eg) {
    if (cfg.gamma_e_ref == "e0") return d.e0_fiber;
    // "eg": the truncated model's own computed ground eigenvalue.
    if (basis_for_eg == nullptr) {
        throw ConfigError("gamma.e_ref=eg requires a Fock basis to compute E_g");
    }
    const AssembledOperator hg = build_hg(*basis_for_eg, cfg.model,
                                          derive_constants(cfg.model), cfg.w_options());
    SpectrumOptions sopt = cfg.solver;
    sopt.num_eigenvalues = 1;
    return ground_spectrum(hg, sopt).eigenvalues(0);
}

// ------------------------------- c0 ----------------------------------------

json run_c0(const RunConfig& cfg) {
    const DerivedConstants d = derive_constants(cfg.model);
    json r;
    const double quad = c0_quadrature(cfg.model, d);
    r["c0_quadrature"] = quad;
    if (cfg.model.p_total.norm() == 0.0) {
        const double closed = c0_closed_form(cfg.model, d);
        r["c0_closed_form"] = closed;
        r["rel_difference"] = std::abs(closed - quad) / std::abs(quad);
    }
    r["positive"] = quad > 0.0;
    return r;
}

// ------------------------------- gamma -------------------------------------

json splitting_json(const SplittingReport& sp) {
    json j;
    j["gamma_eigenvalues"] = {sp.gamma_eigenvalues(0), sp.gamma_eigenvalues(1),
                              sp.gamma_eigenvalues(2), sp.gamma_eigenvalues(3)};
    j["multiplicity_pattern"] = sp.multiplicity_pattern;
    j["predicted_gap"] = sp.predicted_gap;
    j["singlet_alignment"] = sp.singlet_alignment;
    return j;
}

json run_gamma(const RunConfig& cfg) {
    const DerivedConstants d = derive_constants(cfg.model);
    const auto modes = build_grid(cfg.grid, cfg.model.lambda_uv);
    std::unique_ptr<FockBasis> basis;
    if (cfg.gamma_e_ref == "eg") {
        basis = std::make_unique<FockBasis>(
            enumerate_basis(modes, cfg.fock_n_max, cfg.fock_max_dim));
    }
    const double e_ref = gamma_e_ref_value(cfg, d, basis.get());

    GammaOptions opts = cfg.gamma;
    opts.include_current = cfg.fock_include_current;
    opts.include_spin = cfg.fock_include_spin;
    const GammaMatrix cont = gamma_continuum(cfg.model, d, e_ref, opts);
    const GammaMatrix disc =
        gamma_discrete(modes, cfg.model, d, e_ref, opts, GammaTerms::full, cfg.grid);

    json r;
    r["denominator_energy"] = e_ref;
    r["continuum"] = {{"provenance", cont.provenance},
                      {"matrix", spin_matrix_json(cont.matrix)},
                      {"splitting", splitting_json(splitting_prediction(cont))}};
    r["discrete"] = {{"provenance", disc.provenance},
                     {"matrix", spin_matrix_json(disc.matrix)},
                     {"splitting", splitting_json(splitting_prediction(disc))}};
    r["discrete_vs_continuum_fro"] = (disc.matrix - cont.matrix).norm();
    return r;
}

// ------------------------------ spectrum -----------------------------------

json run_spectrum(const RunConfig& cfg) {
    const DerivedConstants d = derive_constants(cfg.model);
    const auto modes = build_grid(cfg.grid, cfg.model.lambda_uv);
    const FockBasis basis = enumerate_basis(modes, cfg.fock_n_max, cfg.fock_max_dim);
    const AssembledOperator hg = build_hg(basis, cfg.model, d, cfg.w_options());
    const SpectrumResult res = ground_spectrum(hg, cfg.solver);
    const auto diags = observables(res, basis);

    json r;
    r["dimension"] = basis.dim();
    r["e0_fiber"] = d.e0_fiber;
    r["eigenvalues"] = vector_to_json(res.eigenvalues);
    r["residuals"] = vector_to_json(res.residuals);
    r["cluster_sizes"] = res.cluster_sizes;
    r["dense_path"] = res.dense_path;
    json dj = json::array();
    for (std::size_t i = 0; i < diags.size(); ++i) {
        dj.push_back({{"nph", diags[i].nph},
                      {"singlet_vacuum_overlap2", diags[i].singlet_vacuum_overlap2},
                      {"spin_rdm", spin_matrix_json(diags[i].spin_rdm)}});
    }
    r["diagnostics"] = std::move(dj);
    return r;
}

// ------------------------------ feshbach -----------------------------------

json run_feshbach(const RunConfig& cfg) {
    const DerivedConstants d = derive_constants(cfg.model);
    const auto modes = build_grid(cfg.grid, cfg.model.lambda_uv);
    const FockBasis basis = enumerate_basis(modes, cfg.fock_n_max, cfg.fock_max_dim);
    const AssembledOperator h0 = build_h0(basis, cfg.model, d);
    const AssembledOperator hg = build_hg(basis, cfg.model, d, cfg.w_options());
    SpectrumOptions sopt = cfg.solver;
    sopt.num_eigenvalues = std::max(sopt.num_eigenvalues, 6);
    const SpectrumResult res = ground_spectrum(hg, sopt);
    const double e_g = res.eigenvalues(0);
    const double rho = feshbach_rho(cfg.model, d, cfg.feshbach);

    json r;
    r["rho"] = rho;
    r["e_g"] = e_g;
    json ident = json::array();
    for (double eps : cfg.feshbach_epsilons) {
        const FeshbachResult fr = feshbach_direct(hg, basis, e_g, rho, eps, cfg.feshbach);
        ident.push_back({{"epsilon", eps},
                         {"residual_identity", fr.residual_identity},
                         {"residual_identity_left", fr.residual_identity_left}});
    }
    r["identity"] = std::move(ident);
    const FeshbachResult f0 = feshbach_direct(hg, basis, e_g, rho, 0.0, cfg.feshbach, &res);
    r["residual_kernel"] = f0.residual_kernel;
    r["pbar_gap"] = f0.pbar_gap;
    r["f0_norm"] = operator_norm(f0.f_matrix);
    const FeshbachResult fs = feshbach_series(hg, h0, basis, e_g, rho, 0.0, cfg.feshbach);
    r["series_term_norms"] = fs.term_norms;
    r["series_ratios"] = fs.series_ratios;
    r["observed_ratio"] = fs.observed_ratio;
    r["series_divergent"] = fs.series_divergent;
    r["series_vs_direct"] = operator_norm(fs.f_matrix - f0.f_matrix);
    return r;
}

// ------------------------------- sweep -------------------------------------

struct SweepColumns {
    std::vector<std::string> header;
    std::vector<double> row(const json& point) const {
        std::vector<double> out;
        for (const auto& h : header) out.push_back(point.at(h).get<double>());
        return out;
    }
};

json sweep_point_result(const RunConfig& cfg) {
    const std::string& cmd = cfg.sweep_command;
    json point;
    if (cmd == "spectrum") {
        const json r = run_spectrum(cfg);
        const auto& ev = r.at("eigenvalues");
        const double e0 = r.at("e0_fiber").get<double>();
        const double eg = ev[0].get<double>();
        point["E0"] = e0;
        point["Eg"] = eg;
        point["gap12"] = ev[1].get<double>() - ev[0].get<double>();
        point["gap24"] = ev[3].get<double>() - ev[1].get<double>();
        const DerivedConstants d = derive_constants(cfg.model);
        const auto modes = build_grid(cfg.grid, cfg.model.lambda_uv);
        GammaOptions opts = cfg.gamma;
        const GammaMatrix disc = gamma_discrete(modes, cfg.model, d, d.e0_fiber, opts,
                                                GammaTerms::full, cfg.grid);
        point["gamma_gap"] = splitting_prediction(disc).predicted_gap;
        point["nph"] = r.at("diagnostics")[0].at("nph").get<double>();
    } else if (cmd == "gamma") {
        const json r = run_gamma(cfg);
        point["gamma_gap"] = r.at("continuum").at("splitting").at("predicted_gap").get<double>();
        point["gamma32_re"] =
            matrix_from_json(r.at("continuum").at("matrix"))(2, 1).real();
        point["disc_vs_cont_fro"] = r.at("discrete_vs_continuum_fro").get<double>();
        point["singlet_alignment"] =
            r.at("continuum").at("splitting").at("singlet_alignment").get<double>();
    } else if (cmd == "feshbach") {
        const json r = run_feshbach(cfg);
        point["rho"] = r.at("rho").get<double>();
        point["f0_norm"] = r.at("f0_norm").get<double>();
        point["f0_norm_over_rho"] =
            r.at("f0_norm").get<double>() / r.at("rho").get<double>();
        point["residual_kernel"] = r.at("residual_kernel").get<double>();
        point["observed_ratio"] = r.at("observed_ratio").get<double>();
        point["pbar_gap"] = r.at("pbar_gap").get<double>();
    } else if (cmd == "c0") {
        const json r = run_c0(cfg);
        point["c0"] = r.at("c0_quadrature").get<double>();
    } else {
        throw ConfigError("sweep: unsupported sweep.command '" + cmd + "'");
    }
    return point;
}

SweepColumns sweep_columns(const std::string& parameter, const std::string& command) {
    SweepColumns cols;
    if (parameter == "grid") cols.header = {"n_radial", "n_costheta", "n_phi"};
    else cols.header = {parameter};
    if (command == "spectrum") {
        for (const char* c : {"E0", "Eg", "gap12", "gap24", "gamma_gap", "nph"})
            cols.header.push_back(c);
    } else if (command == "gamma") {
        for (const char* c : {"gamma_gap", "gamma32_re", "disc_vs_cont_fro", "singlet_alignment"})
            cols.header.push_back(c);
    } else if (command == "feshbach") {
        for (const char* c :
             {"rho", "f0_norm", "f0_norm_over_rho", "residual_kernel", "observed_ratio",
              "pbar_gap"})
            cols.header.push_back(c);
    } else if (command == "c0") {
        cols.header.push_back("c0");
    }
    return cols;
}

json run_sweep(const RunConfig& cfg, std::vector<std::vector<double>>& csv_rows,
               std::vector<std::string>& csv_header) {
    // Build the per-point configurations.
    std::vector<RunConfig> points;
    std::vector<json> labels;
    if (cfg.sweep_parameter == "grid") {
        std::stringstream ss(cfg.sweep_values);
        std::string triple;
        while (std::getline(ss, triple, ';')) {
            std::stringstream ts(triple);
            std::string a, b, c;
            if (!std::getline(ts, a, ',') || !std::getline(ts, b, ',') || !std::getline(ts, c, ','))
                throw ConfigError("sweep: grid values must be 'nr,nc,np;nr,nc,np;...'");
            RunConfig pt = cfg;
            pt.grid.n_radial = detail::parse_int("sweep.values", a);
            pt.grid.n_costheta = detail::parse_int("sweep.values", b);
            pt.grid.n_phi = detail::parse_int("sweep.values", c);
            points.push_back(pt);
            labels.push_back(json{{"n_radial", pt.grid.n_radial},
                                  {"n_costheta", pt.grid.n_costheta},
                                  {"n_phi", pt.grid.n_phi}});
        }
    } else {
        const std::vector<double> values = detail::parse_double_list("sweep.values", cfg.sweep_values);
        for (double v : values) {
            RunConfig pt = cfg;
            if (cfg.sweep_parameter == "g") pt.model.g = v;
            else if (cfg.sweep_parameter == "rho") pt.feshbach.rho = v;
            else if (cfg.sweep_parameter == "p") pt.model.p_total = Vec3(v, 0.0, 0.0);
            points.push_back(pt);
            labels.push_back(json{{cfg.sweep_parameter, v}});
        }
    }
    if (points.empty()) throw ConfigError("sweep: no sweep points");

    // Run the points, optionally concurrently; emission stays ordered.
    std::vector<json> results(points.size());
    const int workers = std::min<int>(cfg.sweep_workers, static_cast<int>(points.size()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < points.size(); ++i) results[i] = sweep_point_result(points[i]);
    } else {
        for (std::size_t batch = 0; batch < points.size(); batch += workers) {
            std::vector<std::future<json>> futures;
            const std::size_t end = std::min(points.size(), batch + workers);
            for (std::size_t i = batch; i < end; ++i) {
                futures.push_back(std::async(
                    std::launch::async, [&points, i] { return sweep_point_result(points[i]); }));
            }
            for (std::size_t i = batch; i < end; ++i) results[i] = futures[i - batch].get();
        }
    }

    const SweepColumns cols = sweep_columns(cfg.sweep_parameter, cfg.sweep_command);
    csv_header = cols.header;
    json points_json = json::array();
    for (std::size_t i = 0; i < points.size(); ++i) {
        json merged = labels[i];
        for (auto it = results[i].begin(); it != results[i].end(); ++it) merged[it.key()] = *it;
        points_json.push_back(merged);
        csv_rows.push_back(cols.row(merged));
    }

    // Fitted log-log scaling exponents of each positive column against the
    // swept parameter (skipped for grid sweeps).
    json fits;
    if (cfg.sweep_parameter != "grid" && points.size() >= 2) {
        std::vector<double> xs;
        for (const auto& lj : labels) xs.push_back(lj.begin().value().get<double>());
        bool xs_ok = true;
        for (double x : xs) xs_ok = xs_ok && x > 0.0;
        if (xs_ok) {
            for (const auto& col : cols.header) {
                if (col == cfg.sweep_parameter) continue;
                std::vector<double> ys;
                bool ok = true;
                for (const auto& pj : points_json) {
                    const double y = pj.at(col).get<double>();
                    if (!(std::abs(y) > 0.0) || !std::isfinite(y)) ok = false;
                    ys.push_back(std::abs(y));
                }
                if (ok) fits[col] = fit_loglog_slope(xs, ys);
            }
        }
    }

    json r;
    r["points"] = std::move(points_json);
    if (!fits.is_null()) r["fitted_exponents"] = std::move(fits);
    return r;
}

// ------------------------------- check -------------------------------------

int run_check(const RunConfig&, const std::string& out_dir, json& results) {
    const auto reports = checks::run_acceptance_suite();
    bool all_pass = true;
    json groups = json::array();
    for (const auto& rep : reports) {
        json items = json::array();
        for (const auto& item : rep.items) {
            std::printf("[%s] %s — %s\n", item.pass ? "PASS" : "FAIL", item.name.c_str(),
                        item.detail.c_str());
            items.push_back({{"name", item.name}, {"pass", item.pass}, {"detail", item.detail}});
            all_pass = all_pass && item.pass;
        }
        std::printf("== %s: %s (%.2f s)\n", rep.name.c_str(), rep.pass() ? "PASS" : "FAIL",
                    rep.seconds);
        groups.push_back({{"criterion", rep.name},
                          {"pass", rep.pass()},
                          {"seconds", rep.seconds},
                          {"items", items}});
    }
    results["criteria"] = groups;
    results["all_pass"] = all_pass;
    (void)out_dir;
    return all_pass ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dressed-hydrogen hyperfine splitting toolkit"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out";
    std::vector<std::string> overrides;
    app.add_option("--config", config_path, "flat key=value configuration file");
    app.add_option("--set", overrides, "override a config key, key=value (repeatable)");
    app.add_option("--out", out_dir, "output directory for result records");

    const std::vector<std::string> commands = {"c0", "gamma", "spectrum", "feshbach", "sweep",
                                               "check"};
    for (const auto& name : commands) app.add_subcommand(name);

    CLI11_PARSE(app, argc, argv);
    const std::string command = app.get_subcommands().front()->get_name();

    try {
        RunConfig cfg;
        if (!config_path.empty()) hydrofine::load_config_file(cfg, config_path);
        for (const auto& ovr : overrides) hydrofine::apply_config_override(cfg, ovr);
        hydrofine::validate_config(cfg);

        Clock clock;
        hydrofine::ResultRecord record;
        record.command = command;
        record.config = hydrofine::config_snapshot(cfg);
        int exit_code = 0;

        std::vector<std::vector<double>> csv_rows;
        std::vector<std::string> csv_header;
        if (command == "c0") record.results = run_c0(cfg);
        else if (command == "gamma") record.results = run_gamma(cfg);
        else if (command == "spectrum") record.results = run_spectrum(cfg);
        else if (command == "feshbach") record.results = run_feshbach(cfg);
        else if (command == "sweep") record.results = run_sweep(cfg, csv_rows, csv_header);
        else if (command == "check") exit_code = run_check(cfg, out_dir, record.results);

        record.duration_seconds = clock.seconds();
        const std::filesystem::path out(out_dir);
        hydrofine::write_record(out / (command + "_record.json"), record);
        if (!csv_rows.empty()) {
            hydrofine::write_csv(out / "sweep.csv", csv_header, csv_rows);
        }
        if (command != "check") {
            std::cout << record.results.dump(2) << "\n";
        }
        return exit_code;
    } catch (const hydrofine::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const hydrofine::BudgetError& e) {
        std::cerr << "numerical budget failure: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
