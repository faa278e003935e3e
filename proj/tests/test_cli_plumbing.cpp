#include "hydrofine/record.hpp"

#include <doctest.h>

#include <cstdio>
#include <random>

using namespace hydrofine;

TEST_CASE("config file parsing with comments and overrides") {
    const std::string path = "test_config_tmp.cfg";
    write_text_file(path,
                    "# comment line\n"
                    "model.g = 0.04   # inline comment\n"
                    "grid.n_radial=3\n"
                    "\n"
                    "feshbach.epsilons = 1e-2,5e-4\n");
    RunConfig cfg;
    load_config_file(cfg, path);
    CHECK(cfg.model.g == doctest::Approx(0.04));
    CHECK(cfg.grid.n_radial == 3);
    REQUIRE(cfg.feshbach_epsilons.size() == 2);
    CHECK(cfg.feshbach_epsilons[1] == doctest::Approx(5e-4));
    // flags override file values
    apply_config_override(cfg, "model.g=0.08");
    CHECK(cfg.model.g == doctest::Approx(0.08));
    std::remove(path.c_str());
}

TEST_CASE("unknown and malformed keys are rejected by name") {
    RunConfig cfg;
    CHECK_THROWS_WITH_AS(apply_config_key(cfg, "no.such.key", "1"),
                         doctest::Contains("no.such.key"), ConfigError);
    CHECK_THROWS_WITH_AS(apply_config_key(cfg, "model.g", "abc"),
                         doctest::Contains("model.g"), ConfigError);
    CHECK_THROWS_WITH_AS(apply_config_key(cfg, "grid.n_radial", "2.5"),
                         doctest::Contains("grid.n_radial"), ConfigError);
    CHECK_THROWS_WITH_AS(apply_config_key(cfg, "fock.include_quadratic", "maybe"),
                         doctest::Contains("fock.include_quadratic"), ConfigError);
    CHECK_THROWS_AS(apply_config_override(cfg, "model.g"), ConfigError);
}

TEST_CASE("config validation catches out-of-range values") {
    RunConfig cfg;
    cfg.fock_n_max = 5;
    CHECK_THROWS_AS(validate_config(cfg), ConfigError);
    cfg = RunConfig{};
    cfg.model.m_n = -2.0;
    CHECK_THROWS_AS(validate_config(cfg), ConfigError);
    cfg = RunConfig{};
    cfg.sweep_workers = 0;
    CHECK_THROWS_AS(validate_config(cfg), ConfigError);
    cfg = RunConfig{};
    CHECK_NOTHROW(validate_config(cfg));
}

TEST_CASE("the config snapshot covers every key that influenced the run") {
    RunConfig cfg;
    const json snap = config_snapshot(cfg);
    CHECK(snap.size() >= 30);
    for (const char* key :
         {"model.m_el", "model.m_n", "model.g", "model.lambda_uv", "grid.n_radial",
          "fock.n_max", "solver.dense_threshold", "gamma.e_ref", "feshbach.tau",
          "sweep.parameter", "sweep.workers"}) {
        CHECK(snap.contains(key));
    }
    // every snapshot key is itself a valid config key (except derived lists)
    for (auto it = snap.begin(); it != snap.end(); ++it) {
        if (it.key() == "feshbach.epsilons") continue;
        RunConfig probe;
        std::string value;
        if (it->is_string()) value = it->get<std::string>();
        else if (it->is_boolean()) value = it->get<bool>() ? "true" : "false";
        else value = format_double(it->get<double>());
        CHECK_NOTHROW(apply_config_key(probe, it.key(), value));
    }
}

TEST_CASE("matrices round-trip losslessly through the serialization format") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::MatrixXcd m(3, 5);
    for (Eigen::Index r = 0; r < 3; ++r)
        for (Eigen::Index c = 0; c < 5; ++c)
            m(r, c) = complexd(u(rng) * std::pow(10.0, -8 * u(rng)), u(rng));
    const json j = matrix_to_json(m);
    const Eigen::MatrixXcd back = matrix_from_json(j);
    CHECK((back - m).cwiseAbs().maxCoeff() == 0.0);
    // through a dump/parse cycle as well
    const json reparsed = json::parse(j.dump());
    CHECK((matrix_from_json(reparsed) - m).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("double formatting is shortest-round-trip exact") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> samples = {0.1, 1.0 / 3.0, 1e-300, 6.02214076e23, 0.0, -2.5};
    for (int i = 0; i < 50; ++i) samples.push_back(u(rng) * std::pow(10.0, 30 * u(rng)));
    for (double v : samples) {
        double parsed = 0.0;
        std::sscanf(format_double(v).c_str(), "%lg", &parsed);
        CHECK(parsed == v);
    }
}

TEST_CASE("tabular emission is deterministic and parseable") {
    const std::vector<std::string> header = {"g", "E0", "Eg"};
    const std::vector<std::vector<double>> rows = {{0.02, -0.4997278, -0.4997491},
                                                   {0.04, -0.4997278, -0.4998130}};
    const std::string path_a = "sweep_tmp_a.csv";
    const std::string path_b = "sweep_tmp_b.csv";
    write_csv(path_a, header, rows);
    write_csv(path_b, header, rows);
    std::ifstream fa(path_a), fb(path_b);
    const std::string a((std::istreambuf_iterator<char>(fa)), std::istreambuf_iterator<char>());
    const std::string b((std::istreambuf_iterator<char>(fb)), std::istreambuf_iterator<char>());
    CHECK(a == b);
    CHECK(a.substr(0, a.find('\n')) == "g,E0,Eg");
    CHECK(a.find("0.02") != std::string::npos);
    std::remove(path_a.c_str());
    std::remove(path_b.c_str());

    CHECK_THROWS_AS(write_csv("sweep_tmp_c.csv", header, {{1.0}}), std::invalid_argument);
    std::remove("sweep_tmp_c.csv");
}

TEST_CASE("result records embed the full config and results") {
    ResultRecord rec;
    rec.command = "c0";
    rec.config = config_snapshot(RunConfig{});
    rec.results = {{"c0_closed_form", 3.851592615918824e-05}};
    rec.duration_seconds = 0.01;
    const std::string path = "record_tmp.json";
    write_record(path, rec);
    std::ifstream in(path);
    const json parsed = json::parse(in);
    CHECK(parsed.at("command") == "c0");
    CHECK(parsed.at("config").at("model.m_n").get<double>() == 1836.152);
    CHECK(parsed.at("results").at("c0_closed_form").get<double>() ==
          3.851592615918824e-05);
    std::remove(path.c_str());
}
