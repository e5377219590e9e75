// Copyright 2026 The qlab Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <catch2/catch_amalgamated.hpp>

#include "qlab/qlab.hpp"

using namespace qlab;
using namespace qlab::harness;
using Catch::Approx;

namespace {

const std::string kConfigDir = QLAB_CONFIG_DIR;
const std::string kCli = QLAB_CLI_PATH;

const char *kMinimalStein = R"({
  "experiment": "stein",
  "parameters": {"p": [0.5, 0.5], "q": [0.75, 0.25], "epsilon": 0.05, "n_list": [10, 20]}
})";

std::string slurp(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> shipped_configs() {
    std::vector<std::string> out;
    for (const auto &e : std::filesystem::directory_iterator(kConfigDir)) {
        if (e.path().extension() == ".json") {
            out.push_back(e.path().string());
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

int run_cli(const std::string &args) {
    const std::string cmd = "'" + kCli + "' " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<std::string> config_errors(const std::string &text) {
    try {
        (void)parse_config(text);
    } catch (const ConfigError &e) {
        return e.errors();
    }
    return {};
}

bool any_contains(const std::vector<std::string> &v, const std::string &needle) {
    return std::any_of(v.begin(), v.end(),
                       [&](const std::string &s) { return s.find(needle) != std::string::npos; });
}

json random_probs(std::mt19937_64 &rng, std::size_t k) {
    return random_probability_vector(k, rng());
}

json random_n_list(std::mt19937_64 &rng, std::size_t min_len) {
    json a = json::array();
    const std::size_t len = min_len + rng() % 4;
    for (std::size_t i = 0; i < len; ++i) {
        a.push_back(1 + rng() % 500);
    }
    return a;
}

/// A valid configuration text of a random experiment.
std::string random_config(std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    json doc;
    json p;
    const std::size_t k = 2 + rng() % 3;
    switch (rng() % 7) {
    case 0:
        doc["experiment"] = "stein";
        p = {{"p", random_probs(rng, k)}, {"q", random_probs(rng, k)},
             {"epsilon", 0.01 + 0.5 * u(rng)}, {"n_list", random_n_list(rng, 1)}};
        if (rng() % 2) {
            p["fit_mode"] = "asymptotic";
        }
        break;
    case 1: {
        doc["experiment"] = "sanov";
        json coeffs = json::array();
        for (std::size_t i = 0; i < k; ++i) {
            coeffs.push_back(u(rng) - 0.5);
        }
        const char *rel[] = {"ge", "le", "gt", "lt"};
        p = {{"p", random_probs(rng, k)},
             {"constraints", json::array({{{"coefficients", coeffs},
                                           {"relation", rel[rng() % 4]},
                                           {"bound", u(rng) - 0.5}}})},
             {"n_list", random_n_list(rng, 1)}};
        break;
    }
    case 2:
        doc["experiment"] = "chernoff";
        p = {{"p", random_probs(rng, k)}, {"q", random_probs(rng, k)},
             {"n_list", random_n_list(rng, 2)}, {"priors", json::array({random_probs(rng, 2)})}};
        break;
    case 3:
        doc["experiment"] = "divergence-props";
        p = {{"trials", 1 + rng() % 50}, {"alphas", json::array({u(rng) * 2 - 1, u(rng) * 2 - 1})}};
        break;
    case 4: {
        doc["experiment"] = "hot";
        if (rng() % 2) {
            p = {{"mode", rng() % 2 ? "commuting" : "noncommuting"}, {"trials", 1 + rng() % 30},
                 {"dim_min", 2}, {"dim_max", 2 + rng() % 5}};
        } else {
            const std::size_t dim = 2 + rng() % 3;
            p = {{"mode", "explicit"},
                 {"rho", from_cmatrix(random_density(dim, dim, rng()).matrix())},
                 {"sigma", from_cmatrix(random_density(dim, 1 + rng() % dim, rng()).matrix())}};
            json effects = json::array();
            const Measurement m = random_povm(dim, 2 + rng() % 3, rng());
            for (const auto &e : m.effects()) {
                effects.push_back(from_cmatrix(e.matrix()));
            }
            p["measurement"] = effects;
        }
        break;
    }
    case 5:
        doc["experiment"] = "modelsel";
        p = {{"true_dist", random_probs(rng, 2)},
             {"models", json::array({{{"family", "binary"},
                                      {"grid", {{"lo", 0.05}, {"hi", 0.95}, {"count", 3 + rng() % 8}}}}})},
             {"n", 1 + rng() % 100},
             {"datasets", 1 + rng() % 10},
             {"mode", rng() % 2 ? "selection" : "generalization"}};
        break;
    default:
        doc["experiment"] = "risk-alpha";
        p = {{"n", rng() % 5}, {"alphas", json::array({u(rng) * 2 - 1})}, {"perturbations", rng() % 10}};
        break;
    }
    doc["parameters"] = p;
    if (rng() % 3) {
        doc["seed"] = rng();
    }
    if (rng() % 2) {
        doc["output_path"] = "out_" + std::to_string(rng() % 1000) + ".json";
    }
    return doc.dump(static_cast<int>(rng() % 3) - 1);
}

} // namespace

TEST_CASE("parse_config: minimal stein config with defaults", "[harness]") {
    const ExperimentConfig cfg = parse_config(kMinimalStein);
    REQUIRE(cfg.experiment == Experiment::stein);
    REQUIRE(cfg.seed == 0);
    REQUIRE(cfg.output_path.empty());
    REQUIRE(cfg.parameters["fit_mode"] == "all");
    REQUIRE(cfg.parameters["tolerance"].get<double>() == 0.01);
    REQUIRE(cfg.parameters["epsilon"].get<double>() == 0.05);
}

TEST_CASE("parse_config: validation errors", "[harness]") {
    SECTION("probabilities summing to 0.9 name the field") {
        const auto errs = config_errors(R"({"experiment": "stein", "parameters":
            {"p": [0.5, 0.4], "q": [0.75, 0.25], "epsilon": 0.05, "n_list": [10]}})");
        REQUIRE(errs.size() == 1);
        REQUIRE(errs[0].find("parameters.p") != std::string::npos);
        REQUIRE(errs[0].find("0.9") != std::string::npos);
    }
    SECTION("unknown experiment lists the valid names") {
        const auto errs = config_errors(R"({"experiment": "steins"})");
        REQUIRE(errs.size() == 1);
        for (const auto &[e, name] : kExperiments) {
            REQUIRE(errs[0].find(std::string(name)) != std::string::npos);
        }
    }
    SECTION("every problem is reported, not only the first") {
        const auto errs = config_errors(R"({"experiment": "stein", "seed": -3, "colour": 1,
            "parameters": {"p": [0.5, 0.6], "q": [0.75, 0.25], "epsilon": 1.5, "typo": 0}})");
        REQUIRE(any_contains(errs, "seed"));
        REQUIRE(any_contains(errs, "colour"));
        REQUIRE(any_contains(errs, "parameters.p"));
        REQUIRE(any_contains(errs, "parameters.epsilon"));
        REQUIRE(any_contains(errs, "parameters.n_list"));
        REQUIRE(any_contains(errs, "parameters.typo"));
        REQUIRE(errs.size() == 6);
    }
    SECTION("matrices are validated on load") {
        const auto errs = config_errors(R"({"experiment": "hot", "parameters": {"mode": "explicit",
            "rho": [[[1.2, 0], [0, 0]], [[0, 0], [-0.2, 0]]],
            "sigma": [[[0.5, 0], [0, 0]], [[0, 0], [0.5, 0]]],
            "measurement": [[[[1, 0], [0, 0]], [[0, 0], [0, 0]]], [[[0, 0], [0, 0]], [[0, 0], [0.5, 0]]]]}})");
        REQUIRE(any_contains(errs, "parameters.rho"));
        REQUIRE(any_contains(errs, "parameters.measurement"));
        REQUIRE_FALSE(any_contains(errs, "parameters.sigma"));
    }
    SECTION("support violations in a model are rejected") {
        const auto errs = config_errors(R"({"experiment": "modelsel", "parameters": {
            "true_dist": [0.5, 0.5], "n": 5, "datasets": 2,
            "models": [{"dists": [[0.5, 0.5], [1.0, 0.0]]}]}})");
        REQUIRE(any_contains(errs, "parameters.models[0]"));
    }
    SECTION("malformed syntax carries line and column") {
        const std::string text = "{\n  \"experiment\": \"stein\",\n  \"parameters\": {,}\n}";
        try {
            (void)parse_config(text);
            FAIL("expected a parse error");
        } catch (const ParseError &e) {
            REQUIRE(e.line() == 3);
            REQUIRE(e.column() == 18);
        }
    }
}

TEST_CASE("parse_config round trip over randomized configs", "[harness][property]") {
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 50; ++i) {
        const std::string text = random_config(rng);
        INFO(text);
        const ExperimentConfig cfg = parse_config(text);
        const ExperimentConfig back = parse_config(serialize_config(cfg).dump());
        REQUIRE(back == cfg);
        REQUIRE(parse_config(serialize_config(back).dump(2)) == cfg);
    }
}

TEST_CASE("stein report matches the library computation", "[harness]") {
    const ExperimentConfig cfg = load_config(kConfigDir + "/stein_eps005.json");
    const ExperimentReport r = run_experiment(cfg);
    const std::vector<std::size_t> ns{1000, 1500, 2000, 2500, 3000, 3500, 4000, 4500, 5000};
    const SteinResult s = stein_rate({0.5, 0.5}, {0.75, 0.25}, 0.05, ns);
    REQUIRE(r.results["fitted_rate"].get<double>() == s.fitted_rate);
    REQUIRE(r.results["per_n"].size() == ns.size());
    for (std::size_t i = 0; i < ns.size(); ++i) {
        REQUIRE(r.results["per_n"][i]["rate_n"].get<double>() == s.per_n[i]);
    }
    REQUIRE(r.results["relative_entropy"].get<double>() == Approx(0.143841).margin(1e-6));
    REQUIRE(r.results["np_optimality"]["tests_enumerated"] == 256);

    const std::string csv = write_report(r, Format::csv);
    std::istringstream lines(csv);
    std::string header;
    std::string first;
    std::getline(lines, header);
    std::getline(lines, first);
    REQUIRE(header == "n,log_beta_n,rate_n");
    char expect[64];
    std::snprintf(expect, sizeof expect, "1000,%.17g,%.17g", s.log_beta[0], s.per_n[0]);
    REQUIRE(first == expect);
}

TEST_CASE("hot reports", "[harness]") {
    SECTION("commuting qubit pair flags a zero gap") {
        const ExperimentReport r = run_experiment(load_config(kConfigDir + "/hot_qubit.json"));
        REQUIRE(r.results["gap_zero"] == true);
        REQUIRE(r.all_pass());
    }
    SECTION("infinite divergences serialize as strings") {
        const ExperimentConfig cfg = parse_config(R"({"experiment": "hot", "parameters": {"mode": "explicit",
            "rho": [[[0.5, 0], [0, 0]], [[0, 0], [0.5, 0]]],
            "sigma": [[[1, 0], [0, 0]], [[0, 0], [0, 0]]],
            "measurement": [[[[1, 0], [0, 0]], [[0, 0], [0, 0]]], [[[0, 0], [0, 0]], [[0, 0], [1, 0]]]],
            "alphas": [-1]}})");
        const ExperimentReport r = run_experiment(cfg);
        REQUIRE(r.results["per_alpha"][0]["quantum"] == "inf");
        REQUIRE(r.results["per_alpha"][0]["measured"] == "inf");
        REQUIRE(r.results["per_alpha"][0]["gap"] == "not-comparable");
        REQUIRE(r.results["gap_zero"] == false);
        const std::string text = write_report(r, Format::json);
        REQUIRE(text.find("\"inf\"") != std::string::npos);
        REQUIRE(text.find("NaN") == std::string::npos);
        REQUIRE(write_report(r, Format::csv).find("not-comparable") != std::string::npos);
    }
}

TEST_CASE("write_report format contracts", "[harness]") {
    ExperimentReport r;
    r.table.header = {"n", "log_beta_n", "rate_n"};
    REQUIRE(write_report(r, Format::csv) == "n,log_beta_n,rate_n\n");
    r.table.rows.push_back({1.0, 0.1, std::numeric_limits<double>::infinity()});
    REQUIRE(write_report(r, Format::csv) == "n,log_beta_n,rate_n\n1,0.10000000000000001,inf\n");
    REQUIRE(num(std::numeric_limits<double>::quiet_NaN()) == "not-comparable");
    REQUIRE(num(-std::numeric_limits<double>::infinity()) == "-inf");
    const json j = json::parse(write_report(r, Format::json));
    REQUIRE(j.contains("duration_seconds"));
    REQUIRE(j["version"] == QLAB_VERSION);
}

TEST_CASE("reports are deterministic within a process", "[harness]") {
    for (const char *name : {"sanov.json", "risk_alpha.json", "hot_qubit.json", "divergence_props.json"}) {
        const ExperimentConfig cfg = load_config(kConfigDir + "/" + name);
        REQUIRE(numeric_payload(run_experiment(cfg)) == numeric_payload(run_experiment(cfg)));
    }
    ExperimentConfig cfg = load_config(kConfigDir + "/divergence_props.json");
    const std::string a = numeric_payload(run_experiment(cfg));
    cfg.seed += 1;
    REQUIRE(numeric_payload(run_experiment(cfg)) != a);
}

TEST_CASE("capacity guards surface the parameter", "[harness]") {
    const ExperimentConfig cfg = parse_config(R"({"experiment": "risk-alpha", "parameters": {"n": 30}})");
    try {
        (void)run_experiment(cfg);
        FAIL("expected a capacity error");
    } catch (const CapacityError &e) {
        REQUIRE(e.parameter() == "n");
    }
}

TEST_CASE("every shipped config validates", "[harness]") {
    const auto files = shipped_configs();
    REQUIRE(files.size() >= 12);
    for (const auto &f : files) {
        INFO(f);
        REQUIRE_NOTHROW(load_config(f));
    }
}

TEST_CASE("command-line interface", "[harness][cli]") {
    const auto tmp = std::filesystem::temp_directory_path() / "qlab_cli_test";
    std::filesystem::create_directories(tmp);
    const auto write = [&](const std::string &name, const std::string &text) {
        const auto path = (tmp / name).string();
        std::ofstream(path) << text;
        return path;
    };
    REQUIRE(run_cli("list") == 0);
    REQUIRE(run_cli("validate --config " + kConfigDir + "/sanov.json") == 0);
    REQUIRE(run_cli("validate --config " + write("bad.json", R"({"experiment": "nope"})")) == 1);
    REQUIRE(run_cli("validate --config " + write("broken.json", "{")) == 1);
    REQUIRE(run_cli("validate --config " + (tmp / "missing.json").string()) == 1);
    REQUIRE(run_cli("run") == 1);
    REQUIRE(run_cli("run --config " + kConfigDir + "/sanov.json --format xml") == 1);
    REQUIRE(run_cli("run --config " +
                    write("cap.json", R"({"experiment": "risk-alpha", "parameters": {"n": 30}})")) == 2);
    REQUIRE(run_cli("run --config " + write("num.json", R"({"experiment": "modelsel", "parameters": {
        "true_dist": [0.5, 0.5], "n": 20, "datasets": 1, "models": [{"dists": [[1.0, 0.0]], "dim": 0}]}})")) == 3);

    SECTION("byte-identical output across processes") {
        for (const char *fmt : {"csv", "json"}) {
            const auto a = (tmp / (std::string("a.") + fmt)).string();
            const auto b = (tmp / (std::string("b.") + fmt)).string();
            const std::string base = "run --config " + kConfigDir + "/risk_alpha.json --format " + fmt;
            REQUIRE(run_cli(base + " --out " + a) == 0);
            REQUIRE(run_cli(base + " --out " + b) == 0);
            if (std::string(fmt) == "csv") {
                REQUIRE(slurp(a) == slurp(b));
            } else {
                json ja = json::parse(slurp(a));
                json jb = json::parse(slurp(b));
                ja.erase("duration_seconds");
                jb.erase("duration_seconds");
                REQUIRE(ja == jb);
            }
        }
    }
    SECTION("--seed overrides the config seed") {
        const auto a = (tmp / "s1.csv").string();
        const auto b = (tmp / "s2.csv").string();
        const std::string base = "run --config " + kConfigDir + "/divergence_props.json --format csv";
        REQUIRE(run_cli(base + " --seed 11 --out " + a) == 0);
        REQUIRE(run_cli(base + " --seed 12 --out " + b) == 0);
        REQUIRE(slurp(a) != slurp(b));
    }
}
