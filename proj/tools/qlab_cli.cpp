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

// Command-line front end: run, validate and list experiments.
//
// Exit codes: 0 success, 1 validation failure, 2 capacity guard,
// 3 numerical error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qlab/qlab.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kValidation = 1;
constexpr int kCapacity = 2;
constexpr int kNumerical = 3;

int report_errors(const std::function<int()> &body) {
    try {
        return body();
    } catch (const qlab::ConfigError &e) {
        for (const auto &msg : e.errors()) {
            std::cerr << "error: " << msg << '\n';
        }
        return kValidation;
    } catch (const qlab::ValidationError &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kValidation;
    } catch (const qlab::CapacityError &e) {
        std::cerr << "capacity guard (" << e.parameter() << "): " << e.what() << '\n';
        return kCapacity;
    } catch (const qlab::Error &e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kNumerical;
    } catch (const std::exception &e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kNumerical;
    }
}

} // namespace

int main(int argc, char **argv) {
    using namespace qlab::harness;
    CLI::App app{"qlab: divergence, large-deviation and model-selection experiments"};
    app.set_version_flag("--version", QLAB_VERSION);
    app.require_subcommand(1);

    std::string config_path;
    std::string format = "json";
    std::string out_path;
    std::optional<std::uint64_t> seed;

    auto *run = app.add_subcommand("run", "Run an experiment and write its report");
    run->add_option("--config", config_path, "Experiment config (JSON)")->required();
    run->add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "csv"}));
    run->add_option("--out", out_path, "Output file (default: config output_path, else stdout)");
    run->add_option("--seed", seed, "Override the config seed");

    auto *validate = app.add_subcommand("validate", "Check a config without running it");
    validate->add_option("--config", config_path, "Experiment config (JSON)")->required();

    auto *list = app.add_subcommand("list", "List experiments and their parameters");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kValidation;
    }

    if (list->parsed()) {
        for (const auto &[e, name] : kExperiments) {
            std::cout << name << ": " << experiment_usage(e) << '\n';
        }
        return kOk;
    }
    if (validate->parsed()) {
        return report_errors([&] {
            const ExperimentConfig cfg = load_config(config_path);
            std::cout << "ok: " << to_string(cfg.experiment) << '\n';
            return kOk;
        });
    }
    return report_errors([&] {
        ExperimentConfig cfg = load_config(config_path);
        if (seed) {
            cfg.seed = *seed;
        }
        const ExperimentReport report = run_experiment(cfg);
        const std::string text =
            write_report(report, format == "csv" ? Format::csv : Format::json);
        const std::string target = out_path.empty() ? cfg.output_path : out_path;
        if (target.empty()) {
            std::cout << text;
        } else {
            std::ofstream out(target, std::ios::binary);
            if (!out || !(out << text)) {
                throw qlab::ValidationError("cannot write report to " + target);
            }
        }
        return kOk;
    });
}
