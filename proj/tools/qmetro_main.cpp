// Copyright 2026 The qmetro Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qmetro/experiments.hpp"
#include "qmetro/validation.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;

int report_validation(std::uint64_t seed, int cases) {
    std::vector<qmetro::CheckResult> results = qmetro::run_validation_suite(seed, cases);
    for (const auto &r : results) {
        std::printf("%s  %-62s worst=%.3e tol=%.1e cases=%d\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.worst,
                    r.tolerance, r.cases);
    }
    return qmetro::all_passed(results) ? kExitOk : kExitValidation;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"qmetro: error-corrected quantum metrology experiments"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_path;
    auto *run = app.add_subcommand("run", "Run an experiment config and write its CSV");
    run->add_option("config", config_path, "Config file (key = value lines)")->required();
    run->add_option("--set", overrides, "Override a config key (key=value), repeatable");
    run->add_option("--out", out_path, "Output CSV path (overrides the config's output)");

    std::uint64_t seed = 1;
    int cases = qmetro::kDefaultValidationCases;
    auto *validate = app.add_subcommand("validate", "Cross-check analytic shortcuts against the dense oracle");
    validate->add_option("--seed", seed, "Seed of the randomized cases");
    validate->add_option("--cases", cases, "Randomized pipelines per qubit count")->check(CLI::PositiveNumber);

    auto *list = app.add_subcommand("list-experiments", "List experiment kinds");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*list) {
            for (qmetro::ExperimentKind k : qmetro::all_experiments()) {
                std::printf("%-12s %s\n", std::string(qmetro::experiment_name(k)).c_str(),
                            std::string(qmetro::experiment_summary(k)).c_str());
            }
            return kExitOk;
        }
        if (*validate) {
            return report_validation(seed, cases);
        }
        std::vector<std::pair<std::string, std::string>> kv;
        for (const std::string &o : overrides) {
            kv.push_back(qmetro::split_override(o));
        }
        qmetro::ExperimentConfig cfg = qmetro::load_config(config_path, kv);
        if (cfg.experiment == qmetro::ExperimentKind::Validate) {
            return report_validation(cfg.seed, cases);
        }
        auto rows = qmetro::run_to_file(cfg, out_path);
        std::fprintf(stderr, "wrote %zu rows to %s\n", rows.size(), (out_path.empty() ? cfg.output : out_path).c_str());
        return kExitOk;
    } catch (const qmetro::ConfigError &e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const qmetro::IoError &e) {
        std::fprintf(stderr, "i/o error: %s\n", e.what());
        return kExitIo;
    } catch (const std::exception &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    }
}
