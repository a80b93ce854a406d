// Copyright 2026 The qcbm_lab Authors
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

// Command-line front end: run experiments, fault-tolerant estimation trials, and list divergences.

#include <cstdio>
#include <exception>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "qcbm/cli/config.h"
#include "qcbm/cli/experiment.h"
#include "qcbm/fdiv/generators.h"

namespace {

constexpr int kConfigError = 2;
constexpr int kRuntimeError = 3;

struct Overrides {
    std::optional<size_t> seed_count;
    std::optional<std::string> out;
    std::optional<size_t> workers;
    std::optional<size_t> trials;
};

void apply(const Overrides &o, qcbm::ExperimentConfig &c) {
    if (o.seed_count) {
        if (*o.seed_count == 0) {
            throw qcbm::ConfigError("--seed-count", 0, "must be positive");
        }
        c.seeds.clear();
        for (size_t s = 0; s < *o.seed_count; s++) {
            c.seeds.push_back(s);
        }
    }
    if (o.out) {
        c.output = *o.out;
    }
    if (o.workers) {
        c.workers = *o.workers;
    }
    if (o.trials) {
        c.ft.trials = *o.trials;
    }
    qcbm::validate(c);
}

void report(const qcbm::RunResult &r, bool dry_run) {
    std::printf("%s %zu file(s) in %s (%.1f s)\n", dry_run ? "validated; wrote" : "wrote", r.files.size(),
                r.output.string().c_str(), r.wall_seconds);
}

int guarded(const std::function<void()> &body) {
    try {
        body();
        return 0;
    } catch (const qcbm::ConfigError &e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kConfigError;
    } catch (const std::exception &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kRuntimeError;
    }
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Train quantum circuit Born machines with f-divergences and simulate fault-tolerant estimators"};
    app.set_version_flag("--version", std::string("qcbm_lab ") + QCBM_VERSION);
    app.require_subcommand(1);

    std::string config_path;
    Overrides overrides;
    qcbm::RunOptions options;

    auto *run = app.add_subcommand("run", "Run an experiment described by a JSON config (or a manifest to replay)");
    run->add_option("config", config_path, "Config or manifest file")->required();
    run->add_option("--seed-count", overrides.seed_count, "Use seeds 0..N-1");
    run->add_option("--out", overrides.out, "Output directory");
    run->add_option("--workers", overrides.workers, "Worker threads (0: one per hardware thread)");
    run->add_flag("--dry-run", options.dry_run, "Validate and write the manifest only");
    run->add_flag("--charts", options.charts, "Also write SVG charts of the summaries");

    auto *ft = app.add_subcommand("estimate-ft", "Run fault-tolerant estimation trials (ft_estimate configs)");
    ft->add_option("config", config_path, "Config or manifest file")->required();
    ft->add_option("--out", overrides.out, "Output directory");
    ft->add_option("--trials", overrides.trials, "Trials per pair");
    ft->add_option("--workers", overrides.workers, "Worker threads (0: one per hardware thread)");
    ft->add_flag("--dry-run", options.dry_run, "Validate and write the manifest only");

    auto *list = app.add_subcommand("list-divergences", "List the available f-divergences");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kConfigError;
    }

    if (list->parsed()) {
        for (const auto &g : qcbm::generator_registry()) {
            std::printf("%-14s %-10s %s\n", std::string(g.name).c_str(),
                        g.symmetric ? "symmetric" : "", std::string(g.description).c_str());
        }
        return 0;
    }

    qcbm::ExperimentConfig config;
    int status = guarded([&] {
        config = qcbm::load_experiment_config(config_path);
        if (ft->parsed() && config.kind != qcbm::ExperimentKind::FtEstimate) {
            throw qcbm::ConfigError(config_path, 0,
                                    "estimate-ft needs an ft_estimate config, got '" +
                                        qcbm::experiment_kind_name(config.kind) + "'");
        }
        apply(overrides, config);
    });
    if (status != 0) {
        return status;
    }
    return guarded([&] { report(qcbm::run_experiment(config, options), options.dry_run); });
}
