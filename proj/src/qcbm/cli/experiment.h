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

#ifndef QCBM_CLI_EXPERIMENT_H
#define QCBM_CLI_EXPERIMENT_H

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qcbm/cli/config.h"
#include "qcbm/dist/distribution.h"
#include "qcbm/train/bootstrap.h"

namespace qcbm {

/// qcbm_random: Born distribution of ansatz(n, depth) at parameters drawn uniformly from [-π, π]
/// with Rng(seed). gaussian: discretised Gaussian with the per-size defaults for unset fields.
DiscreteDistribution make_target(const TargetSpec &spec, size_t num_qubits);

/// Parameterisation regime of a QCBM target of depth `target_depth` against a model of depth
/// `model_depth`, e.g. "OO(12,30)". A depth difference of 3 or more is severe.
std::string regime_label(size_t num_qubits, size_t target_depth, size_t model_depth);

/// Regime of a configured experiment; empty when the target is not a QCBM.
std::optional<std::string> regime_label(const ExperimentConfig &config);

/// Pairs for an ft_estimate experiment: the explicit ones followed by the random ones.
std::vector<FtPair> resolved_pairs(const FtSpec &spec);

struct RunOptions {
    bool dry_run = false;
    bool charts = false;
};

struct RunResult {
    std::filesystem::path output;
    /// Relative to `output`, in the order written.
    std::vector<std::string> files;
    double wall_seconds = 0;
};

/// Runs every (variant, seed) pair and writes, under config.output:
///   <variant>/seed_<s>.csv and .json   one training record per seed
///   <variant>/summary.csv              bootstrap median and 5th/95th percentiles per epoch
///   manifest.json                      resolved config, version, regime, wall time, file list
/// ft_estimate experiments write trials.csv and pairs.csv instead. A dry run validates and writes
/// the manifest only.
RunResult run_experiment(const ExperimentConfig &config, const RunOptions &options = {});

/// Columns: epoch, then median/p5/p95 for tv, kl and kl_rev.
void write_summary_csv(std::ostream &out, const BootstrapSummary &tv, const BootstrapSummary &kl,
                       const BootstrapSummary &kl_rev);

}  // namespace qcbm

#endif
