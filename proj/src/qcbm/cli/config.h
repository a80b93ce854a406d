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

#ifndef QCBM_CLI_CONFIG_H
#define QCBM_CLI_CONFIG_H

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "qcbm/train/training.h"

namespace qcbm {

enum class ExperimentKind : uint8_t {
    FSwitch,
    FLocal,
    FtEstimate,
    SingleDivergence,
};

std::string experiment_kind_name(ExperimentKind kind);

struct TargetSpec {
    enum class Type : uint8_t { QcbmRandom, Gaussian };
    Type type = Type::QcbmRandom;
    /// QcbmRandom: ansatz depth and the seed for its parameters.
    size_t depth = 1;
    uint64_t seed = 12345;
    /// Gaussian: unset fields take the per-size defaults.
    std::optional<double> mean;
    std::optional<double> stddev;
};

/// One training setup within an experiment; every seed is run for every variant.
struct Variant {
    std::string label;
    TrainConfig training;
};

enum class FtEstimator : uint8_t { Pearson, TotalVariation, KullbackLeibler };

std::string ft_estimator_name(FtEstimator e);

struct FtPair {
    std::vector<double> p;
    std::vector<double> q;
};

struct RandomPairSpec {
    size_t count = 0;
    std::vector<size_t> sizes = {4, 8, 16};
    uint64_t seed = 0;
    /// Entries are drawn uniformly from [low, high] and normalised, which bounds every ratio by
    /// high/low times the ratio of the two normalisers.
    double low = 0.5;
    double high = 1.5;
};

struct FtSpec {
    FtEstimator estimator = FtEstimator::Pearson;
    double epsilon = 0.05;
    size_t trials = 100;
    std::vector<FtPair> pairs;
    RandomPairSpec random_pairs;
};

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::SingleDivergence;
    std::string name = "experiment";
    size_t num_qubits = 3;
    TargetSpec target;
    size_t model_depth = 1;
    /// Shared settings; variants apply their overrides on top.
    TrainConfig training;
    /// Empty means the kind's default set.
    std::vector<Variant> variants;
    std::vector<uint64_t> seeds = {0, 1, 2, 3, 4, 5, 6, 7, 8};
    std::string output = "runs";
    /// 0 means one per hardware thread.
    size_t workers = 0;
    size_t bootstrap_resamples = 10000;
    uint64_t bootstrap_seed = 0;
    FtSpec ft;
};

/// A validation failure pinned to a line of the source text (0 when unknown).
class ConfigError : public std::runtime_error {
   public:
    ConfigError(const std::string &source, size_t line, const std::string &message);
    size_t line() const {
        return line_;
    }

   private:
    size_t line_;
};

/// Maps JSON pointers to the line where the member (or array element) starts.
class LineIndex {
   public:
    explicit LineIndex(const std::string &text);
    /// Line of the deepest indexed prefix of `pointer`; 1 for the root.
    size_t line_of(const std::string &pointer) const;

   private:
    std::map<std::string, size_t> lines_;
};

/// Parses and validates; `source` names the text in error messages. Manifests are accepted too:
/// a top-level "config" object is used in place of the document.
ExperimentConfig parse_experiment_config(const std::string &text, const std::string &source = "config");
ExperimentConfig load_experiment_config(const std::string &path);

/// Same checks for an already-built config; errors carry line 0.
void validate(const ExperimentConfig &config);

/// Fully explicit form (defaults filled in, variants expanded); parses back to an equal config.
nlohmann::json to_json(const ExperimentConfig &config);

/// The explicit variant list: the configured one, or the kind's defaults.
std::vector<Variant> resolved_variants(const ExperimentConfig &config);

}  // namespace qcbm

#endif
