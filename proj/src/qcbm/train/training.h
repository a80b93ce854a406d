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

#ifndef QCBM_TRAIN_TRAINING_H
#define QCBM_TRAIN_TRAINING_H

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "qcbm/classifier/neural_classifier.h"
#include "qcbm/dist/distribution.h"
#include "qcbm/fdiv/generators.h"
#include "qcbm/sim/ansatz.h"
#include "qcbm/train/gradient.h"

namespace qcbm {

enum class Heuristic : uint8_t {
    Single,
    FSwitch,
    KLocal,
};

enum class ClassifierMode : uint8_t {
    /// Ratios from the exact distributions.
    Exact,
    /// Ratios from neural classifiers refreshed on fresh samples every epoch.
    Trained,
};

struct TrainConfig {
    std::vector<Generator> generators = {Generator::KlReverse};
    Heuristic heuristic = Heuristic::Single;
    /// Window width for the k-local heuristic.
    size_t k = 1;
    /// Samples per shifted circuit, and per class when refreshing classifiers.
    size_t shots = 1000;
    double learning_rate = 0.05;
    size_t epochs = 500;
    ExpectationMode expectation = ExpectationMode::Sampled;
    ClassifierMode classifier = ClassifierMode::Exact;
    ClassifierTrainConfig classifier_config{0.01, 20, 64, 0};
    RatioClampPolicy clamp;
    uint64_t seed = 0;
    bool record_parameters = false;

    /// Throws std::invalid_argument describing the first inconsistency.
    void validate(size_t num_qubits) const;
};

struct TrainRecord {
    std::vector<double> exact_tv;
    /// KL(p || q_θ), target first.
    std::vector<double> exact_kl;
    /// KL(q_θ || p).
    std::vector<double> exact_kl_rev;
    /// Parameters after each epoch, when requested.
    std::vector<std::vector<double>> parameters;
    /// Divergence picked per direction, per epoch (switching only).
    std::vector<std::vector<Generator>> chosen;
    std::vector<double> initial_parameters;

    size_t epochs() const {
        return exact_tv.size();
    }
};

/// Trains a fresh Born machine against `target`. Initial parameters are i.i.d. uniform on [-π, π].
/// Each epoch refreshes the ratio estimates at the current θ, takes one gradient step
/// θ <- θ - lr ∇, then records exact metrics for the updated model. Deterministic given the seed.
TrainRecord run_training(const TrainConfig &config, const DiscreteDistribution &target, const AnsatzSpec &ansatz);

/// Same as run_training from explicit initial parameters.
TrainRecord run_training_from(const TrainConfig &config, const DiscreteDistribution &target,
                              const AnsatzSpec &ansatz, std::vector<double> theta);

std::string heuristic_name(Heuristic h);
std::string expectation_mode_name(ExpectationMode m);
std::string classifier_mode_name(ClassifierMode m);

nlohmann::json to_json(const TrainConfig &config);
/// Missing fields keep their defaults. Throws nlohmann::json exceptions or std::invalid_argument.
TrainConfig train_config_from_json(const nlohmann::json &j);

/// Columns: epoch, exact_tv, exact_kl, exact_kl_rev, then chosen_<i> per direction when present.
void write_record_csv(std::ostream &out, const TrainRecord &record);
nlohmann::json to_json(const TrainRecord &record);

/// printf("%.17g"), so values round-trip exactly.
std::string format_double(double v);

}  // namespace qcbm

#endif
