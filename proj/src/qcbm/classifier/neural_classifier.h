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

#ifndef QCBM_CLASSIFIER_NEURAL_CLASSIFIER_H
#define QCBM_CLASSIFIER_NEURAL_CLASSIFIER_H

#include <cstdint>
#include <span>
#include <vector>

#include "json.hpp"
#include "qcbm/fdiv/generators.h"
#include "qcbm/util/random.h"

namespace qcbm {

struct ClassifierTrainConfig {
    double learning_rate = 0.01;
    /// Passes over the training set per call to `train_classifier`.
    size_t epochs = 20;
    /// Batches at least as large as the training set run exact full-batch gradient descent.
    size_t batch_size = 64;
    uint64_t seed = 0;

    void validate() const;
};

/// One-hidden-layer ReLU network with a logistic output: d(x) is the probability that x came
/// from the model (label 1) rather than the target (label 0). Inputs are bits as {0, 1} reals,
/// most significant bit first.
class NeuralClassifier {
   public:
    /// Random initialisation. Hidden width defaults to 10 * input_width.
    NeuralClassifier(size_t input_width, Rng &rng, size_t hidden_width = 0);

    size_t input_width() const {
        return input_width_;
    }
    size_t hidden_width() const {
        return hidden_width_;
    }

    /// Pre-sigmoid activation. Throws std::invalid_argument on a width mismatch.
    double logit(std::span<const double> features) const;
    double logit(uint64_t outcome) const;
    /// d(x), kept strictly inside (0, 1).
    double probability(std::span<const double> features) const;
    double probability(uint64_t outcome) const;

    /// -mean_{x in model} log d(x) - mean_{x in target} log(1 - d(x)). Both sets must be non-empty.
    double loss(std::span<const uint64_t> model_samples, std::span<const uint64_t> target_samples) const;
    /// Analytic gradient of `loss` in `parameters()` order.
    std::vector<double> loss_gradient(std::span<const uint64_t> model_samples,
                                      std::span<const uint64_t> target_samples) const;

    /// Flattened parameters: hidden weights (row-major, hidden x input), hidden biases,
    /// output weights, output bias.
    std::vector<double> parameters() const;
    void set_parameters(std::span<const double> values);

    nlohmann::json to_json() const;
    static NeuralClassifier from_json(const nlohmann::json &j);

   private:
    NeuralClassifier() = default;
    friend class ClassifierTrainer;

    // Adds weight * d(loss term)/d(params) for one input with label `label` into `grad`.
    void accumulate(uint64_t outcome, bool label, double weight, std::span<double> grad) const;
    void apply_step(std::span<const double> grad, double learning_rate);

    size_t input_width_ = 0;
    size_t hidden_width_ = 0;
    std::vector<double> hidden_weights_;
    std::vector<double> hidden_bias_;
    std::vector<double> output_weights_;
    double output_bias_ = 0;
};

/// Per-epoch training-set loss, including the value before the first step.
struct TrainingTrace {
    std::vector<double> losses;
};

/// Plain SGD on the cross-entropy loss, updating `classifier` in place (warm start).
TrainingTrace train_in_place(NeuralClassifier &classifier, std::span<const uint64_t> model_samples,
                             std::span<const uint64_t> target_samples, const ClassifierTrainConfig &config,
                             Rng &rng);

/// Fresh classifier of default width trained from scratch with the config's seed.
NeuralClassifier train_classifier(std::span<const uint64_t> model_samples, std::span<const uint64_t> target_samples,
                                  size_t input_width, const ClassifierTrainConfig &config);

/// d/(1-d) computed as exp(logit), clamped to the policy.
double predict_ratio(const NeuralClassifier &classifier, std::span<const double> features,
                     const RatioClampPolicy &clamp);
/// Ratios for all 2^k window outcomes.
std::vector<double> ratio_table(const NeuralClassifier &classifier, const RatioClampPolicy &clamp);

/// d/(1-d) clamped to the policy; d outside (0, 1) maps to the nearest bound.
double ratio_from_probability(double d, const RatioClampPolicy &clamp);

}  // namespace qcbm

#endif
