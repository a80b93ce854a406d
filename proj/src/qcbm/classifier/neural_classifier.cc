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

#include "qcbm/classifier/neural_classifier.h"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qcbm {

namespace {

double softplus(double z) {
    return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double sigmoid(double z) {
    if (z >= 0) {
        return 1 / (1 + std::exp(-z));
    }
    double e = std::exp(z);
    return e / (1 + e);
}

void features_of(uint64_t outcome, size_t width, std::span<double> out) {
    for (size_t i = 0; i < width; i++) {
        out[i] = static_cast<double>((outcome >> (width - 1 - i)) & 1);
    }
}

}  // namespace

void ClassifierTrainConfig::validate() const {
    if (!(learning_rate > 0) || epochs == 0 || batch_size == 0) {
        throw std::invalid_argument("classifier learning rate, epochs and batch size must be positive");
    }
}

NeuralClassifier::NeuralClassifier(size_t input_width, Rng &rng, size_t hidden_width)
    : input_width_(input_width), hidden_width_(hidden_width == 0 ? 10 * input_width : hidden_width) {
    if (input_width == 0 || input_width > 20) {
        throw std::invalid_argument("classifier input width must be in [1, 20]");
    }
    double bound_in = std::sqrt(6.0 / static_cast<double>(input_width_));
    double bound_out = 1.0 / std::sqrt(static_cast<double>(hidden_width_));
    hidden_weights_.resize(hidden_width_ * input_width_);
    for (auto &w : hidden_weights_) {
        w = (2 * uniform01(rng) - 1) * bound_in;
    }
    hidden_bias_.assign(hidden_width_, 0.01);
    output_weights_.resize(hidden_width_);
    for (auto &w : output_weights_) {
        w = (2 * uniform01(rng) - 1) * bound_out;
    }
}

double NeuralClassifier::logit(std::span<const double> features) const {
    if (features.size() != input_width_) {
        throw std::invalid_argument(
            "classifier expects " + std::to_string(input_width_) + " input bits, got " +
            std::to_string(features.size()));
    }
    double z = output_bias_;
    for (size_t j = 0; j < hidden_width_; j++) {
        double a = hidden_bias_[j];
        for (size_t i = 0; i < input_width_; i++) {
            a += hidden_weights_[j * input_width_ + i] * features[i];
        }
        if (a > 0) {
            z += output_weights_[j] * a;
        }
    }
    return z;
}

double NeuralClassifier::logit(uint64_t outcome) const {
    double buf[20];
    features_of(outcome, input_width_, std::span<double>(buf, input_width_));
    return logit(std::span<const double>(buf, input_width_));
}

double NeuralClassifier::probability(std::span<const double> features) const {
    constexpr double lo = std::numeric_limits<double>::min();
    constexpr double hi = 1 - std::numeric_limits<double>::epsilon() / 2;
    return std::min(std::max(sigmoid(logit(features)), lo), hi);
}

double NeuralClassifier::probability(uint64_t outcome) const {
    double buf[20];
    features_of(outcome, input_width_, std::span<double>(buf, input_width_));
    return probability(std::span<const double>(buf, input_width_));
}

double NeuralClassifier::loss(std::span<const uint64_t> model_samples,
                              std::span<const uint64_t> target_samples) const {
    if (model_samples.empty() || target_samples.empty()) {
        throw std::invalid_argument("classifier loss needs samples from both classes");
    }
    // -log σ(z) = softplus(-z); -log(1 - σ(z)) = softplus(z).
    double model_term = 0;
    for (auto x : model_samples) {
        model_term += softplus(-logit(x));
    }
    double target_term = 0;
    for (auto x : target_samples) {
        target_term += softplus(logit(x));
    }
    return model_term / static_cast<double>(model_samples.size()) +
           target_term / static_cast<double>(target_samples.size());
}

void NeuralClassifier::accumulate(uint64_t outcome, bool label, double weight, std::span<double> grad) const {
    double x[20];
    features_of(outcome, input_width_, std::span<double>(x, input_width_));
    double hidden[512];
    double *h = hidden_width_ <= 512 ? hidden : nullptr;
    std::vector<double> heap;
    if (h == nullptr) {
        heap.resize(hidden_width_);
        h = heap.data();
    }
    double z = output_bias_;
    for (size_t j = 0; j < hidden_width_; j++) {
        double a = hidden_bias_[j];
        for (size_t i = 0; i < input_width_; i++) {
            a += hidden_weights_[j * input_width_ + i] * x[i];
        }
        h[j] = a > 0 ? a : 0;
        z += output_weights_[j] * h[j];
    }
    double dz = weight * (sigmoid(z) - (label ? 1.0 : 0.0));
    size_t off_b1 = hidden_width_ * input_width_;
    size_t off_w2 = off_b1 + hidden_width_;
    size_t off_b2 = off_w2 + hidden_width_;
    for (size_t j = 0; j < hidden_width_; j++) {
        grad[off_w2 + j] += dz * h[j];
        if (h[j] > 0) {
            double da = dz * output_weights_[j];
            grad[off_b1 + j] += da;
            for (size_t i = 0; i < input_width_; i++) {
                grad[j * input_width_ + i] += da * x[i];
            }
        }
    }
    grad[off_b2] += dz;
}

std::vector<double> NeuralClassifier::loss_gradient(std::span<const uint64_t> model_samples,
                                                    std::span<const uint64_t> target_samples) const {
    if (model_samples.empty() || target_samples.empty()) {
        throw std::invalid_argument("classifier loss needs samples from both classes");
    }
    std::vector<double> grad(hidden_weights_.size() + 2 * hidden_width_ + 1, 0.0);
    double wm = 1.0 / static_cast<double>(model_samples.size());
    double wt = 1.0 / static_cast<double>(target_samples.size());
    for (auto x : model_samples) {
        accumulate(x, true, wm, grad);
    }
    for (auto x : target_samples) {
        accumulate(x, false, wt, grad);
    }
    return grad;
}

std::vector<double> NeuralClassifier::parameters() const {
    std::vector<double> out(hidden_weights_);
    out.insert(out.end(), hidden_bias_.begin(), hidden_bias_.end());
    out.insert(out.end(), output_weights_.begin(), output_weights_.end());
    out.push_back(output_bias_);
    return out;
}

void NeuralClassifier::set_parameters(std::span<const double> values) {
    size_t expected = hidden_weights_.size() + 2 * hidden_width_ + 1;
    if (values.size() != expected) {
        throw std::invalid_argument("classifier parameter vector has the wrong length");
    }
    auto it = values.begin();
    std::copy(it, it + hidden_weights_.size(), hidden_weights_.begin());
    it += hidden_weights_.size();
    std::copy(it, it + hidden_width_, hidden_bias_.begin());
    it += hidden_width_;
    std::copy(it, it + hidden_width_, output_weights_.begin());
    output_bias_ = values.back();
}

void NeuralClassifier::apply_step(std::span<const double> grad, double learning_rate) {
    auto params = parameters();
    for (size_t k = 0; k < params.size(); k++) {
        params[k] -= learning_rate * grad[k];
    }
    set_parameters(params);
}

nlohmann::json NeuralClassifier::to_json() const {
    return {
        {"input_width", input_width_},
        {"hidden_width", hidden_width_},
        {"hidden_weights", hidden_weights_},
        {"hidden_bias", hidden_bias_},
        {"output_weights", output_weights_},
        {"output_bias", output_bias_},
    };
}

NeuralClassifier NeuralClassifier::from_json(const nlohmann::json &j) {
    NeuralClassifier c;
    c.input_width_ = j.at("input_width").get<size_t>();
    c.hidden_width_ = j.at("hidden_width").get<size_t>();
    c.hidden_weights_ = j.at("hidden_weights").get<std::vector<double>>();
    c.hidden_bias_ = j.at("hidden_bias").get<std::vector<double>>();
    c.output_weights_ = j.at("output_weights").get<std::vector<double>>();
    c.output_bias_ = j.at("output_bias").get<double>();
    if (c.input_width_ == 0 || c.input_width_ > 20 || c.hidden_weights_.size() != c.hidden_width_ * c.input_width_ ||
        c.hidden_bias_.size() != c.hidden_width_ || c.output_weights_.size() != c.hidden_width_) {
        throw std::invalid_argument("classifier JSON has inconsistent shapes");
    }
    return c;
}

class ClassifierTrainer {
   public:
    static TrainingTrace run(NeuralClassifier &c, std::span<const uint64_t> model_samples,
                             std::span<const uint64_t> target_samples, const ClassifierTrainConfig &config,
                             Rng &rng) {
        config.validate();
        TrainingTrace trace;
        trace.losses.push_back(c.loss(model_samples, target_samples));
        size_t total = model_samples.size() + target_samples.size();
        double wm = 1.0 / static_cast<double>(model_samples.size());
        double wt = 1.0 / static_cast<double>(target_samples.size());
        std::vector<double> grad(c.parameters().size());

        if (config.batch_size >= total) {
            // Full batch: aggregate identical inputs so each step costs O(2^k) instead of O(samples).
            size_t outcomes = size_t{1} << c.input_width_;
            std::vector<double> model_weight(outcomes, 0.0), target_weight(outcomes, 0.0);
            for (auto x : model_samples) {
                model_weight.at(x) += wm;
            }
            for (auto x : target_samples) {
                target_weight.at(x) += wt;
            }
            for (size_t epoch = 0; epoch < config.epochs; epoch++) {
                std::fill(grad.begin(), grad.end(), 0.0);
                for (uint64_t x = 0; x < outcomes; x++) {
                    if (model_weight[x] > 0) {
                        c.accumulate(x, true, model_weight[x], grad);
                    }
                    if (target_weight[x] > 0) {
                        c.accumulate(x, false, target_weight[x], grad);
                    }
                }
                c.apply_step(grad, config.learning_rate);
                double loss = 0;
                for (uint64_t x = 0; x < outcomes; x++) {
                    if (model_weight[x] > 0 || target_weight[x] > 0) {
                        double z = c.logit(x);
                        loss += model_weight[x] * softplus(-z) + target_weight[x] * softplus(z);
                    }
                }
                trace.losses.push_back(loss);
            }
            return trace;
        }

        // Labelled, shuffled minibatches; each batch gradient is an unbiased estimate of the full one.
        std::vector<std::pair<uint64_t, bool>> data;
        data.reserve(total);
        for (auto x : model_samples) {
            data.emplace_back(x, true);
        }
        for (auto x : target_samples) {
            data.emplace_back(x, false);
        }
        for (size_t epoch = 0; epoch < config.epochs; epoch++) {
            for (size_t k = data.size(); k > 1; k--) {
                std::swap(data[k - 1], data[uniform_index(rng, k)]);
            }
            for (size_t begin = 0; begin < data.size(); begin += config.batch_size) {
                size_t end = std::min(begin + config.batch_size, data.size());
                double scale = static_cast<double>(total) / static_cast<double>(end - begin);
                std::fill(grad.begin(), grad.end(), 0.0);
                for (size_t k = begin; k < end; k++) {
                    auto [x, label] = data[k];
                    c.accumulate(x, label, scale * (label ? wm : wt), grad);
                }
                c.apply_step(grad, config.learning_rate);
            }
            trace.losses.push_back(c.loss(model_samples, target_samples));
        }
        return trace;
    }
};

TrainingTrace train_in_place(NeuralClassifier &classifier, std::span<const uint64_t> model_samples,
                             std::span<const uint64_t> target_samples, const ClassifierTrainConfig &config,
                             Rng &rng) {
    return ClassifierTrainer::run(classifier, model_samples, target_samples, config, rng);
}

NeuralClassifier train_classifier(std::span<const uint64_t> model_samples, std::span<const uint64_t> target_samples,
                                  size_t input_width, const ClassifierTrainConfig &config) {
    Rng rng(config.seed);
    NeuralClassifier c(input_width, rng);
    train_in_place(c, model_samples, target_samples, config, rng);
    return c;
}

double ratio_from_probability(double d, const RatioClampPolicy &clamp) {
    if (std::isnan(d)) {
        throw std::invalid_argument("classifier probability is NaN");
    }
    if (d <= 0) {
        return clamp.r_min;
    }
    if (d >= 1) {
        return clamp.r_max;
    }
    return clamp.clamp(d / (1 - d));
}

double predict_ratio(const NeuralClassifier &classifier, std::span<const double> features,
                     const RatioClampPolicy &clamp) {
    double z = classifier.logit(features);
    return clamp.clamp(std::exp(std::min(z, 700.0)));
}

std::vector<double> ratio_table(const NeuralClassifier &classifier, const RatioClampPolicy &clamp) {
    size_t outcomes = size_t{1} << classifier.input_width();
    std::vector<double> out(outcomes);
    for (uint64_t x = 0; x < outcomes; x++) {
        out[x] = clamp.clamp(std::exp(std::min(classifier.logit(x), 700.0)));
    }
    return out;
}

}  // namespace qcbm
