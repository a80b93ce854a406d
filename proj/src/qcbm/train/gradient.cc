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

#include "qcbm/train/gradient.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "qcbm/fdiv/divergence.h"
#include "qcbm/sim/statevector.h"

namespace qcbm {

namespace {

std::vector<double> frequencies(const DiscreteDistribution &dist, size_t shots, Rng &rng) {
    std::vector<double> out(dist.size(), 0.0);
    double w = 1.0 / static_cast<double>(shots);
    for (auto x : sample(dist, shots, rng)) {
        out[x] += w;
    }
    return out;
}

std::vector<double> as_vector(const DiscreteDistribution &dist) {
    auto p = dist.probabilities();
    return {p.begin(), p.end()};
}

void check_ratios(std::span<const double> ratios, size_t expected) {
    if (ratios.size() != expected) {
        throw std::invalid_argument("ratio table has " + std::to_string(ratios.size()) + " entries, expected " +
                                    std::to_string(expected));
    }
}

}  // namespace

ShiftedWeights shifted_weights(const AnsatzSpec &ansatz, std::span<const double> theta, size_t index,
                               const GradientOptions &options, Rng &rng) {
    auto plus = model_distribution(ansatz, shifted_parameters(theta, index, +1));
    auto minus = model_distribution(ansatz, shifted_parameters(theta, index, -1));
    if (options.mode == ExpectationMode::Exact) {
        return {as_vector(plus), as_vector(minus)};
    }
    if (options.shots == 0) {
        throw std::invalid_argument("sampled gradients need at least one shot");
    }
    auto wp = frequencies(plus, options.shots, rng);
    auto wm = frequencies(minus, options.shots, rng);
    return {std::move(wp), std::move(wm)};
}

std::vector<double> derivative_table(const GeneratorSpec &gen, std::span<const double> ratios,
                                     const RatioClampPolicy &clamp) {
    std::vector<double> out(ratios.size());
    for (size_t x = 0; x < ratios.size(); x++) {
        // Clamping first keeps an exact zero ratio (model misses an outcome) finite.
        out[x] = conjugate_derivative(gen, clamp.clamp(ratios[x]), clamp);
    }
    return out;
}

double shift_rule_estimate(std::span<const double> derivatives, const ShiftedWeights &weights) {
    double total = 0;
    for (size_t x = 0; x < derivatives.size(); x++) {
        total += derivatives[x] * (weights.plus[x] - weights.minus[x]);
    }
    return total;
}

double gradient_component(const GeneratorSpec &gen, const AnsatzSpec &ansatz, std::span<const double> theta,
                          size_t index, std::span<const double> ratios, const GradientOptions &options, Rng &rng) {
    check_ratios(ratios, size_t{1} << ansatz.num_qubits);
    auto weights = shifted_weights(ansatz, theta, index, options, rng);
    return shift_rule_estimate(derivative_table(gen, ratios, options.clamp), weights);
}

std::vector<double> full_gradient(const GeneratorSpec &gen, const AnsatzSpec &ansatz, std::span<const double> theta,
                                  std::span<const double> ratios, const GradientOptions &options, Rng &rng) {
    check_ratios(ratios, size_t{1} << ansatz.num_qubits);
    auto derivatives = derivative_table(gen, ratios, options.clamp);
    std::vector<double> grad(ansatz.num_parameters());
    for (size_t i = 0; i < grad.size(); i++) {
        grad[i] = shift_rule_estimate(derivatives, shifted_weights(ansatz, theta, i, options, rng));
    }
    return grad;
}

size_t switch_choice(std::span<const double> candidate_gradients) {
    if (candidate_gradients.empty()) {
        throw std::invalid_argument("divergence switching needs at least one candidate");
    }
    size_t best = 0;
    for (size_t k = 1; k < candidate_gradients.size(); k++) {
        if (std::abs(candidate_gradients[k]) > std::abs(candidate_gradients[best])) {
            best = k;
        }
    }
    return best;
}

SwitchedGradient f_switch_gradient(std::span<const Generator> candidates, const AnsatzSpec &ansatz,
                                   std::span<const double> theta, std::span<const double> ratios,
                                   const GradientOptions &options, Rng &rng) {
    if (candidates.empty()) {
        throw std::invalid_argument("divergence switching needs at least one candidate");
    }
    check_ratios(ratios, size_t{1} << ansatz.num_qubits);
    std::vector<Generator> ordered(candidates.begin(), candidates.end());
    std::sort(ordered.begin(), ordered.end());
    ordered.erase(std::unique(ordered.begin(), ordered.end()), ordered.end());
    std::vector<std::vector<double>> derivatives;
    for (auto g : ordered) {
        derivatives.push_back(derivative_table(generator_spec(g), ratios, options.clamp));
    }
    std::vector<double> values(ordered.size());
    SwitchedGradient out;
    out.gradient.resize(ansatz.num_parameters());
    out.chosen.resize(ansatz.num_parameters());
    for (size_t i = 0; i < out.gradient.size(); i++) {
        auto weights = shifted_weights(ansatz, theta, i, options, rng);
        for (size_t k = 0; k < ordered.size(); k++) {
            values[k] = shift_rule_estimate(derivatives[k], weights);
        }
        size_t best = switch_choice(values);
        out.gradient[i] = values[best];
        out.chosen[i] = ordered[best];
    }
    return out;
}

std::vector<double> k_local_gradient(const GeneratorSpec &gen, const AnsatzSpec &ansatz,
                                     std::span<const double> theta, size_t k,
                                     std::span<const std::vector<double>> local_ratios,
                                     const GradientOptions &options, Rng &rng) {
    size_t n = ansatz.num_qubits;
    if (k < 1 || k > n) {
        throw std::invalid_argument("window width k must be in [1, " + std::to_string(n) + "]");
    }
    auto windows = sliding_windows(n, k);
    if (local_ratios.size() != windows.size()) {
        throw std::invalid_argument("need one ratio table per window");
    }
    std::vector<std::vector<double>> derivatives;
    for (const auto &r : local_ratios) {
        check_ratios(r, size_t{1} << k);
        derivatives.push_back(derivative_table(gen, r, options.clamp));
    }
    std::vector<double> grad(ansatz.num_parameters());
    for (size_t i = 0; i < grad.size(); i++) {
        auto weights = shifted_weights(ansatz, theta, i, options, rng);
        double total = 0;
        for (size_t w = 0; w < windows.size(); w++) {
            ShiftedWeights local{marginal_table(weights.plus, n, windows[w]),
                                 marginal_table(weights.minus, n, windows[w])};
            total += shift_rule_estimate(derivatives[w], local);
        }
        grad[i] = total / static_cast<double>(windows.size());
    }
    return grad;
}

double window_averaged_divergence(const GeneratorSpec &gen, const DiscreteDistribution &target,
                                  const DiscreteDistribution &model, size_t k) {
    auto windows = sliding_windows(target.num_bits(), k);
    double total = 0;
    for (auto w : windows) {
        total += exact_divergence_conjugate(gen, marginal(target, w), marginal(model, w));
    }
    return total / static_cast<double>(windows.size());
}

}  // namespace qcbm
