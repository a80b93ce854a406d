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

#ifndef QCBM_TRAIN_GRADIENT_H
#define QCBM_TRAIN_GRADIENT_H

#include <cstdint>
#include <span>
#include <vector>

#include "qcbm/dist/distribution.h"
#include "qcbm/fdiv/generators.h"
#include "qcbm/sim/ansatz.h"
#include "qcbm/util/random.h"

namespace qcbm {

enum class ExpectationMode : uint8_t {
    /// Expectations over the shifted circuits use their full probability tables.
    Exact,
    /// Expectations are sample means over `shots` draws from each shifted circuit.
    Sampled,
};

struct GradientOptions {
    ExpectationMode mode = ExpectationMode::Sampled;
    size_t shots = 1000;
    RatioClampPolicy clamp;
};

/// What the shifted circuits θ_i± contribute to one gradient direction: probability tables in exact
/// mode, empirical frequencies in sampled mode. Shared by every divergence evaluated on that direction.
struct ShiftedWeights {
    std::vector<double> plus;
    std::vector<double> minus;
};

/// Runs the two shifted circuits for direction `index` (two simulations).
ShiftedWeights shifted_weights(const AnsatzSpec &ansatz, std::span<const double> theta, size_t index,
                               const GradientOptions &options, Rng &rng);

/// f*'(r(x)) for every entry of a ratio table, with the clamp applied.
std::vector<double> derivative_table(const GeneratorSpec &gen, std::span<const double> ratios,
                                     const RatioClampPolicy &clamp);

/// Σ_x f*'(r(x)) (w+(x) - w-(x)), i.e. E_{θ_i+}[f*'(r)] - E_{θ_i-}[f*'(r)].
double shift_rule_estimate(std::span<const double> derivatives, const ShiftedWeights &weights);

/// One component ∂D_f/∂θ_i. `ratios` holds r(x) = q_θ(x)/p(x) at the unshifted θ, one entry per
/// outcome; it is not re-evaluated at the shifted parameters.
double gradient_component(const GeneratorSpec &gen, const AnsatzSpec &ansatz, std::span<const double> theta,
                          size_t index, std::span<const double> ratios, const GradientOptions &options, Rng &rng);

/// All components of ∂D_f/∂θ.
std::vector<double> full_gradient(const GeneratorSpec &gen, const AnsatzSpec &ansatz, std::span<const double> theta,
                                  std::span<const double> ratios, const GradientOptions &options, Rng &rng);

struct SwitchedGradient {
    std::vector<double> gradient;
    std::vector<Generator> chosen;
};

/// Index of the entry with the largest magnitude; the first one wins ties.
size_t switch_choice(std::span<const double> candidate_gradients);

/// Per direction, the gradient of whichever candidate divergence has the largest magnitude there.
/// All candidates share one pair of shifted evaluations per direction. Ties go to the candidate
/// earliest in registry order. Throws std::invalid_argument on an empty candidate set.
SwitchedGradient f_switch_gradient(std::span<const Generator> candidates, const AnsatzSpec &ansatz,
                                   std::span<const double> theta, std::span<const double> ratios,
                                   const GradientOptions &options, Rng &rng);

/// Gradient of the window-averaged cost (1/(n-k+1)) Σ_w D_f(p^w || q^w_θ) over the sliding windows
/// of width k. `local_ratios[w]` is the ratio table (2^k entries) of window w.
std::vector<double> k_local_gradient(const GeneratorSpec &gen, const AnsatzSpec &ansatz,
                                     std::span<const double> theta, size_t k,
                                     std::span<const std::vector<double>> local_ratios,
                                     const GradientOptions &options, Rng &rng);

/// (1/(n-k+1)) Σ_w D_f(p^w || q^w), evaluated exactly. k = n gives the global divergence.
double window_averaged_divergence(const GeneratorSpec &gen, const DiscreteDistribution &target,
                                  const DiscreteDistribution &model, size_t k);

}  // namespace qcbm

#endif
