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

#ifndef QCBM_CLASSIFIER_EXACT_CLASSIFIER_H
#define QCBM_CLASSIFIER_EXACT_CLASSIFIER_H

#include <cstdint>
#include <span>
#include <vector>

#include "qcbm/dist/distribution.h"
#include "qcbm/fdiv/generators.h"

namespace qcbm {

/// Bayes-optimal discriminator between model samples (label 1) and target samples (label 0):
/// d*(x) = q(x) / (p(x) + q(x)).
class ExactClassifier {
   public:
    ExactClassifier(DiscreteDistribution target, DiscreteDistribution model);

    const DiscreteDistribution &target() const {
        return target_;
    }
    const DiscreteDistribution &model() const {
        return model_;
    }

    /// d*(x); 1/2 where neither distribution has mass.
    double probability(uint64_t outcome) const;

    /// Clamped ratio for every outcome, ready for gradient estimation.
    std::vector<double> ratio_table(const RatioClampPolicy &clamp) const;

   private:
    DiscreteDistribution target_;
    DiscreteDistribution model_;
};

/// r(x) = d*/(1 - d*) = q(x)/p(x). Returns 1 where p(x) = q(x) = 0 and +inf (overflow) where
/// p(x) = 0 < q(x).
double exact_ratio(const ExactClassifier &classifier, uint64_t outcome);

/// Adversarial estimate of the standardised divergence from a ratio table: Σ_x p(x) f*(r(x)).
double plug_in_divergence(const GeneratorSpec &gen, const DiscreteDistribution &target,
                          std::span<const double> ratios);

}  // namespace qcbm

#endif
