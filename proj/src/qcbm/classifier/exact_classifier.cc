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

#include "qcbm/classifier/exact_classifier.h"

#include <limits>
#include <stdexcept>

namespace qcbm {

ExactClassifier::ExactClassifier(DiscreteDistribution target, DiscreteDistribution model)
    : target_(std::move(target)), model_(std::move(model)) {
    if (target_.size() != model_.size()) {
        throw std::invalid_argument("exact classifier needs distributions over the same outcomes");
    }
}

double ExactClassifier::probability(uint64_t outcome) const {
    double p = target_[outcome];
    double q = model_[outcome];
    if (p + q == 0) {
        return 0.5;
    }
    return q / (p + q);
}

std::vector<double> ExactClassifier::ratio_table(const RatioClampPolicy &clamp) const {
    std::vector<double> out(target_.size());
    for (uint64_t x = 0; x < out.size(); x++) {
        out[x] = clamp.clamp(exact_ratio(*this, x));
    }
    return out;
}

double exact_ratio(const ExactClassifier &classifier, uint64_t outcome) {
    double p = classifier.target()[outcome];
    double q = classifier.model()[outcome];
    if (p > 0) {
        return q / p;
    }
    return q > 0 ? std::numeric_limits<double>::infinity() : 1.0;
}

double plug_in_divergence(const GeneratorSpec &gen, const DiscreteDistribution &target,
                          std::span<const double> ratios) {
    if (ratios.size() != target.size()) {
        throw std::invalid_argument("ratio table does not match the outcome space");
    }
    double total = 0;
    for (uint64_t x = 0; x < ratios.size(); x++) {
        double p = target[x];
        if (p == 0) {
            continue;
        }
        double r = ratios[x];
        total += p * (r > 0 ? gen.conjugate(r) : gen.conjugate_at_zero);
    }
    return total;
}

}  // namespace qcbm
