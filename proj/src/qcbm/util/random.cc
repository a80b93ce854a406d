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

#include "qcbm/util/random.h"

#include <algorithm>
#include <stdexcept>

namespace qcbm {

uint64_t derive_seed(uint64_t base, uint64_t stream) {
    uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

DiscreteSampler::DiscreteSampler(std::span<const double> weights) : cdf_(weights.size()) {
    if (weights.empty()) {
        throw std::invalid_argument("DiscreteSampler needs at least one weight");
    }
    double total = 0;
    for (size_t k = 0; k < weights.size(); k++) {
        if (!(weights[k] >= 0)) {
            throw std::invalid_argument("DiscreteSampler weights must be non-negative");
        }
        total += weights[k];
        cdf_[k] = total;
    }
    if (!(total > 0)) {
        throw std::invalid_argument("DiscreteSampler weights sum to zero");
    }
    for (auto &c : cdf_) {
        c /= total;
    }
    cdf_.back() = 1.0;
}

size_t DiscreteSampler::operator()(Rng &rng) const {
    double u = uniform01(rng);
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    // upper_bound never lands on a zero-weight entry since those repeat the previous cdf value.
    return std::min(static_cast<size_t>(it - cdf_.begin()), cdf_.size() - 1);
}

}  // namespace qcbm
