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

#ifndef QCBM_UTIL_RANDOM_H
#define QCBM_UTIL_RANDOM_H

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace qcbm {

/// The single random engine type used throughout. Every run owns its own instance.
using Rng = std::mt19937_64;

/// Uniform double in [0, 1) built from the top 53 bits of one engine draw.
///
/// Avoids std::uniform_real_distribution so streams are identical across standard libraries.
inline double uniform01(Rng &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, bound). Bias is below 2^-40 for the bounds used here.
inline uint64_t uniform_index(Rng &rng, uint64_t bound) {
    return static_cast<uint64_t>(uniform01(rng) * static_cast<double>(bound));
}

/// splitmix64 finaliser; maps (base, stream) to a decorrelated child seed.
uint64_t derive_seed(uint64_t base, uint64_t stream);

/// Inverse-CDF sampler over a fixed table of non-negative weights.
class DiscreteSampler {
   public:
    DiscreteSampler() = default;
    explicit DiscreteSampler(std::span<const double> weights);

    size_t operator()(Rng &rng) const;
    size_t size() const {
        return cdf_.size();
    }

   private:
    std::vector<double> cdf_;
};

}  // namespace qcbm

#endif
