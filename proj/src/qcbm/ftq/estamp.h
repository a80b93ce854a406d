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

#ifndef QCBM_FTQ_ESTAMP_H
#define QCBM_FTQ_ESTAMP_H

#include <cstdint>
#include <vector>

#include "qcbm/util/random.h"

namespace qcbm {

enum class EstAmpVariant : uint8_t {
    EstAmp,
    /// Replaces an output of 0 by sin^2(π / 2M).
    EstAmpPrime,
};

struct EstAmpConfig {
    /// Number of oracle queries; a power of two, at least 2.
    uint64_t queries = 2;
    EstAmpVariant variant = EstAmpVariant::EstAmpPrime;

    void validate() const;
};

/// The full output law of amplitude estimation for one amplitude: output sin^2(lπ/M) for
/// l = 0..M-1 with weight sin^2(MΔπ) / (M^2 sin^2(Δπ)), Δ = |ω - l/M|, ω = asin(√a)/π, and weight 1
/// when Δ = 0. Weights are renormalised to sum to 1.
struct EstAmpOutcomes {
    std::vector<double> values;
    std::vector<double> probabilities;
};

/// Throws std::invalid_argument if a is outside [0, 1] or the config is invalid.
EstAmpOutcomes estamp_outcomes(double a, const EstAmpConfig &config);

/// One draw from `estamp_outcomes`.
double estamp_sample(double a, const EstAmpConfig &config, Rng &rng);

/// 2π√(a(1-a))/M + π^2/M^2, the error promised with probability at least 8/π^2.
double estamp_error_bound(double a, uint64_t queries);

/// Smallest power of two that is at least `x` (and at least 2).
uint64_t power_of_two_at_least(double x);

}  // namespace qcbm

#endif
