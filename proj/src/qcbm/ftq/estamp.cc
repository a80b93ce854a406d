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

#include "qcbm/ftq/estamp.h"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qcbm {

void EstAmpConfig::validate() const {
    if (queries < 2 || (queries & (queries - 1)) != 0) {
        throw std::invalid_argument("EstAmp query count must be a power of two >= 2, got " + std::to_string(queries));
    }
}

EstAmpOutcomes estamp_outcomes(double a, const EstAmpConfig &config) {
    config.validate();
    if (!(a >= 0 && a <= 1)) {
        throw std::invalid_argument("amplitude must lie in [0, 1]");
    }
    const double pi = std::numbers::pi;
    const uint64_t m = config.queries;
    const double md = static_cast<double>(m);
    const double omega_m = std::asin(std::sqrt(a)) / pi * md;  // ωM
    EstAmpOutcomes out;
    out.values.resize(m);
    out.probabilities.resize(m);
    double total = 0;
    for (uint64_t l = 0; l < m; l++) {
        double shift = omega_m - static_cast<double>(l);  // MΔ up to sign
        double w;
        if (std::abs(shift) < 1e-12) {
            w = 1;
        } else {
            double num = std::sin(pi * shift);
            double den = md * std::sin(pi * shift / md);
            w = den == 0 ? 1 : (num * num) / (den * den);
        }
        double s = std::sin(static_cast<double>(l) * pi / md);
        out.values[l] = s * s;
        out.probabilities[l] = w;
        total += w;
    }
    for (auto &w : out.probabilities) {
        w /= total;
    }
    if (config.variant == EstAmpVariant::EstAmpPrime) {
        double floor = std::sin(pi / (2 * md));
        out.values[0] = floor * floor;
    }
    return out;
}

double estamp_sample(double a, const EstAmpConfig &config, Rng &rng) {
    auto outcomes = estamp_outcomes(a, config);
    DiscreteSampler sampler(outcomes.probabilities);
    return outcomes.values[sampler(rng)];
}

double estamp_error_bound(double a, uint64_t queries) {
    const double pi = std::numbers::pi;
    double m = static_cast<double>(queries);
    return 2 * pi * std::sqrt(a * (1 - a)) / m + pi * pi / (m * m);
}

uint64_t power_of_two_at_least(double x) {
    if (!(x > 0) || !std::isfinite(x) || x > 0x1p62) {
        throw std::invalid_argument("query count target must be a positive finite number");
    }
    uint64_t m = 2;
    while (static_cast<double>(m) < x) {
        m <<= 1;
    }
    return m;
}

}  // namespace qcbm
