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

#include "qcbm/train/bootstrap.h"

#include <algorithm>
#include <stdexcept>

#include "qcbm/util/random.h"

namespace qcbm {

double sorted_percentile(std::span<const double> sorted, double q) {
    if (sorted.empty()) {
        throw std::invalid_argument("percentile of an empty set");
    }
    double pos = q * static_cast<double>(sorted.size() - 1);
    size_t lo = static_cast<size_t>(pos);
    if (lo + 1 >= sorted.size()) {
        return sorted.back();
    }
    double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

BootstrapSummary bootstrap_summary(std::span<const std::vector<double>> series, size_t resamples, uint64_t seed) {
    size_t runs = series.size();
    if (runs < 2) {
        throw std::invalid_argument("bootstrap needs at least two runs");
    }
    if (resamples == 0) {
        throw std::invalid_argument("bootstrap needs at least one resample");
    }
    size_t epochs = series[0].size();
    for (const auto &s : series) {
        if (s.size() != epochs) {
            throw std::invalid_argument("bootstrap runs have different lengths");
        }
    }

    // A resample's median only depends on which ranks it drew, so the ranks are drawn once and
    // applied to the sorted values of every epoch.
    Rng rng(seed);
    std::vector<std::pair<size_t, size_t>> median_ranks(resamples);
    std::vector<size_t> draw(runs);
    for (auto &ranks : median_ranks) {
        for (auto &d : draw) {
            d = uniform_index(rng, runs);
        }
        std::sort(draw.begin(), draw.end());
        ranks = {draw[(runs - 1) / 2], draw[runs / 2]};
    }

    BootstrapSummary out;
    out.resamples = resamples;
    std::vector<double> column(runs), medians(resamples);
    for (size_t e = 0; e < epochs; e++) {
        for (size_t r = 0; r < runs; r++) {
            column[r] = series[r][e];
        }
        std::sort(column.begin(), column.end());
        for (size_t b = 0; b < resamples; b++) {
            auto [lo, hi] = median_ranks[b];
            medians[b] = lo == hi ? column[lo] : (column[lo] + column[hi]) / 2;
        }
        std::sort(medians.begin(), medians.end());
        out.median.push_back(sorted_percentile(medians, 0.5));
        out.p5.push_back(sorted_percentile(medians, 0.05));
        out.p95.push_back(sorted_percentile(medians, 0.95));
    }
    return out;
}

}  // namespace qcbm
