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

#ifndef QCBM_TRAIN_BOOTSTRAP_H
#define QCBM_TRAIN_BOOTSTRAP_H

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace qcbm {

struct BootstrapSummary {
    std::vector<double> median;
    std::vector<double> p5;
    std::vector<double> p95;
    size_t resamples = 0;
};

/// `series[r][e]` is the value of run r at epoch e; every run must have the same length and there
/// must be at least two runs. Each resample draws as many runs as there are, with replacement, and
/// takes their median; the summary reports the median and 5th/95th percentiles of those medians
/// per epoch. The result does not depend on the order of the runs.
BootstrapSummary bootstrap_summary(std::span<const std::vector<double>> series, size_t resamples = 10000,
                                   uint64_t seed = 0);

/// Linear-interpolation percentile (q in [0, 1]) of already sorted values.
double sorted_percentile(std::span<const double> sorted, double q);

}  // namespace qcbm

#endif
