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

#ifndef QCBM_CLI_CHART_H
#define QCBM_CLI_CHART_H

#include <string>
#include <vector>

namespace qcbm {

struct ChartSeries {
    std::string label;
    std::vector<double> median;
    std::vector<double> lower;
    std::vector<double> upper;
};

/// Static SVG line chart of each series' median over epochs with a shaded lower/upper band.
/// The y axis is log-scaled; non-positive values are drawn at the smallest positive value present.
std::string svg_chart(const std::string &title, const std::string &y_label, const std::vector<ChartSeries> &series);

}  // namespace qcbm

#endif
