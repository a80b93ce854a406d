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

#include "qcbm/cli/chart.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace qcbm {

namespace {

constexpr double kWidth = 720, kHeight = 440;
constexpr double kLeft = 80, kRight = 160, kTop = 40, kBottom = 50;
constexpr const char *kColours[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2"};

std::string escape(const std::string &s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<':
                out += "&lt;";
                break;
            case '>':
                out += "&gt;";
                break;
            case '&':
                out += "&amp;";
                break;
            default:
                out += c;
        }
    }
    return out;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

}  // namespace

std::string svg_chart(const std::string &title, const std::string &y_label, const std::vector<ChartSeries> &series) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0;
    size_t epochs = 1;
    for (const auto &s : series) {
        epochs = std::max(epochs, s.median.size());
        for (const auto *v : {&s.median, &s.lower, &s.upper}) {
            for (double x : *v) {
                if (x > 0 && std::isfinite(x)) {
                    lo = std::min(lo, x);
                    hi = std::max(hi, x);
                }
            }
        }
    }
    if (!(hi > 0)) {
        lo = 1e-3;
        hi = 1;
    }
    double top_decade = std::ceil(std::log10(hi));
    double bottom_decade = std::floor(std::log10(lo));
    if (top_decade <= bottom_decade) {
        top_decade = bottom_decade + 1;
    }
    double plot_w = kWidth - kLeft - kRight, plot_h = kHeight - kTop - kBottom;
    auto x_of = [&](size_t e) { return kLeft + plot_w * (epochs > 1 ? double(e) / double(epochs - 1) : 0.0); };
    auto y_of = [&](double v) {
        double l = std::log10(std::clamp(v > 0 && std::isfinite(v) ? v : lo, lo, hi));
        return kTop + plot_h * (top_decade - l) / (top_decade - bottom_decade);
    };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << escape(title)
        << "</text>\n";
    for (double d = bottom_decade; d <= top_decade; d += 1) {
        double y = y_of(std::pow(10.0, d));
        svg << "<line x1=\"" << kLeft << "\" x2=\"" << kLeft + plot_w << "\" y1=\"" << num(y) << "\" y2=\"" << num(y)
            << "\" stroke=\"#ddd\"/>\n";
        svg << "<text x=\"" << kLeft - 6 << "\" y=\"" << num(y + 4) << "\" text-anchor=\"end\">1e" << int(d)
            << "</text>\n";
    }
    svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_w << "\" height=\"" << plot_h
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (size_t k = 0; k <= 4; k++) {
        size_t e = (epochs - 1) * k / 4;
        svg << "<text x=\"" << num(x_of(e)) << "\" y=\"" << kTop + plot_h + 18 << "\" text-anchor=\"middle\">"
            << e + 1 << "</text>\n";
    }
    svg << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 12 << "\" text-anchor=\"middle\">epoch</text>\n";
    svg << "<text transform=\"translate(18 " << kTop + plot_h / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
        << escape(y_label) << "</text>\n";

    for (size_t i = 0; i < series.size(); i++) {
        const auto &s = series[i];
        const char *colour = kColours[i % std::size(kColours)];
        if (!s.lower.empty() && s.lower.size() == s.upper.size()) {
            svg << "<polygon fill=\"" << colour << "\" fill-opacity=\"0.18\" stroke=\"none\" points=\"";
            for (size_t e = 0; e < s.upper.size(); e++) {
                svg << num(x_of(e)) << ',' << num(y_of(s.upper[e])) << ' ';
            }
            for (size_t e = s.lower.size(); e-- > 0;) {
                svg << num(x_of(e)) << ',' << num(y_of(s.lower[e])) << ' ';
            }
            svg << "\"/>\n";
        }
        svg << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.6\" points=\"";
        for (size_t e = 0; e < s.median.size(); e++) {
            svg << num(x_of(e)) << ',' << num(y_of(s.median[e])) << ' ';
        }
        svg << "\"/>\n";
        double ly = kTop + 16 + 18.0 * double(i);
        svg << "<line x1=\"" << kLeft + plot_w + 12 << "\" x2=\"" << kLeft + plot_w + 36 << "\" y1=\"" << ly
            << "\" y2=\"" << ly << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << kLeft + plot_w + 42 << "\" y=\"" << ly + 4 << "\">" << escape(s.label) << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace qcbm
