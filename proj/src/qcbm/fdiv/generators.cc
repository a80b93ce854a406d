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

#include "qcbm/fdiv/generators.h"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace qcbm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLn2 = std::numbers::ln2;

// Σ a log(a / b) over a > 0.
double kl_sum(std::span<const double> a, std::span<const double> b) {
    double total = 0;
    for (size_t x = 0; x < a.size(); x++) {
        if (a[x] <= 0) {
            continue;
        }
        if (b[x] <= 0) {
            throw SupportError("KL divergence is infinite: second argument has zero mass where the first does not");
        }
        total += a[x] * std::log(a[x] / b[x]);
    }
    return total;
}

// Σ a log(2a / (a + b)) over a > 0.
double kl_to_midpoint_sum(std::span<const double> a, std::span<const double> b) {
    double total = 0;
    for (size_t x = 0; x < a.size(); x++) {
        if (a[x] > 0) {
            total += a[x] * std::log(2 * a[x] / (a[x] + b[x]));
        }
    }
    return total;
}

// Σ (a - b)^2 / a, with 0/0 terms dropped.
double chi2_sum(std::span<const double> a, std::span<const double> b) {
    double total = 0;
    for (size_t x = 0; x < a.size(); x++) {
        double d = a[x] - b[x];
        if (a[x] > 0) {
            total += d * d / a[x];
        } else if (b[x] > 0) {
            throw SupportError("Pearson divergence is infinite: zero-mass denominator with non-zero numerator");
        }
    }
    return total;
}

double def_tv(std::span<const double> p, std::span<const double> q) {
    double total = 0;
    for (size_t x = 0; x < p.size(); x++) {
        total += std::abs(p[x] - q[x]);
    }
    return total / 2;
}

double def_h2(std::span<const double> p, std::span<const double> q) {
    double total = 0;
    for (size_t x = 0; x < p.size(); x++) {
        double d = std::sqrt(p[x]) - std::sqrt(q[x]);
        total += d * d;
    }
    return total;
}

double def_kl_fwd(std::span<const double> p, std::span<const double> q) {
    return kl_sum(p, q);
}
double def_kl_rev(std::span<const double> p, std::span<const double> q) {
    return kl_sum(q, p);
}
double def_kl2_fwd(std::span<const double> p, std::span<const double> q) {
    return kl_to_midpoint_sum(p, q);
}
double def_kl2_rev(std::span<const double> p, std::span<const double> q) {
    return kl_to_midpoint_sum(q, p);
}
double def_pearson_fwd(std::span<const double> p, std::span<const double> q) {
    return chi2_sum(p, q);
}
double def_pearson_rev(std::span<const double> p, std::span<const double> q) {
    return chi2_sum(q, p);
}
double def_jeffrey(std::span<const double> p, std::span<const double> q) {
    return kl_sum(p, q) + kl_sum(q, p);
}
double def_js(std::span<const double> p, std::span<const double> q) {
    return kl_to_midpoint_sum(p, q) + kl_to_midpoint_sum(q, p);
}
double def_pearson_sym(std::span<const double> p, std::span<const double> q) {
    return chi2_sum(p, q) + chi2_sum(q, p);
}

double sgn(double v) {
    return static_cast<double>((v > 0) - (v < 0));
}

double xlogx_term(double r) {
    return r * std::log(r);
}

const std::array<GeneratorSpec, kNumGenerators> kRegistry = {{
    {Generator::TotalVariation, "tv", "total variation TV(p, q)",
     [](double r) { return std::abs(r - 1) / 2; },
     [](double r) { return sgn(r - 1) / 2; },
     0.5, 0.5, def_tv, 1.0, true, false},
    {Generator::SquaredHellinger, "h2", "squared Hellinger H^2(p, q)",
     [](double r) { return 2 * (std::sqrt(r) - 1) * (std::sqrt(r) - 1); },
     [](double r) { return 2 - 2 / std::sqrt(r); },
     2.0, 2.0, def_h2, 2.0, true, true},
    {Generator::KlForward, "kl_i_fwd", "Kullback-Leibler type I, forward KL(p || q)",
     [](double r) { return -std::log(r) + r - 1; },
     [](double r) { return 1 - 1 / r; },
     kInf, 1.0, def_kl_fwd, 1.0, false, true},
    {Generator::KlReverse, "kl_i_rev", "Kullback-Leibler type I, reverse KL(q || p)",
     [](double r) { return xlogx_term(r) - r + 1; },
     [](double r) { return std::log(r); },
     1.0, kInf, def_kl_rev, 1.0, false, true},
    {Generator::Kl2Forward, "kl_ii_fwd", "Kullback-Leibler type II, forward KL(p || (p+q)/2)",
     [](double r) { return 4 * std::log(2 / (r + 1)) + 2 * (r - 1); },
     [](double r) { return 2 - 4 / (r + 1); },
     4 * kLn2 - 2, 2.0, def_kl2_fwd, 4.0, false, true},
    {Generator::Kl2Reverse, "kl_ii_rev", "Kullback-Leibler type II, reverse KL(q || (p+q)/2)",
     [](double r) { return 4 * r * std::log(2 * r / (r + 1)) + 2 * (1 - r); },
     [](double r) { return 4 * std::log(2 * r / (r + 1)) + 4 / (r + 1) - 2; },
     2.0, 4 * kLn2 - 2, def_kl2_rev, 4.0, false, true},
    {Generator::PearsonForward, "pearson_fwd", "Pearson chi^2(p || q)",
     [](double r) { return (r - 1) * (r - 1) / 2; },
     [](double r) { return r - 1; },
     0.5, kInf, def_pearson_fwd, 0.5, false, true},
    {Generator::PearsonReverse, "pearson_rev", "Pearson chi^2(q || p)",
     [](double r) { return (r - 1) * (r - 1) / (2 * r); },
     [](double r) { return (1 - 1 / (r * r)) / 2; },
     kInf, 0.5, def_pearson_rev, 0.5, false, true},
    {Generator::Jeffrey, "jeffrey", "symmetric KL type I (Jeffrey) J(p, q)",
     [](double r) { return (r - 1) * std::log(r) / 2; },
     [](double r) { return (std::log(r) + 1 - 1 / r) / 2; },
     kInf, kInf, def_jeffrey, 0.5, true, true},
    {Generator::JensenShannon, "js", "symmetric KL type II (Jensen-Shannon) JS(p, q)",
     [](double r) { return 2 * std::log(2 / (r + 1)) + 2 * r * std::log(2 * r / (r + 1)); },
     [](double r) { return 2 * std::log(2 * r / (r + 1)); },
     2 * kLn2, 2 * kLn2, def_js, 2.0, true, true},
    {Generator::PearsonSymmetric, "pearson_sym", "symmetric Pearson chi^2(p, q)",
     [](double r) { return (r - 1) * (r - 1) * (1 + 1 / r) / 4; },
     [](double r) { return (r - 1) / 2 + (1 - 1 / (r * r)) / 4; },
     kInf, kInf, def_pearson_sym, 0.25, true, true},
}};

}  // namespace

std::span<const GeneratorSpec> generator_registry() {
    return kRegistry;
}

const GeneratorSpec &generator_spec(Generator id) {
    return kRegistry[static_cast<size_t>(id)];
}

std::string_view generator_name(Generator id) {
    return generator_spec(id).name;
}

std::optional<Generator> parse_generator(std::string_view name) {
    for (const auto &spec : kRegistry) {
        if (spec.name == name) {
            return spec.id;
        }
    }
    return std::nullopt;
}

void RatioClampPolicy::validate() const {
    if (!(r_min > 0 && r_min < 1 && r_max > 1 && std::isfinite(r_max))) {
        throw std::invalid_argument("ratio clamp needs 0 < r_min < 1 < r_max < inf");
    }
}

double RatioClampPolicy::clamp(double r) const {
    if (std::isnan(r)) {
        throw std::invalid_argument("ratio is NaN");
    }
    return std::min(std::max(r, r_min), r_max);
}

}  // namespace qcbm
