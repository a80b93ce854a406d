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

#include "qcbm/fdiv/divergence.h"

#include <cmath>
#include <limits>
#include <string>

namespace qcbm {

namespace {

void check_sizes(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) {
        throw std::invalid_argument("distributions have different outcome counts");
    }
}

}  // namespace

double conjugate_expectation(std::span<const double> p, std::span<const double> q, ScalarFn conjugate,
                             double conjugate_at_zero, double slope_at_infinity) {
    check_sizes(p, q);
    double total = 0;
    for (size_t x = 0; x < p.size(); x++) {
        if (p[x] > 0) {
            if (q[x] > 0) {
                total += p[x] * conjugate(q[x] / p[x]);
            } else if (std::isinf(conjugate_at_zero)) {
                throw SupportError("divergence is infinite: q vanishes on an outcome where p does not");
            } else {
                total += p[x] * conjugate_at_zero;
            }
        } else if (q[x] > 0) {
            if (std::isinf(slope_at_infinity)) {
                throw SupportError("divergence is infinite: p vanishes on an outcome where q does not");
            }
            total += q[x] * slope_at_infinity;
        }
    }
    return total;
}

double exact_divergence_conjugate(const GeneratorSpec &gen, std::span<const double> p, std::span<const double> q) {
    return conjugate_expectation(p, q, gen.conjugate, gen.conjugate_at_zero, gen.slope_at_infinity);
}

double exact_divergence_conjugate(const GeneratorSpec &gen, const DiscreteDistribution &p,
                                  const DiscreteDistribution &q) {
    return exact_divergence_conjugate(gen, p.probabilities(), q.probabilities());
}

double exact_divergence_definition(const GeneratorSpec &gen, std::span<const double> p, std::span<const double> q) {
    check_sizes(p, q);
    return gen.definition_scale * gen.definition(p, q);
}

double exact_divergence_definition(const GeneratorSpec &gen, const DiscreteDistribution &p,
                                   const DiscreteDistribution &q) {
    return exact_divergence_definition(gen, p.probabilities(), q.probabilities());
}

double definition_value(const GeneratorSpec &gen, const DiscreteDistribution &p, const DiscreteDistribution &q) {
    check_sizes(p.probabilities(), q.probabilities());
    return gen.definition(p.probabilities(), q.probabilities());
}

double conjugate_derivative(const GeneratorSpec &gen, double r, const RatioClampPolicy &clamp) {
    if (!(r > 0)) {
        throw std::invalid_argument("ratio must be positive, got " + std::to_string(r));
    }
    return gen.conjugate_derivative(clamp.clamp(r));
}

bool symmetry_check(const GeneratorSpec &gen, const DiscreteDistribution &p, const DiscreteDistribution &q) {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    auto eval = [&](const DiscreteDistribution &a, const DiscreteDistribution &b) {
        try {
            return exact_divergence_conjugate(gen, a, b);
        } catch (const SupportError &) {
            return kInf;
        }
    };
    double forward = eval(p, q);
    double backward = eval(q, p);
    if (std::isinf(forward) || std::isinf(backward)) {
        return forward == backward;
    }
    return std::abs(forward - backward) <= 1e-10 * std::max(1.0, std::abs(forward));
}

double total_variation(const DiscreteDistribution &p, const DiscreteDistribution &q) {
    return exact_divergence_definition(generator_spec(Generator::TotalVariation), p, q);
}

double kl_forward(const DiscreteDistribution &p, const DiscreteDistribution &q) {
    try {
        return definition_value(generator_spec(Generator::KlForward), p, q);
    } catch (const SupportError &) {
        return std::numeric_limits<double>::infinity();
    }
}

double kl_reverse(const DiscreteDistribution &p, const DiscreteDistribution &q) {
    try {
        return definition_value(generator_spec(Generator::KlReverse), p, q);
    } catch (const SupportError &) {
        return std::numeric_limits<double>::infinity();
    }
}

}  // namespace qcbm
