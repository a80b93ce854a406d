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

#ifndef QCBM_FDIV_DIVERGENCE_H
#define QCBM_FDIV_DIVERGENCE_H

#include <span>

#include "qcbm/dist/distribution.h"
#include "qcbm/fdiv/generators.h"

namespace qcbm {

/// Σ_x p(x) f*(q(x)/p(x)) for an arbitrary conjugate, with 0·f*(0/0) = 0 and the limits
/// p·f*(0) and q·lim f*(r)/r at the support boundaries. Infinite boundary terms throw SupportError.
double conjugate_expectation(std::span<const double> p, std::span<const double> q, ScalarFn conjugate,
                             double conjugate_at_zero, double slope_at_infinity);

/// Standardised divergence through the conjugate: E_p[f*(q/p)].
double exact_divergence_conjugate(const GeneratorSpec &gen, std::span<const double> p, std::span<const double> q);
double exact_divergence_conjugate(const GeneratorSpec &gen, const DiscreteDistribution &p,
                                  const DiscreteDistribution &q);

/// Standardised divergence through the direct textbook formula (definition * definition_scale).
double exact_divergence_definition(const GeneratorSpec &gen, std::span<const double> p, std::span<const double> q);
double exact_divergence_definition(const GeneratorSpec &gen, const DiscreteDistribution &p,
                                   const DiscreteDistribution &q);

/// Textbook formula without the standardising factor, e.g. JS = KL(p||m) + KL(q||m).
double definition_value(const GeneratorSpec &gen, const DiscreteDistribution &p, const DiscreteDistribution &q);

/// f*'(r) after clamping r into the policy range. Total variation yields sgn(r - 1)/2 with sgn(0) = 0.
/// Throws std::invalid_argument for r <= 0 or NaN.
double conjugate_derivative(const GeneratorSpec &gen, double r, const RatioClampPolicy &clamp = {});

/// True iff D(p, q) and D(q, p) agree within 1e-10 (relative to max(1, |D|)); two infinite values agree.
bool symmetry_check(const GeneratorSpec &gen, const DiscreteDistribution &p, const DiscreteDistribution &q);

/// Convenience metrics used for training records.
double total_variation(const DiscreteDistribution &p, const DiscreteDistribution &q);
/// KL(p || q); +inf when q misses part of p's support.
double kl_forward(const DiscreteDistribution &p, const DiscreteDistribution &q);
/// KL(q || p); +inf when p misses part of q's support.
double kl_reverse(const DiscreteDistribution &p, const DiscreteDistribution &q);

}  // namespace qcbm

#endif
