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

#ifndef QCBM_FDIV_GENERATORS_H
#define QCBM_FDIV_GENERATORS_H

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "qcbm/dist/distribution.h"

namespace qcbm {

/// The f-divergences available for training and evaluation, in registry order.
///
/// Registry order doubles as the tie-break order for per-direction divergence switching.
enum class Generator : uint8_t {
    TotalVariation,
    SquaredHellinger,
    KlForward,       // KL(p || q), type I
    KlReverse,       // KL(q || p), type I
    Kl2Forward,      // KL(p || (p+q)/2), type II
    Kl2Reverse,      // KL(q || (p+q)/2), type II
    PearsonForward,  // chi^2(p || q)
    PearsonReverse,  // chi^2(q || p)
    Jeffrey,
    JensenShannon,
    PearsonSymmetric,
};

inline constexpr size_t kNumGenerators = 11;

using ScalarFn = double (*)(double);
using DefinitionFn = double (*)(std::span<const double> p, std::span<const double> q);

/// One divergence D_f(p || q) = E_p[f*(q/p)], with the ratio convention r = q/p.
///
/// `conjugate` and `conjugate_derivative` are only evaluated at r > 0; the boundary behaviour is
/// carried by `conjugate_at_zero` (f*(0+), used where q(x) = 0 < p(x)) and `slope_at_infinity`
/// (lim f*(r)/r, used where p(x) = 0 < q(x)). Either may be +inf.
///
/// `definition` evaluates the textbook formula directly on the tables; multiplying it by
/// `definition_scale` gives the standardised value (f*'(1) = 0, f*''(1) = 1) that the conjugate
/// path computes. Total variation is not standardisable and has scale 1.
struct GeneratorSpec {
    Generator id;
    std::string_view name;
    std::string_view description;
    ScalarFn conjugate;
    ScalarFn conjugate_derivative;
    double conjugate_at_zero;
    double slope_at_infinity;
    DefinitionFn definition;
    double definition_scale;
    bool symmetric;
    bool standardised;
};

std::span<const GeneratorSpec> generator_registry();
const GeneratorSpec &generator_spec(Generator id);
std::string_view generator_name(Generator id);

/// Accepts the lowercase CLI identifiers (`tv`, `kl_i_rev`, ...).
std::optional<Generator> parse_generator(std::string_view name);

/// Raised when a divergence is infinite because one support does not cover the other.
class SupportError : public std::domain_error {
   public:
    using std::domain_error::domain_error;
};

/// Bounds applied to estimated ratios before f*' is evaluated.
struct RatioClampPolicy {
    double r_min = 1e-8;
    double r_max = 1e8;

    /// Throws std::invalid_argument unless 0 < r_min < 1 < r_max.
    void validate() const;
    double clamp(double r) const;
};

}  // namespace qcbm

#endif
