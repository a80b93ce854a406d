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

#ifndef QCBM_SIM_STATEVECTOR_H
#define QCBM_SIM_STATEVECTOR_H

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "qcbm/dist/distribution.h"
#include "qcbm/sim/ansatz.h"
#include "qcbm/util/random.h"

namespace qcbm {

/// Dense amplitude vector over 2^n basis states (qubit 0 is the most significant index bit).
class StateVector {
   public:
    /// |0...0>.
    explicit StateVector(size_t num_qubits);
    StateVector(size_t num_qubits, std::vector<std::complex<double>> amplitudes);

    size_t num_qubits() const {
        return num_qubits_;
    }
    std::span<const std::complex<double>> amplitudes() const {
        return amplitudes_;
    }
    double norm_squared() const;

    void apply_hadamard(size_t qubit);
    void apply_rz(size_t qubit, double theta);
    void apply_rx(size_t qubit, double theta);
    void apply_cz(size_t a, size_t b);

   private:
    uint64_t mask(size_t qubit) const {
        return uint64_t{1} << (num_qubits_ - 1 - qubit);
    }
    void apply_single(size_t qubit, std::complex<double> m00, std::complex<double> m01, std::complex<double> m10,
                      std::complex<double> m11);

    size_t num_qubits_;
    std::vector<std::complex<double>> amplitudes_;
};

/// U(θ)|0...0> for the given ansatz. Throws std::invalid_argument on a length mismatch.
StateVector simulate(const AnsatzSpec &ansatz, std::span<const double> theta);

/// Number of `simulate` calls made on the current thread. Instrumentation for sample-reuse checks.
uint64_t simulation_count();

/// q(x) = |<x|Ψ>|^2.
DiscreteDistribution born_distribution(const StateVector &state);

/// Convenience: born_distribution(simulate(ansatz, theta)).
DiscreteDistribution model_distribution(const AnsatzSpec &ansatz, std::span<const double> theta);

/// θ ± (π/4) e_i. `sign` must be +1 or -1.
ParameterVector shifted_parameters(std::span<const double> theta, size_t index, int sign);

/// q_{θ_i+}(x) - q_{θ_i-}(x) for every outcome x; equals ∂q/∂θ_i for this gate set.
std::vector<double> probability_gradient(const AnsatzSpec &ansatz, std::span<const double> theta, size_t index);

/// `count` i.i.d. outcome indices drawn from `dist`.
std::vector<uint64_t> sample(const DiscreteDistribution &dist, size_t count, Rng &rng);

}  // namespace qcbm

#endif
