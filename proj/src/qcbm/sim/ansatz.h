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

#ifndef QCBM_SIM_ANSATZ_H
#define QCBM_SIM_ANSATZ_H

#include <cstddef>
#include <vector>

namespace qcbm {

/// Layered hardware-efficient circuit used for the Born machine.
///
/// Layout: a Hadamard on every qubit, then `depth` repetitions of
/// {Rz(θ) Rx(θ) on every qubit; CZ on (0,1), (1,2), ..., (n-2, n-1)},
/// then a final Rz Rx layer. Rotations are full-angle: Rz(θ) = exp(-iθZ), Rx(θ) = exp(-iθX),
/// so every generator has eigenvalues ±1 and a π/4 shift gives exact derivatives.
///
/// Parameter index of the Rz on `qubit` in rotation layer `layer` (0..depth) is
/// layer * 2n + 2 * qubit; the matching Rx follows it.
struct AnsatzSpec {
    size_t num_qubits = 1;
    size_t depth = 0;

    size_t num_parameters() const {
        return num_qubits * (2 * depth + 2);
    }
    size_t rz_index(size_t layer, size_t qubit) const {
        return layer * 2 * num_qubits + 2 * qubit;
    }
    size_t rx_index(size_t layer, size_t qubit) const {
        return rz_index(layer, qubit) + 1;
    }

    bool operator==(const AnsatzSpec &) const = default;
};

using ParameterVector = std::vector<double>;

/// Throws std::invalid_argument when num_qubits is zero or exceeds 24.
AnsatzSpec build_ansatz(size_t num_qubits, size_t depth);

}  // namespace qcbm

#endif
