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

#include "qcbm/sim/ansatz.h"

#include <stdexcept>

namespace qcbm {

AnsatzSpec build_ansatz(size_t num_qubits, size_t depth) {
    if (num_qubits == 0) {
        throw std::invalid_argument("ansatz needs at least one qubit");
    }
    if (num_qubits > 24) {
        throw std::invalid_argument("dense statevector simulation is limited to 24 qubits");
    }
    return AnsatzSpec{num_qubits, depth};
}

}  // namespace qcbm
