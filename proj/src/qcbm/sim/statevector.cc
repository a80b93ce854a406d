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

#include "qcbm/sim/statevector.h"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qcbm {

namespace {

thread_local uint64_t simulate_calls = 0;

}  // namespace

StateVector::StateVector(size_t num_qubits) : num_qubits_(num_qubits), amplitudes_(size_t{1} << num_qubits) {
    amplitudes_[0] = 1.0;
}

StateVector::StateVector(size_t num_qubits, std::vector<std::complex<double>> amplitudes)
    : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() != (size_t{1} << num_qubits)) {
        throw std::invalid_argument("amplitude count must be 2^num_qubits");
    }
}

double StateVector::norm_squared() const {
    double total = 0;
    for (const auto &a : amplitudes_) {
        total += std::norm(a);
    }
    return total;
}

void StateVector::apply_single(size_t qubit, std::complex<double> m00, std::complex<double> m01,
                               std::complex<double> m10, std::complex<double> m11) {
    uint64_t m = mask(qubit);
    for (uint64_t x = 0; x < amplitudes_.size(); x++) {
        if (x & m) {
            continue;
        }
        auto a0 = amplitudes_[x];
        auto a1 = amplitudes_[x | m];
        amplitudes_[x] = m00 * a0 + m01 * a1;
        amplitudes_[x | m] = m10 * a0 + m11 * a1;
    }
}

void StateVector::apply_hadamard(size_t qubit) {
    double s = std::numbers::sqrt2 / 2;
    apply_single(qubit, s, s, s, -s);
}

void StateVector::apply_rz(size_t qubit, double theta) {
    // exp(-iθZ) = diag(e^{-iθ}, e^{iθ})
    auto phase = std::polar(1.0, theta);
    uint64_t m = mask(qubit);
    for (uint64_t x = 0; x < amplitudes_.size(); x++) {
        amplitudes_[x] *= (x & m) ? phase : std::conj(phase);
    }
}

void StateVector::apply_rx(size_t qubit, double theta) {
    // exp(-iθX) = cos θ I - i sin θ X
    std::complex<double> c = std::cos(theta);
    std::complex<double> s(0, -std::sin(theta));
    apply_single(qubit, c, s, s, c);
}

void StateVector::apply_cz(size_t a, size_t b) {
    uint64_t m = mask(a) | mask(b);
    for (uint64_t x = 0; x < amplitudes_.size(); x++) {
        if ((x & m) == m) {
            amplitudes_[x] = -amplitudes_[x];
        }
    }
}

StateVector simulate(const AnsatzSpec &ansatz, std::span<const double> theta) {
    if (theta.size() != ansatz.num_parameters()) {
        throw std::invalid_argument(
            "parameter vector has length " + std::to_string(theta.size()) + ", ansatz expects " +
            std::to_string(ansatz.num_parameters()));
    }
    simulate_calls++;
    size_t n = ansatz.num_qubits;
    StateVector state(n);
    for (size_t q = 0; q < n; q++) {
        state.apply_hadamard(q);
    }
    for (size_t layer = 0; layer <= ansatz.depth; layer++) {
        for (size_t q = 0; q < n; q++) {
            state.apply_rz(q, theta[ansatz.rz_index(layer, q)]);
            state.apply_rx(q, theta[ansatz.rx_index(layer, q)]);
        }
        if (layer < ansatz.depth) {
            for (size_t q = 0; q + 1 < n; q++) {
                state.apply_cz(q, q + 1);
            }
        }
    }
    return state;
}

uint64_t simulation_count() {
    return simulate_calls;
}

DiscreteDistribution born_distribution(const StateVector &state) {
    std::vector<double> probs;
    probs.reserve(state.amplitudes().size());
    for (const auto &a : state.amplitudes()) {
        probs.push_back(std::norm(a));
    }
    return DiscreteDistribution::from_probabilities(std::move(probs), 1e-10);
}

DiscreteDistribution model_distribution(const AnsatzSpec &ansatz, std::span<const double> theta) {
    return born_distribution(simulate(ansatz, theta));
}

ParameterVector shifted_parameters(std::span<const double> theta, size_t index, int sign) {
    if (index >= theta.size()) {
        throw std::out_of_range("parameter index " + std::to_string(index) + " out of range");
    }
    if (sign != 1 && sign != -1) {
        throw std::invalid_argument("shift sign must be +1 or -1");
    }
    ParameterVector out(theta.begin(), theta.end());
    out[index] += sign * std::numbers::pi / 4;
    return out;
}

std::vector<double> probability_gradient(const AnsatzSpec &ansatz, std::span<const double> theta, size_t index) {
    auto plus = model_distribution(ansatz, shifted_parameters(theta, index, +1));
    auto minus = model_distribution(ansatz, shifted_parameters(theta, index, -1));
    std::vector<double> out(plus.size());
    for (size_t x = 0; x < out.size(); x++) {
        out[x] = plus[x] - minus[x];
    }
    return out;
}

std::vector<uint64_t> sample(const DiscreteDistribution &dist, size_t count, Rng &rng) {
    if (count == 0) {
        throw std::invalid_argument("sample count must be positive");
    }
    DiscreteSampler sampler(dist.probabilities());
    std::vector<uint64_t> out(count);
    for (auto &s : out) {
        s = sampler(rng);
    }
    return out;
}

}  // namespace qcbm
