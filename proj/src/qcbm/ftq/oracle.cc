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

#include "qcbm/ftq/oracle.h"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace qcbm {

QueryLedger &QueryLedger::operator+=(const QueryLedger &other) {
    queries_to_p += other.queries_to_p;
    queries_to_q += other.queries_to_q;
    executions_of_a += other.executions_of_a;
    return *this;
}

nlohmann::json to_json(const QueryLedger &ledger) {
    return {{"queries_to_p", ledger.queries_to_p},
            {"queries_to_q", ledger.queries_to_q},
            {"executions_of_a", ledger.executions_of_a}};
}

OracleDistribution::OracleDistribution(std::vector<double> probabilities, OracleRole role)
    : probabilities_(std::move(probabilities)), role_(role) {
    if (probabilities_.empty()) {
        throw std::invalid_argument("oracle distribution needs at least one outcome");
    }
    double total = 0;
    for (double v : probabilities_) {
        if (!(v >= 0)) {
            throw std::invalid_argument("oracle probabilities must be non-negative");
        }
        total += v;
    }
    if (std::abs(total - 1) > 1e-10) {
        throw std::invalid_argument("oracle probabilities sum to " + std::to_string(total));
    }
}

void OracleDistribution::charge(QueryLedger &ledger, uint64_t queries) const {
    (role_ == OracleRole::P ? ledger.queries_to_p : ledger.queries_to_q) += queries;
}

double OracleDistribution::estimate(size_t i, const EstAmpConfig &config, QueryLedger &ledger, Rng &rng) const {
    double v = estamp_sample(probabilities_.at(i), config, rng);
    charge(ledger, config.queries);
    return v;
}

double max_ratio(const std::vector<double> &num, const std::vector<double> &den) {
    double best = 0;
    for (size_t i = 0; i < num.size(); i++) {
        if (num[i] == 0) {
            continue;
        }
        if (den[i] == 0) {
            return std::numeric_limits<double>::infinity();
        }
        best = std::max(best, num[i] / den[i]);
    }
    return best;
}

BoundedRatioPair::BoundedRatioPair(std::vector<double> p, std::vector<double> q, double g, RatioBound bound)
    : p_(std::move(p), OracleRole::P), q_(std::move(q), OracleRole::Q), g_(g), bound_(bound) {
    if (p_.size() != q_.size()) {
        throw std::invalid_argument("oracle distributions have different sizes");
    }
    if (!(g >= 1) || !std::isfinite(g)) {
        throw std::invalid_argument("ratio bound g must be finite and at least 1");
    }
    double actual = bound == RatioBound::QOverP ? max_ratio(q_.probabilities(), p_.probabilities())
                                                : max_ratio(p_.probabilities(), q_.probabilities());
    if (actual > g * (1 + 1e-12)) {
        throw std::invalid_argument("ratio bound violated: max ratio " + std::to_string(actual) + " exceeds g = " +
                                    std::to_string(g));
    }
}

BoundedRatioPair BoundedRatioPair::with_exact_bound(std::vector<double> p, std::vector<double> q, RatioBound bound) {
    double g = bound == RatioBound::QOverP ? max_ratio(q, p) : max_ratio(p, q);
    if (!std::isfinite(g)) {
        throw std::invalid_argument("ratio is unbounded: a denominator entry is zero");
    }
    return BoundedRatioPair(std::move(p), std::move(q), std::max(g, 1.0), bound);
}

}  // namespace qcbm
