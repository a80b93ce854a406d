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

#ifndef QCBM_FTQ_ORACLE_H
#define QCBM_FTQ_ORACLE_H

#include <cstdint>
#include <vector>

#include "json.hpp"
#include "qcbm/ftq/estamp.h"
#include "qcbm/util/random.h"

namespace qcbm {

/// Symbolic quantum-query accounting. Counters only ever grow.
struct QueryLedger {
    uint64_t queries_to_p = 0;
    uint64_t queries_to_q = 0;
    uint64_t executions_of_a = 0;

    QueryLedger &operator+=(const QueryLedger &other);
    bool operator==(const QueryLedger &) const = default;
};

nlohmann::json to_json(const QueryLedger &ledger);

enum class OracleRole : uint8_t { P, Q };

/// A distribution over [n] reachable only through amplitude-estimation probes. Every probe is
/// charged to the ledger under this oracle's role.
class OracleDistribution {
   public:
    /// Validates non-negative entries summing to 1 within 1e-10.
    OracleDistribution(std::vector<double> probabilities, OracleRole role);

    size_t size() const {
        return probabilities_.size();
    }
    OracleRole role() const {
        return role_;
    }
    /// Exact value; for reference computations only, never charged.
    double operator[](size_t i) const {
        return probabilities_[i];
    }
    const std::vector<double> &probabilities() const {
        return probabilities_;
    }

    /// Amplitude-estimation probe of entry i with `config.queries` queries, charged to `ledger`.
    double estimate(size_t i, const EstAmpConfig &config, QueryLedger &ledger, Rng &rng) const;

    void charge(QueryLedger &ledger, uint64_t queries) const;

   private:
    std::vector<double> probabilities_;
    OracleRole role_;
};

/// Which ratio the bound g constrains.
enum class RatioBound : uint8_t {
    /// q_i / p_i <= g for every i.
    QOverP,
    /// p_i / q_i <= g for every i.
    POverQ,
};

/// Two oracles with a verified ratio bound.
class BoundedRatioPair {
   public:
    /// Throws std::invalid_argument if sizes differ, g < 1, or some ratio exceeds g (relative slack 1e-12).
    BoundedRatioPair(std::vector<double> p, std::vector<double> q, double g, RatioBound bound = RatioBound::QOverP);
    /// Uses the tightest bound, max_i of the constrained ratio.
    static BoundedRatioPair with_exact_bound(std::vector<double> p, std::vector<double> q,
                                             RatioBound bound = RatioBound::QOverP);

    const OracleDistribution &p() const {
        return p_;
    }
    const OracleDistribution &q() const {
        return q_;
    }
    double g() const {
        return g_;
    }
    RatioBound bound() const {
        return bound_;
    }
    size_t size() const {
        return p_.size();
    }

   private:
    OracleDistribution p_;
    OracleDistribution q_;
    double g_;
    RatioBound bound_;
};

/// max_i num_i / den_i; +inf if some den_i = 0 < num_i. Entries with both zero are skipped.
double max_ratio(const std::vector<double> &num, const std::vector<double> &den);

}  // namespace qcbm

#endif
