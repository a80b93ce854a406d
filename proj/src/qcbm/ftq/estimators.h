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

#ifndef QCBM_FTQ_ESTIMATORS_H
#define QCBM_FTQ_ESTIMATORS_H

#include <cstdint>
#include <vector>

#include "json.hpp"
#include "qcbm/ftq/oracle.h"

namespace qcbm {

/// How a mean-estimation call is sized.
///
/// The quantum mean estimator would run the subroutine ℓ = ⌈(σ/ε) L^{3/2} max(1, ln L)⌉ times, with
/// L = max(1, ln(σ/ε)); that count is what the ledger records. The classical simulation instead takes
/// the median of `groups` means of `group_size` = ⌈16σ²/ε²⌉ independent executions each, which
/// by Chebyshev lands within ε/2 of the subroutine mean with probability well above 4/5 whenever
/// the subroutine variance really is at most σ².
struct MeanEstimationPlan {
    double sigma = 0;
    double epsilon = 0;
    uint64_t quantum_executions = 0;
    size_t groups = 13;
    size_t group_size = 0;
};

MeanEstimationPlan plan_mean_estimation(double sigma, double epsilon);

/// Exact mean and variance of one subroutine output, summed over every index and every
/// amplitude-estimation outcome.
struct SubroutineMoments {
    double mean = 0;
    double variance = 0;
};

/// Per-execution amplitude-estimation query counts.
struct SubroutineQueries {
    uint64_t to_p = 0;
    uint64_t to_q = 0;
};

struct FtEstimate {
    double estimate = 0;
    QueryLedger ledger;
    MeanEstimationPlan plan;
    SubroutineQueries per_execution;
    /// Subroutine executions actually simulated classically (not charged to the ledger).
    uint64_t classical_executions = 0;
};

nlohmann::json to_json(const FtEstimate &estimate);

// Pearson χ²(p || q) = ½ Σ_i q_i (q_i/p_i - 1), with q_i/p_i <= g.
SubroutineQueries pearson_queries(size_t n, double g, double epsilon);
double pearson_variance_bound(size_t n, double g, double epsilon);
/// One execution: i ~ q, EstAmp' estimates q~_i and p~_i, output ½(q~_i/p~_i - 1). Charges the ledger.
double pearson_subroutine_a(const BoundedRatioPair &pair, double epsilon, QueryLedger &ledger, Rng &rng);
SubroutineMoments pearson_subroutine_moments(const BoundedRatioPair &pair, double epsilon);
/// Requires a q/p bound.
FtEstimate estimate_pearson(const BoundedRatioPair &pair, double epsilon, uint64_t seed);

// TV(p, q) = Σ_i ½(p_i + q_i) |p_i - q_i| / (p_i + q_i).
SubroutineQueries tv_queries(size_t n, double epsilon);
double tv_subroutine_a(const OracleDistribution &p, const OracleDistribution &q, double epsilon, QueryLedger &ledger,
                       Rng &rng);
SubroutineMoments tv_subroutine_moments(const OracleDistribution &p, const OracleDistribution &q, double epsilon);
FtEstimate estimate_tv_quantum_sim(const OracleDistribution &p, const OracleDistribution &q, double epsilon,
                                   uint64_t seed);

// KL(p || q) = Σ_i p_i (log p_i - log q_i), with p_i/q_i <= g.
SubroutineQueries kl_queries(size_t n, double g, double epsilon);
double kl_variance_bound(double g);
double kl_subroutine_a(const BoundedRatioPair &pair, double epsilon, QueryLedger &ledger, Rng &rng);
SubroutineMoments kl_subroutine_moments(const BoundedRatioPair &pair, double epsilon);
/// Requires a p/q bound.
FtEstimate estimate_kl_quantum_sim(const BoundedRatioPair &pair, double epsilon, uint64_t seed);

}  // namespace qcbm

#endif
