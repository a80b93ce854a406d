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

#include "qcbm/ftq/estimators.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

namespace qcbm {

namespace {

void check_epsilon(double epsilon) {
    if (!(epsilon > 0) || !std::isfinite(epsilon)) {
        throw std::invalid_argument("epsilon must be a positive finite number");
    }
}

void check_bound(const BoundedRatioPair &pair, RatioBound expected) {
    if (pair.bound() != expected) {
        throw std::invalid_argument(expected == RatioBound::QOverP ? "this estimator needs a bound on q/p"
                                                                   : "this estimator needs a bound on p/q");
    }
}

EstAmpConfig prime(uint64_t queries) {
    return EstAmpConfig{queries, EstAmpVariant::EstAmpPrime};
}

/// Σ_l w_l f(v_l) over an EstAmp output law.
double expect(const EstAmpOutcomes &o, const std::function<double(double)> &f) {
    double total = 0;
    for (size_t l = 0; l < o.values.size(); l++) {
        if (o.probabilities[l] > 0) {
            total += o.probabilities[l] * f(o.values[l]);
        }
    }
    return total;
}

/// A subroutine with its output laws tabulated per index, for fast repeated classical draws.
class TabulatedSubroutine {
   public:
    using Combine = double (*)(double p_est, double q_est);

    TabulatedSubroutine(const std::vector<double> &index_weights, const OracleDistribution &p,
                        const OracleDistribution &q, SubroutineQueries queries, Combine combine)
        : index_(index_weights), combine_(combine) {
        for (size_t i = 0; i < index_weights.size(); i++) {
            if (index_weights[i] <= 0) {
                p_tables_.emplace_back();
                q_tables_.emplace_back();
                p_samplers_.emplace_back();
                q_samplers_.emplace_back();
                continue;
            }
            p_tables_.push_back(estamp_outcomes(p[i], prime(queries.to_p)));
            q_tables_.push_back(estamp_outcomes(q[i], prime(queries.to_q)));
            p_samplers_.emplace_back(p_tables_.back().probabilities);
            q_samplers_.emplace_back(q_tables_.back().probabilities);
        }
    }

    double operator()(Rng &rng) const {
        size_t i = index_(rng);
        double p_est = p_tables_[i].values[p_samplers_[i](rng)];
        double q_est = q_tables_[i].values[q_samplers_[i](rng)];
        return combine_(p_est, q_est);
    }

   private:
    DiscreteSampler index_;
    Combine combine_;
    std::vector<EstAmpOutcomes> p_tables_, q_tables_;
    std::vector<DiscreteSampler> p_samplers_, q_samplers_;
};

double median_of_means(const TabulatedSubroutine &a, const MeanEstimationPlan &plan, Rng &rng) {
    std::vector<double> means(plan.groups);
    for (auto &m : means) {
        double total = 0;
        for (size_t k = 0; k < plan.group_size; k++) {
            total += a(rng);
        }
        m = total / static_cast<double>(plan.group_size);
    }
    std::sort(means.begin(), means.end());
    return means[means.size() / 2];
}

FtEstimate run_estimate(const TabulatedSubroutine &a, const OracleDistribution &p, const OracleDistribution &q,
                        SubroutineQueries queries, double sigma, double epsilon, uint64_t seed) {
    FtEstimate out;
    out.plan = plan_mean_estimation(sigma, epsilon);
    out.per_execution = queries;
    Rng rng(seed);
    out.estimate = median_of_means(a, out.plan, rng);
    out.classical_executions = static_cast<uint64_t>(out.plan.groups) * out.plan.group_size;
    out.ledger.executions_of_a = out.plan.quantum_executions;
    p.charge(out.ledger, out.plan.quantum_executions * queries.to_p);
    q.charge(out.ledger, out.plan.quantum_executions * queries.to_q);
    return out;
}

double pearson_combine(double p_est, double q_est) {
    return 0.5 * (q_est / p_est - 1);
}

double tv_combine(double p_est, double q_est) {
    return std::abs(p_est - q_est) / (p_est + q_est);
}

double kl_combine(double p_est, double q_est) {
    return std::log(p_est) - std::log(q_est);
}

std::vector<double> mixture(const OracleDistribution &p, const OracleDistribution &q) {
    std::vector<double> w(p.size());
    for (size_t i = 0; i < w.size(); i++) {
        w[i] = 0.5 * (p[i] + q[i]);
    }
    return w;
}

void check_sizes(const OracleDistribution &p, const OracleDistribution &q) {
    if (p.size() != q.size()) {
        throw std::invalid_argument("oracle distributions have different sizes");
    }
}

}  // namespace

MeanEstimationPlan plan_mean_estimation(double sigma, double epsilon) {
    check_epsilon(epsilon);
    if (!(sigma > 0) || !std::isfinite(sigma)) {
        throw std::invalid_argument("sigma must be a positive finite number");
    }
    MeanEstimationPlan plan;
    plan.sigma = sigma;
    plan.epsilon = epsilon;
    double x = sigma / epsilon;
    double log_x = std::max(1.0, std::log(x));
    double log_log_x = std::max(1.0, std::log(log_x));
    plan.quantum_executions = static_cast<uint64_t>(std::ceil(x * std::pow(log_x, 1.5) * log_log_x));
    plan.group_size = static_cast<size_t>(std::ceil(16 * x * x));
    return plan;
}

nlohmann::json to_json(const FtEstimate &e) {
    return {
        {"estimate", e.estimate},
        {"ledger", to_json(e.ledger)},
        {"sigma", e.plan.sigma},
        {"epsilon", e.plan.epsilon},
        {"quantum_executions", e.plan.quantum_executions},
        {"groups", e.plan.groups},
        {"group_size", e.plan.group_size},
        {"queries_to_p_per_execution", e.per_execution.to_p},
        {"queries_to_q_per_execution", e.per_execution.to_q},
        {"classical_executions", e.classical_executions},
    };
}

SubroutineQueries pearson_queries(size_t n, double g, double epsilon) {
    check_epsilon(epsilon);
    double root_n = std::sqrt(static_cast<double>(n));
    return {power_of_two_at_least(root_n * g * g / epsilon), power_of_two_at_least(root_n * g / epsilon)};
}

double pearson_variance_bound(size_t n, double g, double epsilon) {
    return g * g + std::exp(-epsilon * epsilon / (2 * static_cast<double>(n) * g * g));
}

double pearson_subroutine_a(const BoundedRatioPair &pair, double epsilon, QueryLedger &ledger, Rng &rng) {
    check_bound(pair, RatioBound::QOverP);
    auto queries = pearson_queries(pair.size(), pair.g(), epsilon);
    size_t i = DiscreteSampler(pair.q().probabilities())(rng);
    double q_est = pair.q().estimate(i, prime(queries.to_q), ledger, rng);
    double p_est = pair.p().estimate(i, prime(queries.to_p), ledger, rng);
    ledger.executions_of_a += 1;
    return pearson_combine(p_est, q_est);
}

SubroutineMoments pearson_subroutine_moments(const BoundedRatioPair &pair, double epsilon) {
    check_bound(pair, RatioBound::QOverP);
    auto queries = pearson_queries(pair.size(), pair.g(), epsilon);
    double first = 0, second = 0;
    for (size_t i = 0; i < pair.size(); i++) {
        double qi = pair.q()[i];
        if (qi <= 0) {
            continue;
        }
        auto qo = estamp_outcomes(qi, prime(queries.to_q));
        auto po = estamp_outcomes(pair.p()[i], prime(queries.to_p));
        // q~ and p~ are independent, so moments of their ratio factorise.
        double eq = expect(qo, [](double v) { return v; });
        double eq2 = expect(qo, [](double v) { return v * v; });
        double einv = expect(po, [](double v) { return 1 / v; });
        double einv2 = expect(po, [](double v) { return 1 / (v * v); });
        first += qi * 0.5 * (eq * einv - 1);
        second += qi * 0.25 * (eq2 * einv2 - 2 * eq * einv + 1);
    }
    return {first, second - first * first};
}

FtEstimate estimate_pearson(const BoundedRatioPair &pair, double epsilon, uint64_t seed) {
    check_bound(pair, RatioBound::QOverP);
    auto queries = pearson_queries(pair.size(), pair.g(), epsilon);
    TabulatedSubroutine a(pair.q().probabilities(), pair.p(), pair.q(), queries, pearson_combine);
    double sigma = std::sqrt(pearson_variance_bound(pair.size(), pair.g(), epsilon));
    return run_estimate(a, pair.p(), pair.q(), queries, sigma, epsilon, seed);
}

SubroutineQueries tv_queries(size_t n, double epsilon) {
    check_epsilon(epsilon);
    uint64_t m = power_of_two_at_least(std::sqrt(static_cast<double>(n)) / epsilon);
    return {m, m};
}

double tv_subroutine_a(const OracleDistribution &p, const OracleDistribution &q, double epsilon, QueryLedger &ledger,
                       Rng &rng) {
    check_sizes(p, q);
    auto queries = tv_queries(p.size(), epsilon);
    size_t i = DiscreteSampler(mixture(p, q))(rng);
    double p_est = p.estimate(i, prime(queries.to_p), ledger, rng);
    double q_est = q.estimate(i, prime(queries.to_q), ledger, rng);
    ledger.executions_of_a += 1;
    return tv_combine(p_est, q_est);
}

SubroutineMoments tv_subroutine_moments(const OracleDistribution &p, const OracleDistribution &q, double epsilon) {
    check_sizes(p, q);
    auto queries = tv_queries(p.size(), epsilon);
    auto weights = mixture(p, q);
    double first = 0, second = 0;
    for (size_t i = 0; i < p.size(); i++) {
        if (weights[i] <= 0) {
            continue;
        }
        auto po = estamp_outcomes(p[i], prime(queries.to_p));
        auto qo = estamp_outcomes(q[i], prime(queries.to_q));
        for (size_t a = 0; a < po.values.size(); a++) {
            for (size_t b = 0; b < qo.values.size(); b++) {
                double w = po.probabilities[a] * qo.probabilities[b];
                double y = tv_combine(po.values[a], qo.values[b]);
                first += weights[i] * w * y;
                second += weights[i] * w * y * y;
            }
        }
    }
    return {first, second - first * first};
}

FtEstimate estimate_tv_quantum_sim(const OracleDistribution &p, const OracleDistribution &q, double epsilon,
                                   uint64_t seed) {
    check_sizes(p, q);
    auto queries = tv_queries(p.size(), epsilon);
    TabulatedSubroutine a(mixture(p, q), p, q, queries, tv_combine);
    // The output lies in [0, 1], so its variance is at most 1/4.
    return run_estimate(a, p, q, queries, 0.5, epsilon, seed);
}

SubroutineQueries kl_queries(size_t n, double g, double epsilon) {
    check_epsilon(epsilon);
    double root_n = std::sqrt(static_cast<double>(n));
    return {power_of_two_at_least(root_n / epsilon), power_of_two_at_least(root_n * g / epsilon)};
}

double kl_variance_bound(double g) {
    double log_g = std::log(g);
    return log_g * log_g + 4 / (std::numbers::e * std::numbers::e);
}

double kl_subroutine_a(const BoundedRatioPair &pair, double epsilon, QueryLedger &ledger, Rng &rng) {
    check_bound(pair, RatioBound::POverQ);
    auto queries = kl_queries(pair.size(), pair.g(), epsilon);
    size_t i = DiscreteSampler(pair.p().probabilities())(rng);
    double p_est = pair.p().estimate(i, prime(queries.to_p), ledger, rng);
    double q_est = pair.q().estimate(i, prime(queries.to_q), ledger, rng);
    ledger.executions_of_a += 1;
    return kl_combine(p_est, q_est);
}

SubroutineMoments kl_subroutine_moments(const BoundedRatioPair &pair, double epsilon) {
    check_bound(pair, RatioBound::POverQ);
    auto queries = kl_queries(pair.size(), pair.g(), epsilon);
    double first = 0, second = 0;
    for (size_t i = 0; i < pair.size(); i++) {
        double pi = pair.p()[i];
        if (pi <= 0) {
            continue;
        }
        auto po = estamp_outcomes(pi, prime(queries.to_p));
        auto qo = estamp_outcomes(pair.q()[i], prime(queries.to_q));
        double lp = expect(po, [](double v) { return std::log(v); });
        double lp2 = expect(po, [](double v) { return std::log(v) * std::log(v); });
        double lq = expect(qo, [](double v) { return std::log(v); });
        double lq2 = expect(qo, [](double v) { return std::log(v) * std::log(v); });
        first += pi * (lp - lq);
        second += pi * (lp2 - 2 * lp * lq + lq2);
    }
    return {first, second - first * first};
}

FtEstimate estimate_kl_quantum_sim(const BoundedRatioPair &pair, double epsilon, uint64_t seed) {
    check_bound(pair, RatioBound::POverQ);
    auto queries = kl_queries(pair.size(), pair.g(), epsilon);
    TabulatedSubroutine a(pair.p().probabilities(), pair.p(), pair.q(), queries, kl_combine);
    return run_estimate(a, pair.p(), pair.q(), queries, std::sqrt(kl_variance_bound(pair.g())), epsilon, seed);
}

}  // namespace qcbm
