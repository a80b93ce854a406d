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

#include "qcbm/train/gradient.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qcbm/classifier/exact_classifier.h"
#include "qcbm/fdiv/divergence.h"
#include "qcbm/sim/statevector.h"

namespace qcbm {
namespace {

std::vector<double> random_theta(const AnsatzSpec &a, Rng &rng) {
    std::vector<double> t(a.num_parameters());
    for (auto &v : t) {
        v = (2 * uniform01(rng) - 1) * std::numbers::pi;
    }
    return t;
}

std::vector<double> exact_ratios(const DiscreteDistribution &target, const DiscreteDistribution &model) {
    return ExactClassifier(target, model).ratio_table({});
}

const GradientOptions kExact{ExpectationMode::Exact, 0, {}};

// Fourth-order central difference of f along coordinate i.
double finite_difference(auto &&f, std::vector<double> theta, size_t i, double h = 3e-4) {
    double x = theta[i];
    auto at = [&](double d) {
        theta[i] = x + d;
        return f(theta);
    };
    return (-at(2 * h) + 8 * at(h) - 8 * at(-h) + at(-2 * h)) / (12 * h);
}

// Smallest |q(x) - p(x)| over outcomes; near zero, a finite difference can straddle the TV kink.
double closest_tie(const DiscreteDistribution &p, const DiscreteDistribution &q) {
    double m = 1;
    for (size_t x = 0; x < p.size(); x++) {
        m = std::min(m, std::abs(p[x] - q[x]));
    }
    return m;
}

TEST(Gradient, MatchesFiniteDifferences) {
    Rng rng(21);
    int checked = 0;
    for (size_t n = 1; n <= 3; n++) {
        for (size_t depth = 0; depth <= 2; depth++) {
            auto ansatz = build_ansatz(n, depth);
            auto target = model_distribution(ansatz, random_theta(ansatz, rng));
            auto theta = random_theta(ansatz, rng);
            auto model = model_distribution(ansatz, theta);
            auto ratios = exact_ratios(target, model);
            for (const auto &gen : generator_registry()) {
                if (gen.id == Generator::TotalVariation && closest_tie(target, model) < 1e-3) {
                    continue;
                }
                auto grad = full_gradient(gen, ansatz, theta, ratios, kExact, rng);
                auto divergence = [&](const std::vector<double> &t) {
                    return exact_divergence_conjugate(gen, target, model_distribution(ansatz, t));
                };
                for (size_t i = 0; i < theta.size(); i++) {
                    double fd = finite_difference(divergence, theta, i);
                    EXPECT_NEAR(grad[i], fd, 1e-6) << gen.name << " n=" << n << " D=" << depth << " i=" << i;
                    checked++;
                }
            }
        }
    }
    EXPECT_GT(checked, 500);
}

TEST(Gradient, VanishesAtTheTarget) {
    Rng rng(3);
    auto ansatz = build_ansatz(3, 2);
    auto theta = random_theta(ansatz, rng);
    auto model = model_distribution(ansatz, theta);
    auto ratios = exact_ratios(model, model);
    for (const auto &gen : generator_registry()) {
        for (double g : full_gradient(gen, ansatz, theta, ratios, kExact, rng)) {
            EXPECT_NEAR(g, 0, 1e-12) << gen.name;
        }
    }
}

TEST(Gradient, SampledIsCloseToExact) {
    Rng rng(4);
    auto ansatz = build_ansatz(2, 1);
    auto target = model_distribution(ansatz, random_theta(ansatz, rng));
    auto theta = random_theta(ansatz, rng);
    auto ratios = exact_ratios(target, model_distribution(ansatz, theta));
    const auto &gen = generator_spec(Generator::SquaredHellinger);
    auto exact = full_gradient(gen, ansatz, theta, ratios, kExact, rng);
    auto sampled = full_gradient(gen, ansatz, theta, ratios, {ExpectationMode::Sampled, 200000, {}}, rng);
    for (size_t i = 0; i < exact.size(); i++) {
        EXPECT_NEAR(sampled[i], exact[i], 0.02);
    }
}

TEST(Gradient, RejectsWrongRatioTable) {
    Rng rng(0);
    auto ansatz = build_ansatz(2, 1);
    std::vector<double> theta(ansatz.num_parameters(), 0.1);
    std::vector<double> ratios(3, 1.0);
    EXPECT_THROW(full_gradient(generator_spec(Generator::KlForward), ansatz, theta, ratios, kExact, rng),
                 std::invalid_argument);
}

TEST(Switch, PicksLargestMagnitude) {
    EXPECT_EQ(switch_choice(std::vector<double>{0.1, -0.5, 0.3}), 1u);
    EXPECT_EQ(switch_choice(std::vector<double>{0.5, -0.5}), 0u);
    EXPECT_EQ(switch_choice(std::vector<double>{0, 0, 0}), 0u);
    EXPECT_THROW(switch_choice(std::vector<double>{}), std::invalid_argument);
}

TEST(Switch, DominatesEveryCandidate) {
    Rng rng(5);
    auto ansatz = build_ansatz(3, 1);
    auto target = model_distribution(ansatz, random_theta(ansatz, rng));
    auto theta = random_theta(ansatz, rng);
    auto ratios = exact_ratios(target, model_distribution(ansatz, theta));
    std::vector<Generator> candidates{Generator::PearsonReverse, Generator::KlForward, Generator::SquaredHellinger};
    auto switched = f_switch_gradient(candidates, ansatz, theta, ratios, kExact, rng);
    for (auto g : candidates) {
        auto single = full_gradient(generator_spec(g), ansatz, theta, ratios, kExact, rng);
        for (size_t i = 0; i < single.size(); i++) {
            EXPECT_GE(std::abs(switched.gradient[i]), std::abs(single[i]) - 1e-15);
        }
    }
    for (size_t i = 0; i < switched.chosen.size(); i++) {
        auto single = full_gradient(generator_spec(switched.chosen[i]), ansatz, theta, ratios, kExact, rng);
        EXPECT_EQ(switched.gradient[i], single[i]);
    }
}

TEST(Switch, ReusesTheShiftedCircuits) {
    Rng rng(6);
    auto ansatz = build_ansatz(3, 2);
    auto theta = random_theta(ansatz, rng);
    auto model = model_distribution(ansatz, theta);
    auto ratios = exact_ratios(DiscreteDistribution::uniform(3), model);
    GradientOptions sampled{ExpectationMode::Sampled, 100, {}};
    uint64_t before = simulation_count();
    f_switch_gradient(std::vector<Generator>{Generator::KlForward, Generator::KlReverse, Generator::Jeffrey,
                                             Generator::TotalVariation},
                      ansatz, theta, ratios, sampled, rng);
    EXPECT_EQ(simulation_count() - before, 2 * ansatz.num_parameters());
}

TEST(LocalGradient, FullWidthEqualsGlobal) {
    Rng rng(7);
    auto ansatz = build_ansatz(3, 1);
    auto target = model_distribution(ansatz, random_theta(ansatz, rng));
    auto theta = random_theta(ansatz, rng);
    auto ratios = exact_ratios(target, model_distribution(ansatz, theta));
    const auto &gen = generator_spec(Generator::KlReverse);
    auto global = full_gradient(gen, ansatz, theta, ratios, kExact, rng);
    std::vector<std::vector<double>> tables{ratios};
    auto local = k_local_gradient(gen, ansatz, theta, 3, tables, kExact, rng);
    for (size_t i = 0; i < global.size(); i++) {
        EXPECT_NEAR(local[i], global[i], 1e-14);
    }
}

TEST(LocalGradient, MatchesFiniteDifferencesOfWindowAverage) {
    Rng rng(8);
    const size_t n = 3, k = 2;
    auto ansatz = build_ansatz(n, 2);
    auto target = model_distribution(ansatz, random_theta(ansatz, rng));
    auto theta = random_theta(ansatz, rng);
    auto model = model_distribution(ansatz, theta);
    for (auto g : {Generator::KlReverse, Generator::KlForward, Generator::SquaredHellinger, Generator::PearsonSymmetric}) {
        const auto &gen = generator_spec(g);
        std::vector<std::vector<double>> tables;
        for (auto w : sliding_windows(n, k)) {
            tables.push_back(exact_ratios(marginal(target, w), marginal(model, w)));
        }
        auto grad = k_local_gradient(gen, ansatz, theta, k, tables, kExact, rng);
        auto divergence = [&](const std::vector<double> &t) {
            return window_averaged_divergence(gen, target, model_distribution(ansatz, t), k);
        };
        for (size_t i = 0; i < theta.size(); i++) {
            double fd = finite_difference(divergence, theta, i);
            EXPECT_NEAR(grad[i], fd, 1e-6) << gen.name << " i=" << i;
        }
    }
}

TEST(LocalGradient, SingleQubitWindowsSeeOnlyMarginals) {
    // A product target with the model's marginals gives zero 1-local gradient even though the
    // joint distributions differ.
    Rng rng(9);
    auto ansatz = build_ansatz(2, 1);
    auto theta = random_theta(ansatz, rng);
    auto model = model_distribution(ansatz, theta);
    auto m0 = marginal(model, Window{0, 1});
    auto m1 = marginal(model, Window{1, 1});
    std::vector<double> product(4);
    for (uint64_t x = 0; x < 4; x++) {
        product[x] = m0[x >> 1] * m1[x & 1];
    }
    auto target = DiscreteDistribution::from_probabilities(product);
    ASSERT_GT(exact_divergence_conjugate(generator_spec(Generator::KlReverse), target, model), 1e-4);
    std::vector<std::vector<double>> tables;
    for (auto w : sliding_windows(2, 1)) {
        tables.push_back(exact_ratios(marginal(target, w), marginal(model, w)));
    }
    auto grad = k_local_gradient(generator_spec(Generator::KlReverse), ansatz, theta, 1, tables, kExact, rng);
    for (double g : grad) {
        EXPECT_NEAR(g, 0, 1e-12);
    }
}

TEST(LocalGradient, WindowAverageLowerBoundsGlobal) {
    Rng rng(10);
    auto ansatz = build_ansatz(4, 2);
    for (int trial = 0; trial < 20; trial++) {
        auto p = model_distribution(ansatz, random_theta(ansatz, rng));
        auto q = model_distribution(ansatz, random_theta(ansatz, rng));
        for (const auto &gen : generator_registry()) {
            double global = exact_divergence_conjugate(gen, p, q);
            for (size_t k = 1; k <= 4; k++) {
                EXPECT_LE(window_averaged_divergence(gen, p, q, k), global + 1e-10) << gen.name << " k=" << k;
            }
        }
    }
}

}  // namespace
}  // namespace qcbm
