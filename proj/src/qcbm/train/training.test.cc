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

#include "qcbm/train/training.h"

#include <gtest/gtest.h>

#include <numbers>
#include <sstream>
#include <stdexcept>

#include "qcbm/fdiv/divergence.h"
#include "qcbm/sim/statevector.h"

namespace qcbm {
namespace {

DiscreteDistribution random_target(size_t n, size_t depth, uint64_t seed) {
    auto a = build_ansatz(n, depth);
    Rng rng(seed);
    std::vector<double> t(a.num_parameters());
    for (auto &v : t) {
        v = (2 * uniform01(rng) - 1) * std::numbers::pi;
    }
    return model_distribution(a, t);
}

TrainConfig exact_config(size_t epochs) {
    TrainConfig c;
    c.expectation = ExpectationMode::Exact;
    c.epochs = epochs;
    return c;
}

TEST(Training, RecordsEveryEpoch) {
    auto target = random_target(3, 1, 1);
    auto c = exact_config(7);
    c.record_parameters = true;
    auto rec = run_training(c, target, build_ansatz(3, 1));
    EXPECT_EQ(rec.epochs(), 7u);
    EXPECT_EQ(rec.exact_kl.size(), 7u);
    EXPECT_EQ(rec.exact_kl_rev.size(), 7u);
    EXPECT_EQ(rec.parameters.size(), 7u);
    EXPECT_TRUE(rec.chosen.empty());
    auto model = model_distribution(build_ansatz(3, 1), rec.parameters.back());
    EXPECT_DOUBLE_EQ(rec.exact_tv.back(), total_variation(target, model));
    EXPECT_DOUBLE_EQ(rec.exact_kl.back(), kl_forward(target, model));
    EXPECT_DOUBLE_EQ(rec.exact_kl_rev.back(), kl_reverse(target, model));
}

TEST(Training, InitialParametersAreUniform) {
    auto rec = run_training(exact_config(1), random_target(2, 1, 0), build_ansatz(2, 1));
    for (double v : rec.initial_parameters) {
        EXPECT_GE(v, -std::numbers::pi);
        EXPECT_LE(v, std::numbers::pi);
    }
}

TEST(Training, ZeroLearningRateKeepsParameters) {
    auto c = exact_config(5);
    c.learning_rate = 0;
    c.record_parameters = true;
    auto rec = run_training(c, random_target(3, 1, 2), build_ansatz(3, 2));
    for (const auto &p : rec.parameters) {
        EXPECT_EQ(p, rec.initial_parameters);
    }
    for (double v : rec.exact_tv) {
        EXPECT_EQ(v, rec.exact_tv.front());
    }
}

TEST(Training, DeterministicGivenSeed) {
    TrainConfig c;
    c.epochs = 10;
    c.shots = 100;
    c.seed = 17;
    c.heuristic = Heuristic::FSwitch;
    c.generators = {Generator::KlForward, Generator::KlReverse, Generator::SquaredHellinger};
    auto target = random_target(3, 1, 3);
    auto a = run_training(c, target, build_ansatz(3, 2));
    auto b = run_training(c, target, build_ansatz(3, 2));
    EXPECT_EQ(a.exact_tv, b.exact_tv);
    EXPECT_EQ(a.chosen, b.chosen);
    c.seed = 18;
    EXPECT_NE(run_training(c, target, build_ansatz(3, 2)).exact_tv, a.exact_tv);
}

TEST(Training, SmallStepsDescendMonotonically) {
    auto c = exact_config(50);
    c.learning_rate = 0.01;
    c.generators = {Generator::KlReverse};
    auto rec = run_training(c, random_target(3, 1, 4), build_ansatz(3, 1));
    for (size_t e = 1; e < rec.epochs(); e++) {
        EXPECT_LE(rec.exact_kl_rev[e], rec.exact_kl_rev[e - 1] + 1e-12);
    }
}

TEST(Training, ExactRegimeReducesDivergence) {
    // Same architecture for target and model: the optimum is reachable.
    auto target = random_target(3, 1, 12345);
    auto c = exact_config(500);
    c.learning_rate = 0.1;
    c.generators = {Generator::KlReverse};
    int improved = 0;
    for (uint64_t seed = 0; seed < 3; seed++) {
        c.seed = seed;
        auto rec = run_training(c, target, build_ansatz(3, 1));
        improved += rec.exact_kl_rev.back() * 100 <= rec.exact_kl_rev.front();
    }
    EXPECT_GE(improved, 2);
}

TEST(Training, LocalHeuristicWithTrainedClassifiers) {
    TrainConfig c;
    c.heuristic = Heuristic::KLocal;
    c.k = 2;
    c.epochs = 3;
    c.shots = 50;
    c.classifier = ClassifierMode::Trained;
    c.classifier_config.epochs = 2;
    auto target = DiscreteDistribution::uniform(3);
    auto a = run_training(c, target, build_ansatz(3, 1));
    auto b = run_training(c, target, build_ansatz(3, 1));
    EXPECT_EQ(a.exact_kl, b.exact_kl);
    EXPECT_EQ(a.epochs(), 3u);
}

TEST(Training, SwitchRecordsOneChoicePerDirection) {
    auto c = exact_config(4);
    c.heuristic = Heuristic::FSwitch;
    c.generators = {Generator::TotalVariation, Generator::KlReverse};
    auto a = build_ansatz(2, 1);
    auto rec = run_training(c, random_target(2, 1, 5), a);
    ASSERT_EQ(rec.chosen.size(), 4u);
    for (const auto &row : rec.chosen) {
        EXPECT_EQ(row.size(), a.num_parameters());
    }
}

TEST(Training, ValidatesConfig) {
    auto target = DiscreteDistribution::uniform(2);
    auto a = build_ansatz(2, 1);
    TrainConfig c;
    c.generators = {};
    EXPECT_THROW(run_training(c, target, a), std::invalid_argument);
    c = {};
    c.generators = {Generator::KlForward, Generator::KlReverse};
    EXPECT_THROW(run_training(c, target, a), std::invalid_argument);
    c = {};
    c.heuristic = Heuristic::KLocal;
    c.k = 3;
    EXPECT_THROW(run_training(c, target, a), std::invalid_argument);
    c = {};
    c.learning_rate = -1;
    EXPECT_THROW(run_training(c, target, a), std::invalid_argument);
    c = {};
    EXPECT_THROW(run_training(c, DiscreteDistribution::uniform(3), a), std::invalid_argument);
    EXPECT_THROW(run_training_from(c, target, a, {0.0}), std::invalid_argument);
}

TEST(TrainConfigJson, RoundTrip) {
    TrainConfig c;
    c.generators = {Generator::Jeffrey, Generator::TotalVariation};
    c.heuristic = Heuristic::FSwitch;
    c.shots = 123;
    c.learning_rate = 0.125;
    c.classifier = ClassifierMode::Trained;
    c.classifier_config.batch_size = 7;
    c.seed = 99;
    auto j = to_json(c);
    auto back = train_config_from_json(j);
    EXPECT_EQ(to_json(back), j);
    EXPECT_EQ(back.generators, c.generators);
    EXPECT_EQ(back.classifier_config.batch_size, 7u);
}

TEST(TrainConfigJson, RejectsUnknownFields) {
    EXPECT_THROW(train_config_from_json({{"learning_rte", 0.1}}), std::invalid_argument);
    EXPECT_THROW(train_config_from_json({{"generators", {"kl_sideways"}}}), std::invalid_argument);
    EXPECT_THROW(train_config_from_json({{"heuristic", "greedy"}}), std::invalid_argument);
    EXPECT_EQ(train_config_from_json(nlohmann::json::object()).epochs, 500u);
}

TEST(TrainRecordCsv, Layout) {
    auto c = exact_config(2);
    c.heuristic = Heuristic::FSwitch;
    c.generators = {Generator::KlForward, Generator::KlReverse};
    auto rec = run_training(c, random_target(1, 0, 1), build_ansatz(1, 0));
    std::ostringstream out;
    write_record_csv(out, rec);
    std::istringstream in(out.str());
    std::string header, first;
    std::getline(in, header);
    std::getline(in, first);
    EXPECT_EQ(header, "epoch,exact_tv,exact_kl,exact_kl_rev,chosen_0,chosen_1");
    EXPECT_EQ(first.substr(0, 2), "1,");
    EXPECT_EQ(format_double(0.1), "0.10000000000000001");
    EXPECT_EQ(std::stod(format_double(1.0 / 3)), 1.0 / 3);
}

}  // namespace
}  // namespace qcbm
