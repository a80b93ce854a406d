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

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "qcbm/classifier/exact_classifier.h"
#include "qcbm/fdiv/divergence.h"
#include "qcbm/sim/statevector.h"

namespace qcbm {

void TrainConfig::validate(size_t num_qubits) const {
    if (generators.empty()) {
        throw std::invalid_argument("at least one generator is required");
    }
    if (heuristic != Heuristic::FSwitch && generators.size() != 1) {
        throw std::invalid_argument("the " + heuristic_name(heuristic) + " heuristic takes exactly one generator");
    }
    if (heuristic == Heuristic::KLocal && (k < 1 || k > num_qubits)) {
        throw std::invalid_argument("k must be in [1, " + std::to_string(num_qubits) + "]");
    }
    if (shots == 0) {
        throw std::invalid_argument("shots must be positive");
    }
    if (!(learning_rate >= 0) || !std::isfinite(learning_rate)) {
        throw std::invalid_argument("learning rate must be a finite non-negative number");
    }
    if (epochs == 0) {
        throw std::invalid_argument("epochs must be positive");
    }
    if (classifier == ClassifierMode::Trained) {
        classifier_config.validate();
    }
    clamp.validate();
}

namespace {

class Trainer {
   public:
    Trainer(const TrainConfig &config, const DiscreteDistribution &target, const AnsatzSpec &ansatz)
        : config_(config), target_(target), ansatz_(ansatz), rng_(config.seed) {
        size_t n = ansatz.num_qubits;
        config.validate(n);
        if (target.num_bits() != n) {
            throw std::invalid_argument("target has " + std::to_string(target.num_bits()) + " bits, model has " +
                                        std::to_string(n));
        }
        windows_ = config.heuristic == Heuristic::KLocal ? sliding_windows(n, config.k)
                                                          : std::vector<Window>{Window{0, n}};
        options_ = GradientOptions{config.expectation, config.shots, config.clamp};
    }

    std::vector<double> draw_initial() {
        std::vector<double> theta(ansatz_.num_parameters());
        for (auto &t : theta) {
            t = (2 * uniform01(rng_) - 1) * std::numbers::pi;
        }
        return theta;
    }

    TrainRecord run(std::vector<double> theta) {
        if (theta.size() != ansatz_.num_parameters()) {
            throw std::invalid_argument("initial parameter vector has the wrong length");
        }
        if (config_.classifier == ClassifierMode::Trained) {
            Rng init(derive_seed(config_.classifier_config.seed, config_.seed));
            for (auto w : windows_) {
                classifiers_.emplace_back(w.width, init);
            }
        }
        TrainRecord record;
        record.initial_parameters = theta;
        auto model = model_distribution(ansatz_, theta);
        for (size_t epoch = 0; epoch < config_.epochs; epoch++) {
            auto ratios = ratio_tables(model);
            std::vector<double> grad;
            switch (config_.heuristic) {
                case Heuristic::Single:
                    grad = full_gradient(generator_spec(config_.generators[0]), ansatz_, theta, ratios[0], options_,
                                         rng_);
                    break;
                case Heuristic::FSwitch: {
                    auto switched = f_switch_gradient(config_.generators, ansatz_, theta, ratios[0], options_, rng_);
                    grad = std::move(switched.gradient);
                    record.chosen.push_back(std::move(switched.chosen));
                    break;
                }
                case Heuristic::KLocal:
                    grad = k_local_gradient(generator_spec(config_.generators[0]), ansatz_, theta, config_.k, ratios,
                                            options_, rng_);
                    break;
            }
            for (size_t i = 0; i < theta.size(); i++) {
                theta[i] -= config_.learning_rate * grad[i];
            }
            model = model_distribution(ansatz_, theta);
            record.exact_tv.push_back(total_variation(target_, model));
            record.exact_kl.push_back(kl_forward(target_, model));
            record.exact_kl_rev.push_back(kl_reverse(target_, model));
            if (config_.record_parameters) {
                record.parameters.push_back(theta);
            }
        }
        return record;
    }

   private:
    std::vector<std::vector<double>> ratio_tables(const DiscreteDistribution &model) {
        std::vector<std::vector<double>> out;
        if (config_.classifier == ClassifierMode::Exact) {
            for (auto w : windows_) {
                ExactClassifier c(marginal(target_, w), marginal(model, w));
                out.push_back(c.ratio_table(config_.clamp));
            }
            return out;
        }
        size_t n = ansatz_.num_qubits;
        auto model_samples = sample(model, config_.shots, rng_);
        auto target_samples = sample(target_, config_.shots, rng_);
        std::vector<uint64_t> local_model(model_samples.size()), local_target(target_samples.size());
        for (size_t w = 0; w < windows_.size(); w++) {
            for (size_t s = 0; s < model_samples.size(); s++) {
                local_model[s] = restrict_to_window(model_samples[s], n, windows_[w]);
            }
            for (size_t s = 0; s < target_samples.size(); s++) {
                local_target[s] = restrict_to_window(target_samples[s], n, windows_[w]);
            }
            train_in_place(classifiers_[w], local_model, local_target, config_.classifier_config, rng_);
            out.push_back(ratio_table(classifiers_[w], config_.clamp));
        }
        return out;
    }

    const TrainConfig &config_;
    const DiscreteDistribution &target_;
    const AnsatzSpec &ansatz_;
    Rng rng_;
    std::vector<Window> windows_;
    GradientOptions options_;
    std::vector<NeuralClassifier> classifiers_;
};

template <typename E>
E parse_enum(const std::string &value, std::initializer_list<std::pair<const char *, E>> table, const char *what) {
    for (const auto &[name, e] : table) {
        if (value == name) {
            return e;
        }
    }
    throw std::invalid_argument(std::string("unknown ") + what + " '" + value + "'");
}

}  // namespace

TrainRecord run_training(const TrainConfig &config, const DiscreteDistribution &target, const AnsatzSpec &ansatz) {
    Trainer trainer(config, target, ansatz);
    return trainer.run(trainer.draw_initial());
}

TrainRecord run_training_from(const TrainConfig &config, const DiscreteDistribution &target,
                              const AnsatzSpec &ansatz, std::vector<double> theta) {
    Trainer trainer(config, target, ansatz);
    return trainer.run(std::move(theta));
}

std::string heuristic_name(Heuristic h) {
    switch (h) {
        case Heuristic::Single:
            return "single";
        case Heuristic::FSwitch:
            return "f_switch";
        case Heuristic::KLocal:
            return "k_local";
    }
    return "?";
}

std::string expectation_mode_name(ExpectationMode m) {
    return m == ExpectationMode::Exact ? "exact" : "sampled";
}

std::string classifier_mode_name(ClassifierMode m) {
    return m == ClassifierMode::Exact ? "exact" : "trained";
}

nlohmann::json to_json(const TrainConfig &config) {
    nlohmann::json gens = nlohmann::json::array();
    for (auto g : config.generators) {
        gens.push_back(std::string(generator_name(g)));
    }
    return {
        {"generators", gens},
        {"heuristic", heuristic_name(config.heuristic)},
        {"k", config.k},
        {"shots", config.shots},
        {"learning_rate", config.learning_rate},
        {"epochs", config.epochs},
        {"expectation", expectation_mode_name(config.expectation)},
        {"classifier", classifier_mode_name(config.classifier)},
        {"classifier_config",
         {{"learning_rate", config.classifier_config.learning_rate},
          {"epochs", config.classifier_config.epochs},
          {"batch_size", config.classifier_config.batch_size},
          {"seed", config.classifier_config.seed}}},
        {"clamp", {{"r_min", config.clamp.r_min}, {"r_max", config.clamp.r_max}}},
        {"seed", config.seed},
        {"record_parameters", config.record_parameters},
    };
}

TrainConfig train_config_from_json(const nlohmann::json &j) {
    static const std::initializer_list<std::string_view> known = {
        "generators", "heuristic", "k", "shots", "learning_rate", "epochs", "expectation",
        "classifier", "classifier_config", "clamp", "seed", "record_parameters"};
    for (const auto &[key, value] : j.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw std::invalid_argument("unknown training field '" + key + "'");
        }
    }
    TrainConfig c;
    if (j.contains("generators")) {
        c.generators.clear();
        for (const auto &g : j.at("generators")) {
            auto name = g.get<std::string>();
            auto id = parse_generator(name);
            if (!id) {
                throw std::invalid_argument("unknown generator '" + name + "'");
            }
            c.generators.push_back(*id);
        }
    }
    if (j.contains("heuristic")) {
        c.heuristic = parse_enum<Heuristic>(
            j.at("heuristic").get<std::string>(),
            {{"single", Heuristic::Single}, {"f_switch", Heuristic::FSwitch}, {"k_local", Heuristic::KLocal}},
            "heuristic");
    }
    if (j.contains("expectation")) {
        c.expectation = parse_enum<ExpectationMode>(j.at("expectation").get<std::string>(),
                                                    {{"exact", ExpectationMode::Exact},
                                                     {"sampled", ExpectationMode::Sampled}},
                                                    "expectation mode");
    }
    if (j.contains("classifier")) {
        c.classifier = parse_enum<ClassifierMode>(
            j.at("classifier").get<std::string>(),
            {{"exact", ClassifierMode::Exact}, {"trained", ClassifierMode::Trained}}, "classifier mode");
    }
    c.k = j.value("k", c.k);
    c.shots = j.value("shots", c.shots);
    c.learning_rate = j.value("learning_rate", c.learning_rate);
    c.epochs = j.value("epochs", c.epochs);
    c.seed = j.value("seed", c.seed);
    c.record_parameters = j.value("record_parameters", c.record_parameters);
    if (j.contains("classifier_config")) {
        const auto &cc = j.at("classifier_config");
        c.classifier_config.learning_rate = cc.value("learning_rate", c.classifier_config.learning_rate);
        c.classifier_config.epochs = cc.value("epochs", c.classifier_config.epochs);
        c.classifier_config.batch_size = cc.value("batch_size", c.classifier_config.batch_size);
        c.classifier_config.seed = cc.value("seed", c.classifier_config.seed);
    }
    if (j.contains("clamp")) {
        c.clamp.r_min = j.at("clamp").value("r_min", c.clamp.r_min);
        c.clamp.r_max = j.at("clamp").value("r_max", c.clamp.r_max);
    }
    return c;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_record_csv(std::ostream &out, const TrainRecord &record) {
    size_t directions = record.chosen.empty() ? 0 : record.chosen.front().size();
    out << "epoch,exact_tv,exact_kl,exact_kl_rev";
    for (size_t i = 0; i < directions; i++) {
        out << ",chosen_" << i;
    }
    out << "\n";
    for (size_t e = 0; e < record.epochs(); e++) {
        out << e + 1 << ',' << format_double(record.exact_tv[e]) << ',' << format_double(record.exact_kl[e]) << ','
            << format_double(record.exact_kl_rev[e]);
        for (size_t i = 0; i < directions; i++) {
            out << ',' << generator_name(record.chosen[e][i]);
        }
        out << "\n";
    }
}

nlohmann::json to_json(const TrainRecord &record) {
    nlohmann::json j = {
        {"exact_tv", record.exact_tv},
        {"exact_kl", record.exact_kl},
        {"exact_kl_rev", record.exact_kl_rev},
        {"initial_parameters", record.initial_parameters},
    };
    if (!record.parameters.empty()) {
        j["parameters"] = record.parameters;
    }
    if (!record.chosen.empty()) {
        nlohmann::json chosen = nlohmann::json::array();
        for (const auto &row : record.chosen) {
            nlohmann::json names = nlohmann::json::array();
            for (auto g : row) {
                names.push_back(std::string(generator_name(g)));
            }
            chosen.push_back(names);
        }
        j["chosen"] = chosen;
    }
    return j;
}

}  // namespace qcbm
