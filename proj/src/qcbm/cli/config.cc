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

#include "qcbm/cli/config.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "qcbm/fdiv/generators.h"

namespace qcbm {

namespace {

using nlohmann::json;

std::string escape_pointer_token(const std::string &token) {
    std::string out;
    for (char c : token) {
        if (c == '~') {
            out += "~0";
        } else if (c == '/') {
            out += "~1";
        } else {
            out += c;
        }
    }
    return out;
}

/// Walks syntactically valid JSON text, noting the line where each member starts.
class Scanner {
   public:
    Scanner(const std::string &text, std::map<std::string, size_t> &lines) : text_(text), lines_(lines) {}

    void run() {
        skip_space();
        value("");
    }

   private:
    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            if (text_[pos_] == '\n') {
                line_++;
            }
            pos_++;
        }
    }

    std::string string_token() {
        std::string out;
        pos_++;
        while (pos_ < text_.size() && text_[pos_] != '"') {
            if (text_[pos_] == '\\') {
                pos_++;
            }
            out += text_[pos_++];
        }
        pos_++;
        return out;
    }

    void value(const std::string &pointer) {
        lines_.try_emplace(pointer, line_);
        if (pos_ >= text_.size()) {
            return;
        }
        char c = text_[pos_];
        if (c == '{') {
            pos_++;
            skip_space();
            while (pos_ < text_.size() && text_[pos_] != '}') {
                size_t key_line = line_;
                std::string child = pointer + "/" + escape_pointer_token(string_token());
                lines_[child] = key_line;
                skip_space();
                pos_++;  // ':'
                skip_space();
                value(child);
                skip_space();
                if (pos_ < text_.size() && text_[pos_] == ',') {
                    pos_++;
                    skip_space();
                }
            }
            pos_++;
        } else if (c == '[') {
            pos_++;
            skip_space();
            size_t index = 0;
            while (pos_ < text_.size() && text_[pos_] != ']') {
                value(pointer + "/" + std::to_string(index++));
                skip_space();
                if (pos_ < text_.size() && text_[pos_] == ',') {
                    pos_++;
                    skip_space();
                }
            }
            pos_++;
        } else if (c == '"') {
            string_token();
        } else {
            while (pos_ < text_.size() && std::string_view(",}] \t\r\n").find(text_[pos_]) == std::string_view::npos) {
                pos_++;
            }
        }
    }

    const std::string &text_;
    std::map<std::string, size_t> &lines_;
    size_t pos_ = 0;
    size_t line_ = 1;
};

class Reader {
   public:
    /// `prefix` locates the parsed object inside the indexed document.
    Reader(const LineIndex *index, std::string source, std::string prefix = "")
        : index_(index), source_(std::move(source)), prefix_(std::move(prefix)) {}

    [[noreturn]] void fail(const std::string &pointer, const std::string &message) const {
        throw ConfigError(source_, index_ ? index_->line_of(prefix_ + pointer) : 0,
                          (pointer.empty() ? std::string("document") : pointer) + ": " + message);
    }

    template <typename T>
    T get(const json &j, const std::string &pointer) const {
        try {
            return j.get<T>();
        } catch (const json::exception &e) {
            fail(pointer, std::string("wrong type (") + j.type_name() + ")");
        }
    }

    void require_object(const json &j, const std::string &pointer) const {
        if (!j.is_object()) {
            fail(pointer, "expected an object");
        }
    }

    void check_keys(const json &j, const std::string &pointer, std::initializer_list<const char *> known) const {
        require_object(j, pointer);
        for (const auto &[key, _] : j.items()) {
            bool found = false;
            for (const char *k : known) {
                found = found || key == k;
            }
            if (!found) {
                fail(pointer + "/" + escape_pointer_token(key), "unknown field '" + key + "'");
            }
        }
    }

    size_t positive(const json &j, const std::string &pointer) const {
        if (!j.is_number_integer() || j.get<int64_t>() <= 0) {
            fail(pointer, "expected a positive integer");
        }
        return j.get<size_t>();
    }

    size_t non_negative(const json &j, const std::string &pointer) const {
        if (!j.is_number_integer() || j.get<int64_t>() < 0) {
            fail(pointer, "expected a non-negative integer");
        }
        return j.get<size_t>();
    }

    /// Training settings, checked member by member so errors point at the offending line.
    TrainConfig training(const json &j, const std::string &pointer) const {
        require_object(j, pointer);
        for (const auto &[key, value] : j.items()) {
            try {
                train_config_from_json(json{{key, value}});
            } catch (const std::exception &e) {
                fail(pointer + "/" + escape_pointer_token(key), e.what());
            }
        }
        try {
            return train_config_from_json(j);
        } catch (const std::exception &e) {
            fail(pointer, e.what());
        }
    }

   private:
    const LineIndex *index_;
    std::string source_;
    std::string prefix_;
};

ExperimentKind parse_kind(const Reader &r, const json &j, const std::string &pointer) {
    auto name = r.get<std::string>(j, pointer);
    for (auto k : {ExperimentKind::FSwitch, ExperimentKind::FLocal, ExperimentKind::FtEstimate,
                   ExperimentKind::SingleDivergence}) {
        if (experiment_kind_name(k) == name) {
            return k;
        }
    }
    r.fail(pointer, "unknown experiment kind '" + name + "'");
}

TargetSpec parse_target(const Reader &r, const json &j, const std::string &pointer) {
    r.check_keys(j, pointer, {"type", "depth", "seed", "mean", "std"});
    TargetSpec t;
    if (j.contains("type")) {
        auto type = r.get<std::string>(j["type"], pointer + "/type");
        if (type == "qcbm_random") {
            t.type = TargetSpec::Type::QcbmRandom;
        } else if (type == "gaussian") {
            t.type = TargetSpec::Type::Gaussian;
        } else {
            r.fail(pointer + "/type", "unknown target type '" + type + "'");
        }
    }
    bool gaussian = t.type == TargetSpec::Type::Gaussian;
    for (const char *k : {"depth", "seed"}) {
        if (gaussian && j.contains(k)) {
            r.fail(pointer + "/" + k, std::string("'") + k + "' only applies to qcbm_random targets");
        }
    }
    for (const char *k : {"mean", "std"}) {
        if (!gaussian && j.contains(k)) {
            r.fail(pointer + "/" + k, std::string("'") + k + "' only applies to gaussian targets");
        }
    }
    if (j.contains("depth")) {
        t.depth = r.non_negative(j["depth"], pointer + "/depth");
    }
    if (j.contains("seed")) {
        t.seed = r.non_negative(j["seed"], pointer + "/seed");
    }
    if (j.contains("mean")) {
        t.mean = r.get<double>(j["mean"], pointer + "/mean");
    }
    if (j.contains("std")) {
        t.stddev = r.get<double>(j["std"], pointer + "/std");
        if (!(*t.stddev > 0)) {
            r.fail(pointer + "/std", "standard deviation must be positive");
        }
    }
    return t;
}

std::vector<double> probability_vector(const Reader &r, const json &j, const std::string &pointer) {
    auto v = r.get<std::vector<double>>(j, pointer);
    double total = 0;
    for (double x : v) {
        if (!(x >= 0)) {
            r.fail(pointer, "probabilities must be non-negative");
        }
        total += x;
    }
    if (v.empty() || std::abs(total - 1) > 1e-10) {
        r.fail(pointer, "probabilities must sum to 1");
    }
    return v;
}

FtSpec parse_ft(const Reader &r, const json &j, const std::string &pointer) {
    r.check_keys(j, pointer, {"estimator", "epsilon", "trials", "pairs", "random_pairs"});
    FtSpec ft;
    if (j.contains("estimator")) {
        auto name = r.get<std::string>(j["estimator"], pointer + "/estimator");
        bool found = false;
        for (auto e : {FtEstimator::Pearson, FtEstimator::TotalVariation, FtEstimator::KullbackLeibler}) {
            if (ft_estimator_name(e) == name) {
                ft.estimator = e;
                found = true;
            }
        }
        if (!found) {
            r.fail(pointer + "/estimator", "unknown estimator '" + name + "' (pearson, tv, kl)");
        }
    }
    if (j.contains("epsilon")) {
        ft.epsilon = r.get<double>(j["epsilon"], pointer + "/epsilon");
        if (!(ft.epsilon > 0) || !std::isfinite(ft.epsilon)) {
            r.fail(pointer + "/epsilon", "epsilon must be positive");
        }
    }
    if (j.contains("trials")) {
        ft.trials = r.positive(j["trials"], pointer + "/trials");
    }
    if (j.contains("pairs")) {
        const auto &pairs = j["pairs"];
        if (!pairs.is_array()) {
            r.fail(pointer + "/pairs", "expected an array");
        }
        for (size_t i = 0; i < pairs.size(); i++) {
            std::string at = pointer + "/pairs/" + std::to_string(i);
            r.check_keys(pairs[i], at, {"p", "q"});
            if (!pairs[i].contains("p") || !pairs[i].contains("q")) {
                r.fail(at, "a pair needs both 'p' and 'q'");
            }
            FtPair pair{probability_vector(r, pairs[i]["p"], at + "/p"), probability_vector(r, pairs[i]["q"], at + "/q")};
            if (pair.p.size() != pair.q.size()) {
                r.fail(at, "'p' and 'q' have different lengths");
            }
            ft.pairs.push_back(std::move(pair));
        }
    }
    if (j.contains("random_pairs")) {
        std::string at = pointer + "/random_pairs";
        const auto &rp = j["random_pairs"];
        r.check_keys(rp, at, {"count", "sizes", "seed", "low", "high"});
        auto &s = ft.random_pairs;
        if (rp.contains("count")) {
            s.count = r.non_negative(rp["count"], at + "/count");
        }
        if (rp.contains("sizes")) {
            s.sizes.clear();
            if (!rp["sizes"].is_array() || rp["sizes"].empty()) {
                r.fail(at + "/sizes", "expected a non-empty array");
            }
            for (size_t i = 0; i < rp["sizes"].size(); i++) {
                s.sizes.push_back(r.positive(rp["sizes"][i], at + "/sizes/" + std::to_string(i)));
            }
        }
        if (rp.contains("seed")) {
            s.seed = r.non_negative(rp["seed"], at + "/seed");
        }
        if (rp.contains("low")) {
            s.low = r.get<double>(rp["low"], at + "/low");
        }
        if (rp.contains("high")) {
            s.high = r.get<double>(rp["high"], at + "/high");
        }
        if (!(s.low > 0) || !(s.high >= s.low) || !std::isfinite(s.high)) {
            r.fail(at, "need 0 < low <= high");
        }
    }
    return ft;
}

void check_label(const Reader &r, const std::string &label, const std::string &pointer) {
    if (label.empty() || label == "." || label == "..") {
        r.fail(pointer, "label must be a non-empty name");
    }
    for (char c : label) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-' && c != '.') {
            r.fail(pointer, "label '" + label + "' may only use letters, digits, '_', '-' and '.'");
        }
    }
}

ExperimentConfig parse(const json &doc, const Reader &r) {
    r.check_keys(doc, "",
                 {"kind", "name", "num_qubits", "target", "model_depth", "training", "variants", "seeds", "output",
                  "workers", "bootstrap_resamples", "bootstrap_seed", "ft"});
    ExperimentConfig c;
    if (doc.contains("kind")) {
        c.kind = parse_kind(r, doc["kind"], "/kind");
    }
    if (doc.contains("name")) {
        c.name = r.get<std::string>(doc["name"], "/name");
    }
    if (doc.contains("num_qubits")) {
        c.num_qubits = r.positive(doc["num_qubits"], "/num_qubits");
        if (c.num_qubits > 16) {
            r.fail("/num_qubits", "at most 16 qubits are supported");
        }
    }
    if (doc.contains("target")) {
        c.target = parse_target(r, doc["target"], "/target");
    }
    if (doc.contains("model_depth")) {
        c.model_depth = r.non_negative(doc["model_depth"], "/model_depth");
    }
    json base = json::object();
    if (doc.contains("training")) {
        base = doc["training"];
        c.training = r.training(base, "/training");
        try {
            c.training.validate(c.num_qubits);
        } catch (const std::exception &e) {
            r.fail("/training", e.what());
        }
    }
    if (doc.contains("variants")) {
        const auto &vs = doc["variants"];
        if (!vs.is_array() || vs.empty()) {
            r.fail("/variants", "expected a non-empty array");
        }
        std::set<std::string> labels;
        for (size_t i = 0; i < vs.size(); i++) {
            std::string at = "/variants/" + std::to_string(i);
            r.check_keys(vs[i], at, {"label", "training"});
            if (!vs[i].contains("label")) {
                r.fail(at, "a variant needs a 'label'");
            }
            Variant v;
            v.label = r.get<std::string>(vs[i]["label"], at + "/label");
            check_label(r, v.label, at + "/label");
            if (!labels.insert(v.label).second) {
                r.fail(at + "/label", "duplicate variant label '" + v.label + "'");
            }
            json merged = base;
            if (vs[i].contains("training")) {
                r.require_object(vs[i]["training"], at + "/training");
                r.training(vs[i]["training"], at + "/training");
                merged.merge_patch(vs[i]["training"]);
            }
            v.training = r.training(merged, at + "/training");
            try {
                v.training.validate(c.num_qubits);
            } catch (const std::exception &e) {
                r.fail(at + "/training", e.what());
            }
            c.variants.push_back(std::move(v));
        }
    }
    if (doc.contains("seeds")) {
        const auto &s = doc["seeds"];
        c.seeds.clear();
        if (!s.is_array() || s.empty()) {
            r.fail("/seeds", "expected a non-empty array of seeds");
        }
        std::set<uint64_t> seen;
        for (size_t i = 0; i < s.size(); i++) {
            uint64_t seed = r.non_negative(s[i], "/seeds/" + std::to_string(i));
            if (!seen.insert(seed).second) {
                r.fail("/seeds/" + std::to_string(i), "duplicate seed " + std::to_string(seed));
            }
            c.seeds.push_back(seed);
        }
    }
    if (doc.contains("output")) {
        c.output = r.get<std::string>(doc["output"], "/output");
        if (c.output.empty()) {
            r.fail("/output", "output directory must not be empty");
        }
    }
    if (doc.contains("workers")) {
        c.workers = r.non_negative(doc["workers"], "/workers");
    }
    if (doc.contains("bootstrap_resamples")) {
        c.bootstrap_resamples = r.positive(doc["bootstrap_resamples"], "/bootstrap_resamples");
    }
    if (doc.contains("bootstrap_seed")) {
        c.bootstrap_seed = r.non_negative(doc["bootstrap_seed"], "/bootstrap_seed");
    }
    if (doc.contains("ft")) {
        c.ft = parse_ft(r, doc["ft"], "/ft");
    }
    if (c.kind == ExperimentKind::FtEstimate) {
        if (c.ft.pairs.empty() && c.ft.random_pairs.count == 0) {
            r.fail(doc.contains("ft") ? "/ft" : "", "an ft_estimate experiment needs 'pairs' or 'random_pairs'");
        }
    } else {
        if (doc.contains("ft")) {
            r.fail("/ft", "'ft' only applies to ft_estimate experiments");
        }
        if (c.kind == ExperimentKind::FLocal && c.num_qubits < 2) {
            r.fail("/num_qubits", "f_local needs at least 2 qubits");
        }
        if (c.target.type == TargetSpec::Type::Gaussian && c.target.mean &&
            (*c.target.mean < 0 || *c.target.mean > std::ldexp(1.0, static_cast<int>(c.num_qubits)) - 1)) {
            r.fail("/target/mean", "mean lies outside the outcome range");
        }
    }
    return c;
}

json target_json(const TargetSpec &t) {
    if (t.type == TargetSpec::Type::QcbmRandom) {
        return {{"type", "qcbm_random"}, {"depth", t.depth}, {"seed", t.seed}};
    }
    json j{{"type", "gaussian"}};
    if (t.mean) {
        j["mean"] = *t.mean;
    }
    if (t.stddev) {
        j["std"] = *t.stddev;
    }
    return j;
}

}  // namespace

std::string experiment_kind_name(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::FSwitch:
            return "f_switch";
        case ExperimentKind::FLocal:
            return "f_local";
        case ExperimentKind::FtEstimate:
            return "ft_estimate";
        case ExperimentKind::SingleDivergence:
            return "single_divergence";
    }
    return "unknown";
}

std::string ft_estimator_name(FtEstimator e) {
    switch (e) {
        case FtEstimator::Pearson:
            return "pearson";
        case FtEstimator::TotalVariation:
            return "tv";
        case FtEstimator::KullbackLeibler:
            return "kl";
    }
    return "unknown";
}

ConfigError::ConfigError(const std::string &source, size_t line, const std::string &message)
    : std::runtime_error(line > 0 ? source + ":" + std::to_string(line) + ": " + message : source + ": " + message),
      line_(line) {}

LineIndex::LineIndex(const std::string &text) {
    Scanner(text, lines_).run();
}

size_t LineIndex::line_of(const std::string &pointer) const {
    std::string p = pointer;
    while (true) {
        auto it = lines_.find(p);
        if (it != lines_.end()) {
            return it->second;
        }
        auto slash = p.rfind('/');
        if (slash == std::string::npos) {
            return 1;
        }
        p.resize(slash);
    }
}

ExperimentConfig parse_experiment_config(const std::string &text, const std::string &source) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error &e) {
        size_t end = std::min(e.byte > 0 ? e.byte - 1 : 0, text.size());
        size_t line = 1 + static_cast<size_t>(std::count(text.begin(), text.begin() + static_cast<ptrdiff_t>(end), '\n'));
        std::string what = e.what();
        throw ConfigError(source, line, "invalid JSON (" + what.substr(what.find(':') + 2) + ")");
    }
    LineIndex index(text);
    if (doc.is_object() && doc.contains("config") && doc.contains("version")) {
        return parse(doc["config"], Reader(&index, source, "/config"));
    }
    return parse(doc, Reader(&index, source));
}

ExperimentConfig load_experiment_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(path, 0, "cannot read file");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_experiment_config(buffer.str(), path);
}

void validate(const ExperimentConfig &config) {
    parse(to_json(config), Reader(nullptr, "config"));
}

std::vector<Variant> resolved_variants(const ExperimentConfig &c) {
    if (!c.variants.empty() || c.kind == ExperimentKind::FtEstimate) {
        return c.variants;
    }
    std::vector<Variant> out;
    switch (c.kind) {
        case ExperimentKind::FSwitch: {
            Variant sw{"f_switch", c.training};
            sw.training.heuristic = Heuristic::FSwitch;
            if (c.training.heuristic != Heuristic::FSwitch) {
                sw.training.generators.clear();
                for (const auto &g : generator_registry()) {
                    sw.training.generators.push_back(g.id);
                }
            }
            Variant tv{"tv", c.training};
            tv.training.heuristic = Heuristic::Single;
            tv.training.generators = {Generator::TotalVariation};
            out = {sw, tv};
            break;
        }
        case ExperimentKind::FLocal: {
            auto single = c.training;
            if (single.generators.size() != 1) {
                single.generators = {Generator::KlReverse};
            }
            for (size_t k = 1; k < c.num_qubits; k++) {
                Variant v{"k" + std::to_string(k), single};
                v.training.heuristic = Heuristic::KLocal;
                v.training.k = k;
                out.push_back(v);
            }
            Variant global{"global", single};
            global.training.heuristic = Heuristic::Single;
            out.push_back(global);
            break;
        }
        default:
            out = {{"run", c.training}};
    }
    return out;
}

json to_json(const ExperimentConfig &c) {
    json j{
        {"kind", experiment_kind_name(c.kind)},
        {"name", c.name},
        {"num_qubits", c.num_qubits},
        {"seeds", c.seeds},
        {"output", c.output},
        {"workers", c.workers},
    };
    if (c.kind == ExperimentKind::FtEstimate) {
        json pairs = json::array();
        for (const auto &p : c.ft.pairs) {
            pairs.push_back({{"p", p.p}, {"q", p.q}});
        }
        const auto &rp = c.ft.random_pairs;
        j["ft"] = {
            {"estimator", ft_estimator_name(c.ft.estimator)},
            {"epsilon", c.ft.epsilon},
            {"trials", c.ft.trials},
            {"pairs", pairs},
            {"random_pairs",
             {{"count", rp.count}, {"sizes", rp.sizes}, {"seed", rp.seed}, {"low", rp.low}, {"high", rp.high}}},
        };
        return j;
    }
    j["target"] = target_json(c.target);
    j["model_depth"] = c.model_depth;
    j["training"] = to_json(c.training);
    json variants = json::array();
    for (const auto &v : resolved_variants(c)) {
        variants.push_back({{"label", v.label}, {"training", to_json(v.training)}});
    }
    j["variants"] = variants;
    j["bootstrap_resamples"] = c.bootstrap_resamples;
    j["bootstrap_seed"] = c.bootstrap_seed;
    return j;
}

}  // namespace qcbm
