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

#include "qcbm/cli/experiment.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "qcbm/cli/chart.h"
#include "qcbm/fdiv/divergence.h"
#include "qcbm/ftq/estimators.h"
#include "qcbm/sim/statevector.h"
#include "qcbm/train/training.h"

namespace qcbm {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

/// Runs job(i) for i in [0, jobs) on a small pool; rethrows the first failure after joining.
void parallel_for(size_t jobs, size_t workers, const std::function<void(size_t)> &job) {
    if (workers == 0) {
        workers = std::max(1u, std::thread::hardware_concurrency());
    }
    workers = std::min(workers, jobs);
    std::atomic<size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_lock;
    auto worker = [&] {
        for (size_t i; (i = next++) < jobs;) {
            try {
                job(i);
            } catch (...) {
                std::lock_guard lock(failure_lock);
                if (!failure) {
                    failure = std::current_exception();
                }
                next = jobs;
            }
        }
    };
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (size_t w = 0; w < workers; w++) {
            pool.emplace_back(worker);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

class OutputDir {
   public:
    explicit OutputDir(RunResult &result) : result_(result) {}

    void write(const std::string &relative, const std::string &content) {
        fs::path path = result_.output / relative;
        fs::create_directories(path.parent_path());
        std::ofstream out(path, std::ios::binary);
        out << content;
        out.close();
        if (!out) {
            throw std::runtime_error("cannot write " + path.string());
        }
        result_.files.push_back(relative);
    }

   private:
    RunResult &result_;
};

/// Bootstrap summary; a single run is its own median with no spread.
BootstrapSummary summarise(const std::vector<std::vector<double>> &series, size_t resamples, uint64_t seed) {
    if (series.size() == 1) {
        return {series[0], series[0], series[0], 0};
    }
    return bootstrap_summary(series, resamples, seed);
}

void run_training_experiment(const ExperimentConfig &c, const RunOptions &options, OutputDir &out) {
    auto variants = resolved_variants(c);
    auto target = make_target(c.target, c.num_qubits);
    auto ansatz = build_ansatz(c.num_qubits, c.model_depth);
    const size_t seeds = c.seeds.size();
    std::vector<TrainRecord> records(variants.size() * seeds);
    parallel_for(records.size(), c.workers, [&](size_t job) {
        auto cfg = variants[job / seeds].training;
        cfg.seed = c.seeds[job % seeds];
        records[job] = run_training(cfg, target, ansatz);
    });

    const char *metrics[3] = {"tv", "kl", "kl_rev"};
    const char *titles[3] = {"exact TV", "exact KL(p || q)", "exact KL(q || p)"};
    std::vector<ChartSeries> charts[3];
    for (size_t v = 0; v < variants.size(); v++) {
        const auto &label = variants[v].label;
        std::vector<std::vector<double>> series[3];
        for (size_t s = 0; s < seeds; s++) {
            const auto &rec = records[v * seeds + s];
            std::string stem = label + "/seed_" + std::to_string(c.seeds[s]);
            std::ostringstream csv;
            write_record_csv(csv, rec);
            out.write(stem + ".csv", csv.str());
            out.write(stem + ".json", to_json(rec).dump(1) + "\n");
            series[0].push_back(rec.exact_tv);
            series[1].push_back(rec.exact_kl);
            series[2].push_back(rec.exact_kl_rev);
        }
        BootstrapSummary summary[3];
        for (int m = 0; m < 3; m++) {
            summary[m] = summarise(series[m], c.bootstrap_resamples, c.bootstrap_seed);
            charts[m].push_back({label, summary[m].median, summary[m].p5, summary[m].p95});
        }
        std::ostringstream csv;
        write_summary_csv(csv, summary[0], summary[1], summary[2]);
        out.write(label + "/summary.csv", csv.str());
    }
    if (options.charts) {
        for (int m = 0; m < 3; m++) {
            out.write(std::string("chart_") + metrics[m] + ".svg",
                      svg_chart(c.name + ": " + titles[m], titles[m] + std::string(" (median, 5-95%)"), charts[m]));
        }
    }
}

struct PairReport {
    double g = 0;
    double truth = 0;
    SubroutineMoments moments;
    double variance_bound = 0;
    std::vector<FtEstimate> trials;
};

PairReport run_pair(const FtSpec &ft, const FtPair &pair, uint64_t seed_base, size_t pair_index) {
    PairReport r;
    auto trial_seed = [&](size_t t) { return derive_seed(seed_base, pair_index * ft.trials + t); };
    switch (ft.estimator) {
        case FtEstimator::Pearson: {
            auto bounded = BoundedRatioPair::with_exact_bound(pair.p, pair.q, RatioBound::QOverP);
            r.g = bounded.g();
            r.truth = exact_divergence_definition(generator_spec(Generator::PearsonForward), pair.p, pair.q);
            r.moments = pearson_subroutine_moments(bounded, ft.epsilon);
            r.variance_bound = pearson_variance_bound(pair.p.size(), r.g, ft.epsilon);
            for (size_t t = 0; t < ft.trials; t++) {
                r.trials.push_back(estimate_pearson(bounded, ft.epsilon, trial_seed(t)));
            }
            break;
        }
        case FtEstimator::TotalVariation: {
            OracleDistribution p(pair.p, OracleRole::P), q(pair.q, OracleRole::Q);
            r.g = std::max(max_ratio(pair.p, pair.q), max_ratio(pair.q, pair.p));
            r.truth = exact_divergence_definition(generator_spec(Generator::TotalVariation), pair.p, pair.q);
            r.moments = tv_subroutine_moments(p, q, ft.epsilon);
            r.variance_bound = 0.25;
            for (size_t t = 0; t < ft.trials; t++) {
                r.trials.push_back(estimate_tv_quantum_sim(p, q, ft.epsilon, trial_seed(t)));
            }
            break;
        }
        case FtEstimator::KullbackLeibler: {
            auto bounded = BoundedRatioPair::with_exact_bound(pair.p, pair.q, RatioBound::POverQ);
            r.g = bounded.g();
            r.truth = exact_divergence_definition(generator_spec(Generator::KlForward), pair.p, pair.q);
            r.moments = kl_subroutine_moments(bounded, ft.epsilon);
            r.variance_bound = kl_variance_bound(r.g);
            for (size_t t = 0; t < ft.trials; t++) {
                r.trials.push_back(estimate_kl_quantum_sim(bounded, ft.epsilon, trial_seed(t)));
            }
            break;
        }
    }
    return r;
}

void run_ft_experiment(const ExperimentConfig &c, OutputDir &out) {
    auto pairs = resolved_pairs(c.ft);
    std::vector<PairReport> reports(pairs.size());
    parallel_for(pairs.size(), c.workers,
                 [&](size_t i) { reports[i] = run_pair(c.ft, pairs[i], c.seeds.front(), i); });

    std::ostringstream trials, summary;
    trials << "pair,n,trial,estimate,truth,abs_error,success,queries_to_p,queries_to_q,executions_of_a\n";
    summary << "pair,n,g,truth,subroutine_mean,subroutine_bias,subroutine_variance,variance_bound,success_rate,"
               "queries_to_p_per_execution,queries_to_q_per_execution,executions_of_a,queries_to_p,queries_to_q\n";
    for (size_t i = 0; i < reports.size(); i++) {
        const auto &r = reports[i];
        size_t n = pairs[i].p.size();
        size_t successes = 0;
        for (size_t t = 0; t < r.trials.size(); t++) {
            const auto &e = r.trials[t];
            double err = std::abs(e.estimate - r.truth);
            bool ok = err <= c.ft.epsilon;
            successes += ok;
            trials << i << ',' << n << ',' << t << ',' << format_double(e.estimate) << ',' << format_double(r.truth)
                   << ',' << format_double(err) << ',' << (ok ? 1 : 0) << ',' << e.ledger.queries_to_p << ','
                   << e.ledger.queries_to_q << ',' << e.ledger.executions_of_a << '\n';
        }
        const auto &first = r.trials.front();
        summary << i << ',' << n << ',' << format_double(r.g) << ',' << format_double(r.truth) << ','
                << format_double(r.moments.mean) << ',' << format_double(r.moments.mean - r.truth) << ','
                << format_double(r.moments.variance) << ',' << format_double(r.variance_bound) << ','
                << format_double(double(successes) / double(r.trials.size())) << ',' << first.per_execution.to_p
                << ',' << first.per_execution.to_q << ',' << first.ledger.executions_of_a << ','
                << first.ledger.queries_to_p << ',' << first.ledger.queries_to_q << '\n';
    }
    out.write("trials.csv", trials.str());
    out.write("pairs.csv", summary.str());
}

}  // namespace

DiscreteDistribution make_target(const TargetSpec &spec, size_t num_qubits) {
    if (spec.type == TargetSpec::Type::Gaussian) {
        return target_gaussian(num_qubits, spec.mean.value_or(default_gaussian_mean(num_qubits)),
                               spec.stddev.value_or(default_gaussian_stddev(num_qubits)));
    }
    auto ansatz = build_ansatz(num_qubits, spec.depth);
    Rng rng(spec.seed);
    std::vector<double> theta(ansatz.num_parameters());
    for (auto &t : theta) {
        t = (2 * uniform01(rng) - 1) * std::numbers::pi;
    }
    return model_distribution(ansatz, theta);
}

std::string regime_label(size_t num_qubits, size_t target_depth, size_t model_depth) {
    auto diff = static_cast<long>(model_depth) - static_cast<long>(target_depth);
    std::string tag = diff == 0 ? "E" : diff >= 3 ? "OO" : diff > 0 ? "O" : diff <= -3 ? "UU" : "U";
    return tag + "(" + std::to_string(build_ansatz(num_qubits, target_depth).num_parameters()) + "," +
           std::to_string(build_ansatz(num_qubits, model_depth).num_parameters()) + ")";
}

std::optional<std::string> regime_label(const ExperimentConfig &config) {
    if (config.kind == ExperimentKind::FtEstimate || config.target.type != TargetSpec::Type::QcbmRandom) {
        return std::nullopt;
    }
    return regime_label(config.num_qubits, config.target.depth, config.model_depth);
}

std::vector<FtPair> resolved_pairs(const FtSpec &spec) {
    std::vector<FtPair> out = spec.pairs;
    const auto &rp = spec.random_pairs;
    Rng rng(rp.seed);
    auto draw = [&](size_t n) {
        std::vector<double> v(n);
        double total = 0;
        for (auto &x : v) {
            x = rp.low + (rp.high - rp.low) * uniform01(rng);
            total += x;
        }
        for (auto &x : v) {
            x /= total;
        }
        return v;
    };
    for (size_t k = 0; k < rp.count; k++) {
        size_t n = rp.sizes[k % rp.sizes.size()];
        auto p = draw(n);
        auto q = draw(n);
        out.push_back({std::move(p), std::move(q)});
    }
    return out;
}

void write_summary_csv(std::ostream &out, const BootstrapSummary &tv, const BootstrapSummary &kl,
                       const BootstrapSummary &kl_rev) {
    out << "epoch";
    for (const char *m : {"tv", "kl", "kl_rev"}) {
        out << ',' << m << "_median," << m << "_p5," << m << "_p95";
    }
    out << '\n';
    for (size_t e = 0; e < tv.median.size(); e++) {
        out << e + 1;
        for (const auto *s : {&tv, &kl, &kl_rev}) {
            out << ',' << format_double(s->median[e]) << ',' << format_double(s->p5[e]) << ','
                << format_double(s->p95[e]);
        }
        out << '\n';
    }
}

RunResult run_experiment(const ExperimentConfig &config, const RunOptions &options) {
    validate(config);
    auto start = std::chrono::steady_clock::now();
    RunResult result;
    result.output = config.output;
    fs::create_directories(result.output);
    OutputDir out(result);
    if (!options.dry_run) {
        if (config.kind == ExperimentKind::FtEstimate) {
            run_ft_experiment(config, out);
        } else {
            run_training_experiment(config, options, out);
        }
    }
    result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    json manifest{
        {"tool", "qcbm_lab"},
        {"version", QCBM_VERSION},
        {"config", to_json(config)},
        {"dry_run", options.dry_run},
        {"wall_time_seconds", result.wall_seconds},
        {"files", result.files},
    };
    auto regime = regime_label(config);
    manifest["regime"] = regime ? json(*regime) : json(nullptr);
    if (config.kind != ExperimentKind::FtEstimate) {
        manifest["target_distribution"] = to_json(make_target(config.target, config.num_qubits));
    }
    out.write("manifest.json", manifest.dump(2) + "\n");
    return result;
}

}  // namespace qcbm
