#include "swarmselect/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <future>
#include <stdexcept>
#include <tuple>

#include "swarmselect/error.hpp"

namespace swarmselect {

namespace {

constexpr std::uint64_t kSplitKey = 0x5b117;
constexpr std::uint64_t kCvKey = 0xcf01d;

std::size_t env_threads() {
    if (const char* raw = std::getenv("SWARMSELECT_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(raw, &end, 10);
        if (end != raw && v > 0) return static_cast<std::size_t>(v);
    }
    return 1;
}

std::vector<std::size_t> merged(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    std::vector<std::size_t> out;
    out.reserve(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

struct Attempt {
    SelectionResult selection;
    double validation_accuracy = 0.0;
    double gate_cv = 0.0;
};

bool attempt_better(const Attempt& a, const Attempt& b) {
    return std::tie(a.validation_accuracy, a.gate_cv, a.selection.best_fitness) >
           std::tie(b.validation_accuracy, b.gate_cv, b.selection.best_fitness);
}

}  // namespace

void GridConfig::validate() const {
    if (rankers.empty() || selectors.empty() || classifiers.empty()) throw ConfigError("grid has no combinations");
    auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!in_unit(accuracy_gate) || !in_unit(cv_gate)) throw ConfigError("gates must lie in [0, 1]");
    if (!in_unit(fitness_weight)) throw ConfigError("fitness weight must lie in [0, 1]");
    if (!(train_frac > 0.0 && validate_frac > 0.0 && train_frac + validate_frac < 1.0)) {
        throw ConfigError("split fractions must be positive and leave room for a test partition");
    }
    if (cv_k < 2) throw ConfigError("cv_k must be >= 2");
    if (max_attempts < 1) throw ConfigError("max_attempts must be >= 1");
    if (fitness_rf_trees && *fitness_rf_trees < 1) throw ConfigError("fitness_rf_trees must be >= 1");
    classifier.validate();
}

std::string CombinationResult::name() const {
    return to_string(ranker) + "/" + to_string(selector) + "/" + to_string(classifier);
}

SplitIndices grid_split(const Dataset& d, const GridConfig& cfg) {
    return split(d, cfg.train_frac, cfg.validate_frac, derive_seed(cfg.seed, kSplitKey));
}

std::uint64_t combination_seed(std::uint64_t master_seed, std::size_t index) { return derive_seed(master_seed, index); }

CombinationResult run_combination(RankMethod ranker, Algorithm selector, ClassifierKind classifier, const Dataset& d,
                                  const GridConfig& cfg, std::uint64_t seed,
                                  const std::optional<SplitIndices>& split_in) {
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    const SplitIndices parts = split_in ? *split_in : grid_split(d, cfg);
    const auto seen = merged(parts.train, parts.validate);
    const Dataset seen_data = d.subset_rows(seen);
    const std::size_t total = d.cols();

    CombinationResult out;
    out.ranker = ranker;
    out.selector = selector;
    out.classifier = classifier;
    out.seed = seed;

    ClassifierSpec spec = cfg.classifier;
    spec.kind = classifier;
    spec.seed = seed;
    ClassifierSpec fit_spec = spec;
    if (cfg.fitness_classifier) fit_spec.kind = *cfg.fitness_classifier;
    if (cfg.fitness_rf_trees) fit_spec.rf_trees = *cfg.fitness_rf_trees;

    const auto ranked = rank_features(seen_data, ranker, seed);

    SelectorConfig sel = cfg.selector;
    sel.algorithm = selector;
    if (!sel.leading_mask) sel.leading_mask = leading_mask(ranked);

    auto fitness_fn = [&](const FeatureMask& mask) {
        const auto cm = evaluate_masked(fit_spec, d, parts.train, parts.validate, mask);
        return fitness(cm, mask, total, cfg.fitness_weight).value;
    };

    std::optional<Attempt> best;
    for (std::size_t attempt = 0; attempt < cfg.max_attempts; ++attempt) {
        sel.seed = derive_seed(seed, attempt);
        Attempt current;
        current.selection = run_selector(sel, total, fitness_fn);
        const auto& mask = current.selection.best_mask;
        const auto val_cm = evaluate_masked(spec, d, parts.train, parts.validate, mask);
        current.validation_accuracy = metrics(val_cm).accuracy;
        current.gate_cv = cross_validate(spec, seen_data, mask, cfg.cv_k, derive_seed(cfg.seed, kCvKey)).mean;
        ++out.attempts;
        out.evaluations += current.selection.evaluations;
        const bool passed = current.validation_accuracy >= cfg.accuracy_gate && current.gate_cv >= cfg.cv_gate;
        if (!best || attempt_better(current, *best)) best = std::move(current);
        if (passed) {
            out.gates_passed = true;
            break;
        }
    }

    const auto& mask = best->selection.best_mask;
    out.selected_mask = mask;
    out.n_selected = mask.popcount();
    out.feature_reduction = feature_reduction(mask, total);
    out.fitness = best->selection.best_fitness;
    out.validation_accuracy = best->validation_accuracy;
    out.gate_cv_mean = best->gate_cv;

    out.test_metrics = metrics(evaluate_masked(spec, d, seen, parts.test, mask));
    const auto cv = cross_validate(spec, d, mask, cfg.cv_k, derive_seed(cfg.seed, kCvKey));
    out.cv_mean = cv.mean;
    out.cv_std = cv.stddev;

    out.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

std::vector<CombinationResult> run_grid(const Dataset& d, const GridConfig& cfg,
                                        const std::optional<SplitIndices>& split_in) {
    cfg.validate();
    const SplitIndices parts = split_in ? *split_in : grid_split(d, cfg);

    struct Job {
        RankMethod ranker;
        Algorithm selector;
        ClassifierKind classifier;
    };
    std::vector<Job> jobs;
    for (auto r : cfg.rankers)
        for (auto s : cfg.selectors)
            for (auto c : cfg.classifiers) jobs.push_back({r, s, c});

    std::vector<CombinationResult> results(jobs.size());
    auto run_one = [&](std::size_t i) {
        const auto& job = jobs[i];
        const auto seed = combination_seed(cfg.seed, i);
        try {
            results[i] = run_combination(job.ranker, job.selector, job.classifier, d, cfg, seed, parts);
        } catch (const std::exception& e) {
            auto& r = results[i];
            r = CombinationResult{};
            r.ranker = job.ranker;
            r.selector = job.selector;
            r.classifier = job.classifier;
            r.seed = seed;
            r.failed = true;
            r.error = e.what();
        }
    };

    const std::size_t workers = std::min(jobs.size(), cfg.threads ? cfg.threads : env_threads());
    if (workers <= 1) {
        for (std::size_t i = 0; i < jobs.size(); ++i) run_one(i);
        return results;
    }
    // workers take interleaved slices; each result lands in its own slot
    std::vector<std::future<void>> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.push_back(std::async(std::launch::async, [&, w] {
            for (std::size_t i = w; i < jobs.size(); i += workers) run_one(i);
        }));
    }
    for (auto& f : pool) f.get();
    return results;
}

bool better_result(const CombinationResult& a, const CombinationResult& b) {
    if (a.test_metrics.accuracy != b.test_metrics.accuracy) return a.test_metrics.accuracy > b.test_metrics.accuracy;
    if (a.n_selected != b.n_selected) return a.n_selected < b.n_selected;
    if (a.cv_std != b.cv_std) return a.cv_std < b.cv_std;
    return a.name() < b.name();
}

const CombinationResult& select_best(const std::vector<CombinationResult>& results) {
    const CombinationResult* best = nullptr;
    for (const auto& r : results) {
        if (r.failed) continue;
        if (!best || better_result(r, *best)) best = &r;
    }
    if (!best) throw std::runtime_error("every combination failed");
    return *best;
}

}  // namespace swarmselect
