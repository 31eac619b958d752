#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "swarmselect/classifiers.hpp"
#include "swarmselect/dataset.hpp"
#include "swarmselect/evaluation.hpp"
#include "swarmselect/metaheuristics.hpp"
#include "swarmselect/ranking.hpp"

namespace swarmselect {

struct GridConfig {
    std::vector<RankMethod> rankers{RankMethod::pearson, RankMethod::spearman, RankMethod::relief};
    std::vector<Algorithm> selectors{std::begin(kAllAlgorithms), std::end(kAllAlgorithms)};
    std::vector<ClassifierKind> classifiers{ClassifierKind::knn, ClassifierKind::rf, ClassifierKind::svm};

    /// Algorithm and seed are set per combination. A preset leading_mask
    /// replaces the ranking's top-half seed.
    SelectorConfig selector;
    ClassifierSpec classifier;    // kind and seed are set per combination
    /// Classifier used inside the wrapper fitness. Empty means the
    /// combination's own classifier; set it to knn for a cheap surrogate.
    std::optional<ClassifierKind> fitness_classifier;
    /// Tree count for RF while it serves as the wrapper fitness. Empty
    /// means classifier.rf_trees.
    std::optional<std::size_t> fitness_rf_trees;
    double fitness_weight = kDefaultFitnessWeight;

    double train_frac = 0.8;
    double validate_frac = 0.1;
    std::size_t cv_k = 10;
    double accuracy_gate = 0.85;
    double cv_gate = 0.85;
    std::size_t max_attempts = 3;
    std::uint64_t seed = 42;
    /// Combinations run concurrently on this many workers. 0 reads
    /// SWARMSELECT_THREADS, falling back to 1.
    std::size_t threads = 0;

    void validate() const;
    std::size_t size() const { return rankers.size() * selectors.size() * classifiers.size(); }
};

struct CombinationResult {
    RankMethod ranker = RankMethod::pearson;
    Algorithm selector = Algorithm::gsa;
    ClassifierKind classifier = ClassifierKind::knn;
    FeatureMask selected_mask;
    std::size_t n_selected = 0;
    double feature_reduction = 0.0;
    MetricsReport test_metrics;
    double cv_mean = 0.0;
    double cv_std = 0.0;
    double fitness = 0.0;        // best wrapper fitness on the validation rows
    double validation_accuracy = 0.0;
    double gate_cv_mean = 0.0;   // CV over train + validate rows, used by the gates
    std::size_t evaluations = 0;
    std::size_t attempts = 0;
    bool gates_passed = false;
    bool failed = false;
    std::string error;
    double wall_time = 0.0;      // seconds
    std::uint64_t seed = 0;

    /// "ranker/selector/classifier"
    std::string name() const;
};

/// The split every combination of a grid shares.
SplitIndices grid_split(const Dataset& d, const GridConfig& cfg);

/// Seed of the combination at `index` in grid order.
std::uint64_t combination_seed(std::uint64_t master_seed, std::size_t index);

/// Runs one (ranker, selector, classifier) triple. Ranking, selection and
/// gating see only the train and validate rows of `split`; the test rows are
/// touched once, to score the final model. `split` defaults to grid_split().
/// Throws on any failure.
CombinationResult run_combination(RankMethod ranker, Algorithm selector, ClassifierKind classifier, const Dataset& d,
                                  const GridConfig& cfg, std::uint64_t seed,
                                  const std::optional<SplitIndices>& split = std::nullopt);

/// Every combination in (ranker, selector, classifier) order. A combination
/// that throws is returned with failed = true.
std::vector<CombinationResult> run_grid(const Dataset& d, const GridConfig& cfg,
                                        const std::optional<SplitIndices>& split = std::nullopt);

/// True when `a` ranks ahead of `b`: higher test accuracy, then fewer
/// features, then lower cv_std, then name.
bool better_result(const CombinationResult& a, const CombinationResult& b);

/// Throws std::runtime_error when every result failed.
const CombinationResult& select_best(const std::vector<CombinationResult>& results);

}  // namespace swarmselect
