#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "swarmselect/classifiers.hpp"
#include "swarmselect/confusion.hpp"
#include "swarmselect/dataset.hpp"
#include "swarmselect/feature_mask.hpp"

namespace swarmselect {

struct MetricsReport {
    double accuracy = 0.0;
    double recall_autism = 0.0;
    double recall_typical = 0.0;
    double precision_autism = 0.0;
    double precision_typical = 0.0;
    double f1_autism = 0.0;
    double f1_typical = 0.0;
    /// One entry per metric that hit a 0/0 and was reported as 0.
    std::vector<std::string> warnings;
};

/// Throws ConfigError on an empty matrix.
MetricsReport metrics(const ConfusionMatrix& cm);

struct FitnessValue {
    double value = 0.0;
    double accuracy_part = 0.0;   // raw accuracy
    double reduction_part = 0.0;  // raw (total - selected) / total
    double weight = 0.8;
};

inline constexpr double kDefaultFitnessWeight = 0.8;

/// weight * accuracy + (1 - weight) * (total - selected) / total.
FitnessValue fitness(double accuracy, std::size_t selected, std::size_t total,
                     double weight = kDefaultFitnessWeight);
FitnessValue fitness(const ConfusionMatrix& cm, const FeatureMask& mask, std::size_t total_features,
                     double weight = kDefaultFitnessWeight);

double feature_reduction(std::size_t selected, std::size_t total);
double feature_reduction(const FeatureMask& mask, std::size_t total);

/// Fraction rendered as a percentage truncated (not rounded) to `decimals`
/// places, the way the published result tables print them: 0.698173 ->
/// "69.81%".
std::string format_percent(double fraction, int decimals = 2);

/// Rounds half away from zero at `decimals` places.
double round_half_up(double value, int decimals);

struct CrossValidation {
    std::vector<double> accuracies;
    double mean = 0.0;
    double stddev = 0.0;  // population standard deviation over folds
    std::vector<std::string> warnings;
};

using FoldEvaluator =
    std::function<ConfusionMatrix(std::span<const std::size_t> train_rows, std::span<const std::size_t> test_rows)>;

CrossValidation cross_validate(const Dataset& d, std::size_t k, std::uint64_t seed, const FoldEvaluator& evaluate);

/// Stratified k-fold accuracy of `spec` restricted to `mask`; scaling is
/// refit on each training fold.
CrossValidation cross_validate(const ClassifierSpec& spec, const Dataset& d, const FeatureMask& mask, std::size_t k,
                               std::uint64_t seed);

}  // namespace swarmselect
