#include "swarmselect/evaluation.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>

#include "swarmselect/error.hpp"

namespace swarmselect {

namespace {

double ratio(std::size_t num, std::size_t den, const char* name, std::vector<std::string>& warnings) {
    if (den == 0) {
        warnings.emplace_back(std::string(name) + ": 0/0 reported as 0");
        return 0.0;
    }
    return static_cast<double>(num) / static_cast<double>(den);
}

double harmonic(double precision, double recall, const char* name, std::vector<std::string>& warnings) {
    if (precision + recall == 0.0) {
        warnings.emplace_back(std::string(name) + ": 0/0 reported as 0");
        return 0.0;
    }
    return 2.0 * precision * recall / (precision + recall);
}

}  // namespace

MetricsReport metrics(const ConfusionMatrix& cm) {
    if (cm.total() == 0) throw ConfigError("metrics of an empty confusion matrix");
    MetricsReport m;
    m.accuracy = static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());
    m.recall_autism = ratio(cm.tp, cm.tp + cm.fn, "recall_autism", m.warnings);
    m.precision_autism = ratio(cm.tp, cm.tp + cm.fp, "precision_autism", m.warnings);
    m.f1_autism = harmonic(m.precision_autism, m.recall_autism, "f1_autism", m.warnings);
    // typical development is the positive class of the swapped matrix
    m.recall_typical = ratio(cm.tn, cm.tn + cm.fp, "recall_typical", m.warnings);
    m.precision_typical = ratio(cm.tn, cm.tn + cm.fn, "precision_typical", m.warnings);
    m.f1_typical = harmonic(m.precision_typical, m.recall_typical, "f1_typical", m.warnings);
    return m;
}

FitnessValue fitness(double accuracy, std::size_t selected, std::size_t total, double weight) {
    if (!(weight >= 0.0 && weight <= 1.0)) throw ConfigError("fitness weight must lie in [0, 1]");
    if (selected < 1) throw ConfigError("fitness of an empty feature mask");
    if (selected > total) throw ConfigError("selected feature count exceeds total");
    FitnessValue f;
    f.weight = weight;
    f.accuracy_part = accuracy;
    f.reduction_part = feature_reduction(selected, total);
    f.value = weight * accuracy + (1.0 - weight) * f.reduction_part;
    return f;
}

FitnessValue fitness(const ConfusionMatrix& cm, const FeatureMask& mask, std::size_t total_features, double weight) {
    if (cm.total() == 0) throw ConfigError("fitness of an empty confusion matrix");
    const double accuracy = static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());
    return fitness(accuracy, mask.popcount(), total_features, weight);
}

double feature_reduction(std::size_t selected, std::size_t total) {
    if (total == 0 || selected > total) throw ConfigError("feature reduction needs 0 <= selected <= total, total > 0");
    return static_cast<double>(total - selected) / static_cast<double>(total);
}

double feature_reduction(const FeatureMask& mask, std::size_t total) { return feature_reduction(mask.popcount(), total); }

std::string format_percent(double fraction, int decimals) {
    const double scale = std::pow(10.0, decimals);
    const double truncated = std::floor(fraction * 100.0 * scale + 1e-6) / scale;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f%%", decimals, truncated);
    return buf;
}

double round_half_up(double value, int decimals) {
    const double scale = std::pow(10.0, decimals);
    return std::round(value * scale) / scale;
}

CrossValidation cross_validate(const Dataset& d, std::size_t k, std::uint64_t seed, const FoldEvaluator& evaluate) {
    const auto folds = kfold_indices(d, k, seed);
    CrossValidation cv;
    for (std::size_t f = 0; f < folds.size(); ++f) {
        const auto& fold = folds[f];
        bool seen[2] = {false, false};
        for (auto r : fold.train) seen[d.label(r)] = true;
        if (!seen[0] || !seen[1]) cv.warnings.push_back("fold " + std::to_string(f) + ": single-class training set");
        const auto cm = evaluate(fold.train, fold.test);
        cv.accuracies.push_back(static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total()));
    }
    const double n = static_cast<double>(cv.accuracies.size());
    cv.mean = std::accumulate(cv.accuracies.begin(), cv.accuracies.end(), 0.0) / n;
    double var = 0.0;
    for (double a : cv.accuracies) var += (a - cv.mean) * (a - cv.mean);
    cv.stddev = std::sqrt(var / n);
    return cv;
}

CrossValidation cross_validate(const ClassifierSpec& spec, const Dataset& d, const FeatureMask& mask, std::size_t k,
                               std::uint64_t seed) {
    if (mask.none()) throw ConfigError("cross-validation with an empty mask");
    return cross_validate(d, k, seed, [&](std::span<const std::size_t> train, std::span<const std::size_t> test) {
        return evaluate_masked(spec, d, train, test, mask);
    });
}

}  // namespace swarmselect
