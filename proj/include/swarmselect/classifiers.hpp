#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "swarmselect/confusion.hpp"
#include "swarmselect/dataset.hpp"
#include "swarmselect/feature_mask.hpp"

namespace swarmselect {

enum class ClassifierKind { knn, rf, svm };

std::string to_string(ClassifierKind kind);
ClassifierKind parse_classifier_kind(std::string_view name);

struct ClassifierSpec {
    ClassifierKind kind = ClassifierKind::knn;
    std::size_t knn_k = 5;
    std::size_t rf_trees = 100;
    std::optional<std::size_t> rf_max_depth;  // unbounded when empty
    bool rf_bootstrap = true;
    std::size_t svm_epochs = 200;
    double svm_learning_rate = 0.01;
    double svm_regularization = 0.01;
    std::uint64_t seed = 42;

    /// Throws ConfigError when an invariant is broken (knn_k odd, counts >= 1).
    void validate() const;
};

/// One node of a flattened CART tree. `feature` is a dataset column index,
/// or -1 for a leaf. Rows with x[feature] <= threshold go left.
struct TreeNode {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    int leaf_class = 0;
};

struct DecisionTree {
    std::vector<TreeNode> nodes;
    /// Dataset rows drawn for this tree (with repetition when bootstrapping).
    std::vector<std::size_t> in_bag;

    int predict(std::span<const double> row) const;
    std::size_t depth() const;
};

struct KnnParams {
    std::size_t k = 5;
    std::vector<double> rows;  // row-major, masked and min-max scaled
    std::vector<int> labels;
    std::vector<std::size_t> source_rows;
};

struct ForestParams {
    std::vector<DecisionTree> trees;
};

struct SvmParams {
    std::vector<double> weights;
    double bias = 0.0;
    /// Regularized hinge objective after each epoch.
    std::vector<double> loss_history;
};

/// A fitted classifier. Inputs are full-width dataset rows; the model picks
/// out its masked features and applies (x - offset) / scale before use
/// (min-max for KNN, standardization for SVM, identity for RF).
struct TrainedModel {
    ClassifierKind kind = ClassifierKind::knn;
    FeatureMask mask;
    std::vector<std::size_t> features;
    std::vector<double> offset;
    std::vector<double> scale;
    std::variant<KnnParams, ForestParams, SvmParams> params;

    int predict(std::span<const double> row) const;
    /// Decision value for SVM (w.x + b); majority fraction of class 1 for
    /// RF and KNN.
    double score(std::span<const double> row) const;
};

TrainedModel train(const ClassifierSpec& spec, const Dataset& d, std::span<const std::size_t> rows,
                   const FeatureMask& mask);

int predict(const TrainedModel& model, std::span<const double> row);

/// Train on `train_rows`, predict `eval_rows`. Scaling parameters come from
/// the training rows only.
ConfusionMatrix evaluate_masked(const ClassifierSpec& spec, const Dataset& d, std::span<const std::size_t> train_rows,
                                std::span<const std::size_t> eval_rows, const FeatureMask& mask);

/// Majority vote over 0/1 votes; ties go to label 0.
int majority_vote(std::span<const int> votes);

}  // namespace swarmselect
