#include "swarmselect/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "swarmselect/error.hpp"
#include "swarmselect/rng.hpp"

namespace swarmselect {

std::string to_string(ClassifierKind kind) {
    switch (kind) {
        case ClassifierKind::knn: return "knn";
        case ClassifierKind::rf: return "rf";
        case ClassifierKind::svm: return "svm";
    }
    return "unknown";
}

ClassifierKind parse_classifier_kind(std::string_view name) {
    if (name == "knn") return ClassifierKind::knn;
    if (name == "rf") return ClassifierKind::rf;
    if (name == "svm") return ClassifierKind::svm;
    throw ConfigError("unknown classifier '" + std::string(name) + "'");
}

void ClassifierSpec::validate() const {
    if (knn_k < 1 || knn_k % 2 == 0) throw ConfigError("knn_k must be odd and >= 1");
    if (rf_trees < 1) throw ConfigError("rf_trees must be >= 1");
    if (rf_max_depth && *rf_max_depth < 1) throw ConfigError("rf_max_depth must be >= 1");
    if (svm_epochs < 1) throw ConfigError("svm_epochs must be >= 1");
    if (!(svm_learning_rate > 0.0)) throw ConfigError("svm_learning_rate must be positive");
    if (!(svm_regularization >= 0.0)) throw ConfigError("svm_regularization must be non-negative");
}

int majority_vote(std::span<const int> votes) {
    const auto ones = std::count(votes.begin(), votes.end(), 1);
    return 2 * static_cast<std::size_t>(ones) > votes.size() ? 1 : 0;
}

// ---------------------------------------------------------------- trees

int DecisionTree::predict(std::span<const double> row) const {
    int at = 0;
    while (nodes[static_cast<std::size_t>(at)].feature >= 0) {
        const auto& n = nodes[static_cast<std::size_t>(at)];
        at = row[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
    }
    return nodes[static_cast<std::size_t>(at)].leaf_class;
}

std::size_t DecisionTree::depth() const {
    std::vector<std::size_t> d(nodes.size(), 0);
    std::size_t deepest = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        deepest = std::max(deepest, d[i]);
        if (nodes[i].feature >= 0) {
            d[static_cast<std::size_t>(nodes[i].left)] = d[i] + 1;
            d[static_cast<std::size_t>(nodes[i].right)] = d[i] + 1;
        }
    }
    return deepest;
}

namespace {

/// Column-major copy of the masked training block.
struct Block {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;  // values[c * rows + r]
    std::vector<int> labels;

    double at(std::size_t r, std::size_t c) const { return values[c * rows + r]; }
};

Block gather(const Dataset& d, std::span<const std::size_t> rows, std::span<const std::size_t> features) {
    Block b;
    b.rows = rows.size();
    b.cols = features.size();
    b.values.resize(b.rows * b.cols);
    b.labels.resize(b.rows);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        b.labels[i] = d.label(rows[i]);
        for (std::size_t c = 0; c < features.size(); ++c) b.values[c * b.rows + i] = d.at(rows[i], features[c]);
    }
    return b;
}

double gini(std::size_t ones, std::size_t n) {
    if (n == 0) return 0.0;
    const double p = static_cast<double>(ones) / static_cast<double>(n);
    return 2.0 * p * (1.0 - p);
}

class TreeBuilder {
public:
    TreeBuilder(const Block& block, std::span<const std::size_t> features, std::optional<std::size_t> max_depth,
                Rng& rng)
        : block_(block), features_(features), max_depth_(max_depth), rng_(rng) {
        mtry_ = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(block.cols))));
        mtry_ = std::clamp<std::size_t>(mtry_, 1, block.cols);
    }

    std::vector<TreeNode> build(std::vector<std::size_t> sample) {
        nodes_.clear();
        grow(sample, 0);
        return std::move(nodes_);
    }

private:
    struct Split {
        std::size_t feature = 0;
        double threshold = 0.0;
        double impurity = 0.0;
        bool found = false;
    };

    int grow(std::vector<std::size_t>& rows, std::size_t depth) {
        const int id = static_cast<int>(nodes_.size());
        nodes_.emplace_back();
        std::size_t ones = 0;
        for (auto r : rows) ones += static_cast<std::size_t>(block_.labels[r]);
        const bool pure = ones == 0 || ones == rows.size();
        const bool depth_cap = max_depth_ && depth >= *max_depth_;
        Split split;
        if (!pure && !depth_cap && rows.size() >= 2) split = find_split(rows, ones);
        if (!split.found) {
            nodes_[static_cast<std::size_t>(id)].leaf_class = 2 * ones > rows.size() ? 1 : 0;
            return id;
        }
        std::vector<std::size_t> left, right;
        for (auto r : rows) (block_.at(r, split.feature) <= split.threshold ? left : right).push_back(r);
        rows.clear();
        rows.shrink_to_fit();
        const int l = grow(left, depth + 1);
        const int rgt = grow(right, depth + 1);
        auto& node = nodes_[static_cast<std::size_t>(id)];
        node.feature = static_cast<int>(features_[split.feature]);
        node.threshold = split.threshold;
        node.left = l;
        node.right = rgt;
        return id;
    }

    // Best Gini split among ceil(sqrt(p)) randomly drawn features. When none
    // of them varies inside the node the remaining features are tried in the
    // same random order, so an impure node with distinct rows always splits.
    Split find_split(const std::vector<std::size_t>& rows, std::size_t ones) {
        std::vector<std::size_t> order(block_.cols);
        std::iota(order.begin(), order.end(), 0);
        shuffle(order, rng_);
        Split best;
        for (std::size_t i = 0; i < order.size(); ++i) {
            if (i >= mtry_ && best.found) break;
            evaluate(order[i], rows, ones, best);
        }
        return best;
    }

    void evaluate(std::size_t feature, const std::vector<std::size_t>& rows, std::size_t ones, Split& best) {
        scratch_.resize(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            scratch_[i] = {block_.at(rows[i], feature), block_.labels[rows[i]]};
        }
        std::sort(scratch_.begin(), scratch_.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        const std::size_t n = rows.size();
        std::size_t left_n = 0, left_ones = 0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            ++left_n;
            left_ones += static_cast<std::size_t>(scratch_[i].second);
            if (scratch_[i].first == scratch_[i + 1].first) continue;
            const std::size_t right_n = n - left_n;
            const double impurity = (static_cast<double>(left_n) * gini(left_ones, left_n) +
                                     static_cast<double>(right_n) * gini(ones - left_ones, right_n)) /
                                    static_cast<double>(n);
            if (!best.found || impurity < best.impurity) {
                double threshold = 0.5 * (scratch_[i].first + scratch_[i + 1].first);
                if (!(threshold < scratch_[i + 1].first)) threshold = scratch_[i].first;
                best = {feature, threshold, impurity, true};
            }
        }
    }

    const Block& block_;
    std::span<const std::size_t> features_;
    std::optional<std::size_t> max_depth_;
    Rng& rng_;
    std::size_t mtry_ = 1;
    std::vector<TreeNode> nodes_;
    std::vector<std::pair<double, int>> scratch_;
};

void require_both_classes(const Dataset& d, std::span<const std::size_t> rows, ClassifierKind kind) {
    bool seen[2] = {false, false};
    for (auto r : rows) seen[d.label(r)] = true;
    if (!seen[0] || !seen[1]) {
        throw DataError(to_string(kind) + " training rows contain a single class");
    }
}

}  // namespace

// ---------------------------------------------------------------- training

TrainedModel train(const ClassifierSpec& spec, const Dataset& d, std::span<const std::size_t> rows,
                   const FeatureMask& mask) {
    spec.validate();
    if (mask.size() != d.cols()) throw ConfigError("mask width does not match dataset");
    if (mask.none()) throw ConfigError("cannot train on an empty feature mask");
    if (rows.empty()) throw ConfigError("cannot train on an empty row set");
    if (spec.kind != ClassifierKind::knn) require_both_classes(d, rows, spec.kind);

    TrainedModel model;
    model.kind = spec.kind;
    model.mask = mask;
    model.features = mask.indices();
    const std::size_t p = model.features.size();
    model.offset.assign(p, 0.0);
    model.scale.assign(p, 1.0);
    const Block block = gather(d, rows, model.features);

    switch (spec.kind) {
        case ClassifierKind::knn: {
            for (std::size_t c = 0; c < p; ++c) {
                double lo = block.at(0, c), hi = lo;
                for (std::size_t r = 1; r < block.rows; ++r) {
                    lo = std::min(lo, block.at(r, c));
                    hi = std::max(hi, block.at(r, c));
                }
                model.offset[c] = lo;
                model.scale[c] = hi > lo ? hi - lo : 1.0;
            }
            KnnParams knn;
            knn.k = spec.knn_k;
            knn.labels = block.labels;
            knn.source_rows.assign(rows.begin(), rows.end());
            knn.rows.resize(block.rows * p);
            for (std::size_t r = 0; r < block.rows; ++r) {
                for (std::size_t c = 0; c < p; ++c) {
                    knn.rows[r * p + c] = (block.at(r, c) - model.offset[c]) / model.scale[c];
                }
            }
            model.params = std::move(knn);
            break;
        }
        case ClassifierKind::rf: {
            ForestParams forest;
            forest.trees.resize(spec.rf_trees);
            for (std::size_t t = 0; t < spec.rf_trees; ++t) {
                auto rng = Rng::stream(spec.seed, 0x7ee5u, t);
                std::vector<std::size_t> sample(block.rows);
                if (spec.rf_bootstrap) {
                    for (auto& s : sample) s = rng.index(block.rows);
                } else {
                    std::iota(sample.begin(), sample.end(), 0);
                }
                auto& tree = forest.trees[t];
                tree.in_bag.reserve(sample.size());
                for (auto s : sample) tree.in_bag.push_back(rows[s]);
                TreeBuilder builder(block, model.features, spec.rf_max_depth, rng);
                tree.nodes = builder.build(std::move(sample));
            }
            model.params = std::move(forest);
            break;
        }
        case ClassifierKind::svm: {
            const double n = static_cast<double>(block.rows);
            for (std::size_t c = 0; c < p; ++c) {
                double mean = 0.0;
                for (std::size_t r = 0; r < block.rows; ++r) mean += block.at(r, c);
                mean /= n;
                double var = 0.0;
                for (std::size_t r = 0; r < block.rows; ++r) var += (block.at(r, c) - mean) * (block.at(r, c) - mean);
                const double sd = std::sqrt(var / n);
                model.offset[c] = mean;
                model.scale[c] = sd > 0.0 ? sd : 1.0;
            }
            std::vector<double> x(block.rows * p);
            std::vector<double> y(block.rows);
            for (std::size_t r = 0; r < block.rows; ++r) {
                y[r] = block.labels[r] == 1 ? 1.0 : -1.0;
                for (std::size_t c = 0; c < p; ++c) x[r * p + c] = (block.at(r, c) - model.offset[c]) / model.scale[c];
            }
            SvmParams svm;
            svm.weights.assign(p, 0.0);
            const double lambda = spec.svm_regularization;
            std::vector<double> grad(p);
            auto objective = [&]() {
                double hinge = 0.0;
                for (std::size_t r = 0; r < block.rows; ++r) {
                    double s = svm.bias;
                    for (std::size_t c = 0; c < p; ++c) s += svm.weights[c] * x[r * p + c];
                    hinge += std::max(0.0, 1.0 - y[r] * s);
                }
                double norm = 0.0;
                for (double w : svm.weights) norm += w * w;
                return 0.5 * lambda * norm + hinge / n;
            };
            for (std::size_t epoch = 0; epoch < spec.svm_epochs; ++epoch) {
                for (std::size_t c = 0; c < p; ++c) grad[c] = lambda * svm.weights[c];
                double grad_b = 0.0;
                for (std::size_t r = 0; r < block.rows; ++r) {
                    double s = svm.bias;
                    for (std::size_t c = 0; c < p; ++c) s += svm.weights[c] * x[r * p + c];
                    if (y[r] * s < 1.0) {
                        for (std::size_t c = 0; c < p; ++c) grad[c] -= y[r] * x[r * p + c] / n;
                        grad_b -= y[r] / n;
                    }
                }
                for (std::size_t c = 0; c < p; ++c) svm.weights[c] -= spec.svm_learning_rate * grad[c];
                svm.bias -= spec.svm_learning_rate * grad_b;
                svm.loss_history.push_back(objective());
            }
            model.params = std::move(svm);
            break;
        }
    }
    return model;
}

// ---------------------------------------------------------------- prediction

double TrainedModel::score(std::span<const double> row) const {
    if (row.size() != mask.size()) {
        throw ConfigError("row has " + std::to_string(row.size()) + " values, model expects " +
                          std::to_string(mask.size()));
    }
    const std::size_t p = features.size();
    if (const auto* knn = std::get_if<KnnParams>(&params)) {
        std::vector<double> x(p);
        for (std::size_t c = 0; c < p; ++c) x[c] = (row[features[c]] - offset[c]) / scale[c];
        const std::size_t n = knn->labels.size();
        std::vector<std::pair<double, std::size_t>> dist(n);
        for (std::size_t r = 0; r < n; ++r) {
            double s = 0.0;
            const double* t = knn->rows.data() + r * p;
            for (std::size_t c = 0; c < p; ++c) s += (x[c] - t[c]) * (x[c] - t[c]);
            // ties on distance go to the lower dataset row
            dist[r] = {s, knn->source_rows[r]};
        }
        const std::size_t k = std::min(knn->k, n);
        std::vector<std::size_t> pos(n);
        std::iota(pos.begin(), pos.end(), 0);
        std::partial_sort(pos.begin(), pos.begin() + static_cast<std::ptrdiff_t>(k), pos.end(),
                          [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });
        std::size_t ones = 0;
        for (std::size_t i = 0; i < k; ++i) ones += static_cast<std::size_t>(knn->labels[pos[i]]);
        return static_cast<double>(ones) / static_cast<double>(k);
    }
    if (const auto* forest = std::get_if<ForestParams>(&params)) {
        std::size_t ones = 0;
        for (const auto& tree : forest->trees) ones += static_cast<std::size_t>(tree.predict(row));
        return static_cast<double>(ones) / static_cast<double>(forest->trees.size());
    }
    const auto& svm = std::get<SvmParams>(params);
    double s = svm.bias;
    for (std::size_t c = 0; c < p; ++c) s += svm.weights[c] * (row[features[c]] - offset[c]) / scale[c];
    return s;
}

int TrainedModel::predict(std::span<const double> row) const {
    const double s = score(row);
    if (kind == ClassifierKind::svm) return s >= 0.0 ? 1 : 0;
    // strict majority wins; an even split goes to label 0
    return s > 0.5 ? 1 : 0;
}

int predict(const TrainedModel& model, std::span<const double> row) { return model.predict(row); }

ConfusionMatrix evaluate_masked(const ClassifierSpec& spec, const Dataset& d, std::span<const std::size_t> train_rows,
                                std::span<const std::size_t> eval_rows, const FeatureMask& mask) {
    const std::set<std::size_t> train_set(train_rows.begin(), train_rows.end());
    for (auto r : eval_rows) {
        if (train_set.count(r)) throw ConfigError("evaluation row " + std::to_string(r) + " is also a training row");
    }
    const auto model = train(spec, d, train_rows, mask);
    ConfusionMatrix cm;
    for (auto r : eval_rows) cm.add(d.label(r), model.predict(d.row(r)));
    return cm;
}

}  // namespace swarmselect
