#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "swarmselect/dataset.hpp"
#include "swarmselect/feature_mask.hpp"

namespace swarmselect {

enum class RankMethod { pearson, spearman, relief };

std::string to_string(RankMethod method);
RankMethod parse_rank_method(std::string_view name);

/// Pearson correlation with population moments. Throws DataError when either
/// input is constant.
double pearson(std::span<const double> x, std::span<const double> y);

/// 1-based ranks; tied values share the average of their positions.
std::vector<double> average_ranks(std::span<const double> x);

/// Pearson correlation of the average-rank transforms.
double spearman(std::span<const double> x, std::span<const double> y);

/// Relief weights, one per feature: every row is visited once, its nearest
/// same-class row (hit) and nearest other-class row (miss) are found by
/// Euclidean distance over all features (ties to the lower row index), and
/// W_f accumulates (x_f - miss_f)^2 - (x_f - hit_f)^2. Returns W / n_rows.
///
/// Expects features already scaled to [0,1]. The visiting order is fixed, so
/// `seed` does not change the result; it is kept for API symmetry with the
/// sampled variants.
std::vector<double> relief_weights(const Dataset& d, std::uint64_t seed = 42);

struct RankedFeatures {
    RankMethod method = RankMethod::pearson;
    std::vector<double> scores;
    std::vector<std::size_t> order;  // descending score, ties by ascending index
};

/// Scores every feature against the label vector. Pearson and Spearman use
/// |coefficient| (a constant feature scores 0); Relief min-max scales the
/// data first.
RankedFeatures rank_features(const Dataset& d, RankMethod method, std::uint64_t seed = 42);

/// Mask with the top-k ranked features set; k defaults to ceil(n/2).
FeatureMask leading_mask(const RankedFeatures& ranked, std::optional<std::size_t> k = std::nullopt);

}  // namespace swarmselect
