#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "support.hpp"
#include "swarmselect/error.hpp"
#include "swarmselect/ranking.hpp"

using namespace swarmselect;
using testing::table;

namespace {

// Textbook Relief written from scratch: exhaustive scan, squared diffs.
std::vector<double> relief_oracle(const Dataset& d) {
    std::vector<double> w(d.cols(), 0.0);
    for (std::size_t i = 0; i < d.rows(); ++i) {
        std::size_t hit = d.rows();
        std::size_t miss = d.rows();
        double best_hit = std::numeric_limits<double>::infinity();
        double best_miss = best_hit;
        for (std::size_t j = 0; j < d.rows(); ++j) {
            if (j == i) continue;
            double dist = 0.0;
            for (std::size_t f = 0; f < d.cols(); ++f) dist += (d.at(i, f) - d.at(j, f)) * (d.at(i, f) - d.at(j, f));
            if (d.label(j) == d.label(i) && dist < best_hit) {
                best_hit = dist;
                hit = j;
            }
            if (d.label(j) != d.label(i) && dist < best_miss) {
                best_miss = dist;
                miss = j;
            }
        }
        for (std::size_t f = 0; f < d.cols(); ++f) {
            const double dh = hit < d.rows() ? d.at(i, f) - d.at(hit, f) : 0.0;
            const double dm = miss < d.rows() ? d.at(i, f) - d.at(miss, f) : 0.0;
            w[f] += dm * dm - dh * dh;
        }
    }
    for (auto& x : w) x /= static_cast<double>(d.rows());
    return w;
}

Dataset two_feature_fixture(std::uint64_t seed) {
    auto rng = Rng::stream(seed);
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    for (int i = 0; i < 100; ++i) {
        const int y = i % 2;
        rows.push_back({std::clamp(0.3 + 0.4 * y + 0.1 * rng.normal(), 0.0, 1.0), rng.uniform()});
        labels.push_back(y);
    }
    return table(rows, labels);
}

}  // namespace

TEST_CASE("pearson examples") {
    const std::vector<double> x{1, 2, 3};
    CHECK(pearson(x, std::vector<double>{2, 4, 6}) == doctest::Approx(1.0));
    CHECK(pearson(x, std::vector<double>{6, 4, 2}) == doctest::Approx(-1.0));
    CHECK(pearson(std::vector<double>{1, 2, 3, 4}, std::vector<double>{1, 3, 2, 4}) == doctest::Approx(0.8));
    CHECK_THROWS_AS(pearson(x, std::vector<double>{5, 5, 5}), DataError);
}

TEST_CASE("spearman examples") {
    const std::vector<double> x{1, 2, 3};
    CHECK(spearman(x, std::vector<double>{1, 8, 27}) == doctest::Approx(1.0));
    CHECK(spearman(x, std::vector<double>{9, 4, 1}) == doctest::Approx(-1.0));
    const std::vector<double> tied{1, 2, 2, 4};
    CHECK(average_ranks(tied) == std::vector<double>{1, 2.5, 2.5, 4});
    const std::vector<double> y{1, 2, 3, 4};
    CHECK(spearman(tied, y) == doctest::Approx(pearson(std::vector<double>{1, 2.5, 2.5, 4}, y)).epsilon(1e-12));
}

TEST_CASE("relief examples") {
    const auto d = table({{0}, {0}, {1}, {1}}, {0, 0, 1, 1});
    CHECK(relief_weights(d)[0] == doctest::Approx(1.0));
    const auto c = table({{0, 0.5}, {0, 0.5}, {1, 0.5}, {1, 0.5}}, {0, 0, 1, 1});
    CHECK(relief_weights(c)[1] == 0.0);
}

TEST_CASE("relief matches an exhaustive oracle") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto d = two_feature_fixture(seed);
        const auto w = relief_weights(d, seed);
        const auto o = relief_oracle(d);
        for (std::size_t f = 0; f < w.size(); ++f) CHECK(w[f] == doctest::Approx(o[f]).epsilon(1e-12));
        CHECK(w[0] > w[1]);
    }
}

TEST_CASE("rank_features puts a label copy first") {
    auto rng = Rng::stream(8);
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    for (int i = 0; i < 40; ++i) {
        const int y = i % 2;
        rows.push_back({rng.uniform(), static_cast<double>(y), rng.uniform()});
        labels.push_back(y);
    }
    const auto d = table(rows, labels);
    for (auto method : {RankMethod::pearson, RankMethod::spearman, RankMethod::relief}) {
        CHECK(rank_features(d, method).order.front() == 1);
    }
}

TEST_CASE("identical features take adjacent ranks, lower index first") {
    auto rng = Rng::stream(9);
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    for (int i = 0; i < 40; ++i) {
        const int y = i % 2;
        const double v = y + rng.normal();
        rows.push_back({rng.uniform(), v, v});
        labels.push_back(y);
    }
    const auto r = rank_features(table(rows, labels), RankMethod::pearson);
    CHECK(r.order == std::vector<std::size_t>{1, 2, 0});
}

TEST_CASE("pearson ranking finds planted features") {
    int hits = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        SynthSpec spec;
        spec.seed = seed;
        const auto syn = synthesize(spec);
        const auto r = rank_features(syn.data, RankMethod::pearson);
        const auto top8 = leading_mask(r, 8);
        hits += top8.contains(syn.true_mask);
    }
    CHECK(hits >= 3);
}

TEST_CASE("leading_mask") {
    RankedFeatures r;
    r.scores = {0.1, 0.9, 0.5, 0.3, 0.7, 0.2, 0.8, 0.0, 0.4, 0.6};
    r.order = {1, 6, 4, 9, 2, 8, 3, 5, 0, 7};
    CHECK(leading_mask(r, 1).indices() == std::vector<std::size_t>{1});
    CHECK(leading_mask(r, 10) == FeatureMask(10, true));
    const auto half = leading_mask(r);
    CHECK(half.popcount() == 5);
    CHECK(half.indices() == std::vector<std::size_t>{1, 2, 4, 6, 9});
    CHECK_THROWS_AS(leading_mask(r, 0), ConfigError);
    CHECK_THROWS_AS(leading_mask(r, 11), ConfigError);
}

TEST_CASE("rank method names") {
    CHECK(to_string(RankMethod::relief) == "relief");
    CHECK(parse_rank_method("spearman") == RankMethod::spearman);
    CHECK_THROWS_AS(parse_rank_method("chi2"), ConfigError);
}
