#include "swarmselect/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "swarmselect/error.hpp"

namespace swarmselect {

std::string to_string(RankMethod method) {
    switch (method) {
        case RankMethod::pearson: return "pearson";
        case RankMethod::spearman: return "spearman";
        case RankMethod::relief: return "relief";
    }
    return "unknown";
}

RankMethod parse_rank_method(std::string_view name) {
    if (name == "pearson" || name == "pcc") return RankMethod::pearson;
    if (name == "spearman" || name == "scc") return RankMethod::spearman;
    if (name == "relief") return RankMethod::relief;
    throw ConfigError("unknown ranking method '" + std::string(name) + "'");
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ConfigError("pearson: inputs differ in length");
    if (x.size() < 2) throw ConfigError("pearson: need at least 2 observations");
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw DataError("correlation undefined: constant input");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> average_ranks(std::span<const double> x) {
    std::vector<std::size_t> idx(x.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> ranks(x.size());
    std::size_t i = 0;
    while (i < idx.size()) {
        std::size_t j = i;
        while (j + 1 < idx.size() && x[idx[j + 1]] == x[idx[i]]) ++j;
        const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t t = i; t <= j; ++t) ranks[idx[t]] = avg;
        i = j + 1;
    }
    return ranks;
}

double spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ConfigError("spearman: inputs differ in length");
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    return pearson(rx, ry);
}

std::vector<double> relief_weights(const Dataset& d, std::uint64_t /*seed*/) {
    if (d.rows() < 4) throw DataError("relief needs at least 4 rows");
    if (d.count_label(0) < 2 || d.count_label(1) < 2) {
        throw DataError("relief needs at least 2 rows of each class");
    }
    const std::size_t n = d.rows();
    const std::size_t p = d.cols();
    std::vector<double> weights(p, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto xi = d.row(i);
        double best_hit = std::numeric_limits<double>::infinity();
        double best_miss = std::numeric_limits<double>::infinity();
        std::size_t hit = n, miss = n;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const auto xj = d.row(j);
            double dist = 0.0;
            for (std::size_t f = 0; f < p; ++f) {
                const double diff = xi[f] - xj[f];
                dist += diff * diff;
            }
            if (d.label(j) == d.label(i)) {
                if (dist < best_hit) {
                    best_hit = dist;
                    hit = j;
                }
            } else if (dist < best_miss) {
                best_miss = dist;
                miss = j;
            }
        }
        const auto xh = d.row(hit);
        const auto xm = d.row(miss);
        for (std::size_t f = 0; f < p; ++f) {
            const double dh = xi[f] - xh[f];
            const double dm = xi[f] - xm[f];
            weights[f] += dm * dm - dh * dh;
        }
    }
    for (auto& w : weights) w /= static_cast<double>(n);
    return weights;
}

RankedFeatures rank_features(const Dataset& d, RankMethod method, std::uint64_t seed) {
    RankedFeatures out;
    out.method = method;
    out.scores.assign(d.cols(), 0.0);
    if (method == RankMethod::relief) {
        out.scores = relief_weights(MinMaxScaler::fit(d).transform(d), seed);
    } else {
        std::vector<double> y(d.labels().begin(), d.labels().end());
        for (std::size_t c = 0; c < d.cols(); ++c) {
            const auto x = d.column(c);
            try {
                out.scores[c] = std::abs(method == RankMethod::pearson ? pearson(x, y) : spearman(x, y));
            } catch (const DataError&) {
                out.scores[c] = 0.0;
            }
        }
    }
    out.order.resize(d.cols());
    std::iota(out.order.begin(), out.order.end(), 0);
    std::stable_sort(out.order.begin(), out.order.end(),
                     [&](std::size_t a, std::size_t b) { return out.scores[a] > out.scores[b]; });
    return out;
}

FeatureMask leading_mask(const RankedFeatures& ranked, std::optional<std::size_t> k) {
    const std::size_t n = ranked.order.size();
    const std::size_t count = k.value_or((n + 1) / 2);
    if (count < 1 || count > n) {
        throw ConfigError("leading mask size " + std::to_string(count) + " outside [1, " + std::to_string(n) + "]");
    }
    FeatureMask mask(n);
    for (std::size_t i = 0; i < count; ++i) mask.set(ranked.order[i]);
    return mask;
}

}  // namespace swarmselect
