#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "swarmselect/dataset.hpp"
#include "swarmselect/feature_mask.hpp"
#include "swarmselect/rng.hpp"

namespace testing {

// Row-major literal -> Dataset with columns c0, c1, ...
inline swarmselect::Dataset table(const std::vector<std::vector<double>>& rows, const std::vector<int>& labels) {
    std::vector<double> values;
    for (const auto& r : rows) values.insert(values.end(), r.begin(), r.end());
    std::vector<std::string> names;
    for (std::size_t c = 0; c < rows.front().size(); ++c) names.push_back("c" + std::to_string(c));
    return swarmselect::Dataset(values, rows.size(), rows.front().size(), labels, names);
}

// Fraction of bits matching a hidden mask drawn from `seed`.
struct Planted {
    swarmselect::FeatureMask target;

    Planted(std::size_t n, std::uint64_t seed) : target(n) {
        auto rng = swarmselect::Rng::stream(seed);
        for (std::size_t k = 0; k < n; ++k) target.set(k, rng.uniform() < 0.5);
        if (target.none()) target.set(0);
    }

    double operator()(const swarmselect::FeatureMask& m) const {
        std::size_t same = 0;
        for (std::size_t k = 0; k < target.size(); ++k) same += m.test(k) == target.test(k);
        return static_cast<double>(same) / static_cast<double>(target.size());
    }
};

inline std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("swarmselect_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace testing
