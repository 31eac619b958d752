#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "swarmselect/metaheuristics.hpp"
#include "swarmselect/pipeline.hpp"
#include "swarmselect/ranking.hpp"

namespace swarmselect {

/// JSON array of combination results, two-space indented. wall_time is only
/// written when `include_timing` is set, so the default output is a pure
/// function of data, config and seed.
std::string results_to_json(const std::vector<CombinationResult>& results, bool include_timing = false);

/// Inverse of results_to_json. Throws DataError on malformed input.
std::vector<CombinationResult> results_from_json(std::string_view text);

/// {algorithm, seed, best_mask: {hex, features}, best_fitness,
///  fitness_history, evaluations}
std::string selection_to_json(const SelectionResult& result, const SelectorConfig& config,
                              const std::vector<std::string>& feature_names);

std::string ranking_to_json(const std::vector<RankedFeatures>& rankings, const std::vector<std::string>& feature_names,
                            std::size_t leading_k);

/// Overlays the keys present in `text` (a JSON object) on `base`. Unknown
/// keys throw ConfigError so typos do not pass silently.
GridConfig grid_config_from_json(std::string_view text, GridConfig base = {});
std::string grid_config_to_json(const GridConfig& cfg);

}  // namespace swarmselect
