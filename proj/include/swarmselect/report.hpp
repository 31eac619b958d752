#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "swarmselect/pipeline.hpp"
#include "swarmselect/ranking.hpp"

namespace swarmselect {

struct ReportFormats {
    bool json = true;
    bool csv = true;
    bool svg = false;
};

/// Comma-separated subset of json, csv, svg. Throws ConfigError on anything
/// else or on an empty list.
ReportFormats parse_formats(std::string_view list);

struct ManifestEntry {
    std::string file;  // name inside the output directory
    std::uintmax_t bytes = 0;
};

/// One row per result in input order. Columns, fixed:
/// Ranking,NatureAlgo,MLAlgo,Accuracy,RecallAutism,RecallTypical,
/// PrecisionAutism,PrecisionTypical,F1Autism,F1Typical,Selected,
/// FeatureReduction,CvMean,CvStd,Fitness,GatesPassed,Status
/// Metric values are rounded half-up to 5 places with trailing zeros dropped.
std::string results_csv(const std::vector<CombinationResult>& results);

/// Best non-failed combination per selector, best first:
/// Ranking,FeatureSelectionAlgorithm,MLAlgo,Accuracy,SelectedFeatures,FeatureReduction
std::string summary_csv(const std::vector<CombinationResult>& results);

/// Grouped bar chart of test accuracy: one group per ranker, one bar per
/// (selector, classifier) inside it. Every bar is a <rect class="bar">.
std::string accuracy_svg(const std::vector<CombinationResult>& results);

/// Heatmap of normalized ranking scores, one row per method and one column
/// per feature. Each cell is a <rect class="cell">.
std::string ranking_heatmap_svg(const std::vector<RankedFeatures>& rankings,
                                const std::vector<std::string>& feature_names);

/// Writes results.json (json), results.csv and summary.csv (csv) and
/// accuracy.svg (svg) into `out_dir`, creating it if needed. Returns the
/// written files with their sizes. Throws DataError when the directory is
/// not writable and ConfigError on an empty result list.
std::vector<ManifestEntry> emit_report(const std::vector<CombinationResult>& results, const ReportFormats& formats,
                                       const std::filesystem::path& out_dir, bool include_timing = false);

void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace swarmselect
