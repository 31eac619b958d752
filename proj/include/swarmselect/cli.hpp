#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "swarmselect/dataset.hpp"
#include "swarmselect/pipeline.hpp"
#include "swarmselect/report.hpp"

namespace swarmselect {

/// Exit codes of execute().
enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitData = 2, kExitInternal = 3 };

/// Configuration document for the grid subcommand. Exactly one of `data`
/// and `synth` is set.
struct RunConfig {
    std::optional<std::filesystem::path> data;
    std::optional<SynthSpec> synth;
    CsvOptions csv;
    std::filesystem::path output_dir = "results";
    ReportFormats formats;
    GridConfig grid;
    bool timing = false;

    void validate() const;
};

/// Keys: data | synth {rows, cols, informative, separation, redundant_pairs,
/// seed}, label_column, positive_label, output_dir, formats (array),
/// timing, seed, grid {see grid_config_from_json}. A top-level seed is the
/// master seed of the grid.
RunConfig run_config_from_json(std::string_view text);

/// clean() followed by min-max scaling.
Dataset prepare_dataset(const Dataset& raw);

/// Runs one subcommand. args excludes the program name. Errors are printed
/// to `err` as a single line "error: <code>: <message>".
int execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int execute(int argc, char** argv);

}  // namespace swarmselect
