#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "swarmselect/feature_mask.hpp"

namespace swarmselect {

enum class Provenance { loaded, synthetic };

/// Immutable feature matrix (row-major) with binary labels, 1 = ASD.
///
/// Missing cells are stored as NaN until clean() drops their rows; every
/// other invariant (labels in {0,1}, unique column names, at least 2 rows
/// and 1 column, no infinities) is checked on construction.
class Dataset {
public:
    Dataset(std::vector<double> values, std::size_t rows, std::size_t cols, std::vector<int> labels,
            std::vector<std::string> column_names, Provenance provenance = Provenance::loaded,
            std::optional<std::uint64_t> synth_seed = std::nullopt);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double at(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }
    std::span<const double> row(std::size_t r) const { return {values_.data() + r * cols_, cols_}; }
    std::vector<double> column(std::size_t c) const;
    std::span<const double> values() const { return values_; }

    const std::vector<int>& labels() const { return labels_; }
    int label(std::size_t r) const { return labels_[r]; }
    const std::vector<std::string>& column_names() const { return names_; }

    Provenance provenance() const { return provenance_; }
    std::optional<std::uint64_t> synth_seed() const { return seed_; }

    bool has_missing() const;
    std::size_t count_label(int label) const;

    Dataset subset_rows(std::span<const std::size_t> rows) const;
    Dataset select_columns(std::span<const std::size_t> cols) const;
    Dataset with_labels(std::vector<int> labels) const;

private:
    std::vector<double> values_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<int> labels_;
    std::vector<std::string> names_;
    Provenance provenance_;
    std::optional<std::uint64_t> seed_;
};

struct CsvOptions {
    std::string label_column = "label";
    /// Label token mapped to 1; every other token maps to 0. At most two
    /// distinct tokens may appear.
    std::string positive_label = "1";
};

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options = {});
void write_csv(const Dataset& d, const std::filesystem::path& path, const std::string& label_column = "label");

struct DroppedColumn {
    std::string name;
    std::string reason;  // "zero_variance", "duplicate" or "squared_copy"
};

struct CleanReport {
    std::vector<DroppedColumn> dropped_columns;
    std::size_t dropped_rows = 0;
    std::vector<std::size_t> kept_columns;  // indices into the input dataset
};

struct CleanResult {
    Dataset data;
    CleanReport report;
};

/// Drops rows with missing cells, zero-variance columns, exact duplicate
/// columns and columns that equal the square of another retained column
/// (relative tolerance 1e-9). Throws DataError when nothing survives.
CleanResult clean(const Dataset& d);

/// Per-column affine map to [0,1], fit on a set of rows.
struct MinMaxScaler {
    std::vector<double> min;
    std::vector<double> max;

    static MinMaxScaler fit(const Dataset& d, std::span<const std::size_t> rows);
    static MinMaxScaler fit(const Dataset& d);

    double apply(std::size_t col, double value) const { return (value - min[col]) / (max[col] - min[col]); }
    Dataset transform(const Dataset& d) const;
};

struct NormalizeResult {
    Dataset data;
    MinMaxScaler scaler;
};

/// Throws DataError on a constant column (clean() was skipped).
NormalizeResult normalize_minmax(const Dataset& d);

struct SplitIndices {
    std::vector<std::size_t> train;
    std::vector<std::size_t> validate;
    std::vector<std::size_t> test;
};

/// Stratified three-way split. Partition totals are round(n*train_frac) and
/// round(n*validate_frac); each total is apportioned over the classes by
/// largest remainder. Index lists are returned sorted.
SplitIndices split(const Dataset& d, double train_frac = 0.8, double validate_frac = 0.1, std::uint64_t seed = 42);

struct Fold {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

/// Stratified k folds: rows are shuffled within each class, the class lists
/// concatenated, and position p dealt to fold p mod k.
std::vector<Fold> kfold_indices(const Dataset& d, std::size_t k, std::uint64_t seed = 42);

struct SynthSpec {
    std::size_t n_rows = 200;
    std::size_t n_cols = 20;
    std::size_t n_informative = 4;
    double class_separation = 3.0;
    std::size_t redundant_pairs = 0;
    std::uint64_t seed = 42;
};

struct SynthResult {
    Dataset data;
    FeatureMask true_mask;
};

/// Desk-scale stand-in for a gait dataset: balanced labels (row i has label
/// i % 2), informative columns ~ N(label * separation, 1) at seeded random
/// positions, noise columns ~ N(0, 1), and `redundant_pairs` trailing
/// (base, base^2) column pairs.
SynthResult synthesize(const SynthSpec& spec);

}  // namespace swarmselect
