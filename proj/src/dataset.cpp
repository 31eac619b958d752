#include "swarmselect/dataset.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "swarmselect/error.hpp"
#include "swarmselect/rng.hpp"

namespace swarmselect {

Dataset::Dataset(std::vector<double> values, std::size_t rows, std::size_t cols, std::vector<int> labels,
                 std::vector<std::string> column_names, Provenance provenance, std::optional<std::uint64_t> synth_seed)
    : values_(std::move(values)),
      rows_(rows),
      cols_(cols),
      labels_(std::move(labels)),
      names_(std::move(column_names)),
      provenance_(provenance),
      seed_(synth_seed) {
    if (rows_ < 2) throw DataError("dataset needs at least 2 rows, got " + std::to_string(rows_));
    if (cols_ < 1) throw DataError("dataset needs at least 1 feature column");
    if (values_.size() != rows_ * cols_) throw DataError("value buffer does not match rows x cols");
    if (labels_.size() != rows_) throw DataError("label count does not match row count");
    if (names_.size() != cols_) throw DataError("column name count does not match column count");
    for (int y : labels_) {
        if (y != 0 && y != 1) throw DataError("labels must be 0 or 1, found " + std::to_string(y));
    }
    std::set<std::string> seen;
    for (const auto& n : names_) {
        if (!seen.insert(n).second) throw DataError("duplicate column name '" + n + "'");
    }
    for (double v : values_) {
        if (std::isinf(v)) throw DataError("infinite value in dataset");
    }
}

std::vector<double> Dataset::column(std::size_t c) const {
    std::vector<double> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = at(r, c);
    return out;
}

bool Dataset::has_missing() const {
    return std::any_of(values_.begin(), values_.end(), [](double v) { return std::isnan(v); });
}

std::size_t Dataset::count_label(int label) const {
    return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), label));
}

Dataset Dataset::subset_rows(std::span<const std::size_t> rows) const {
    std::vector<double> values;
    values.reserve(rows.size() * cols_);
    std::vector<int> labels;
    labels.reserve(rows.size());
    for (auto r : rows) {
        if (r >= rows_) throw ConfigError("row index out of range");
        auto src = row(r);
        values.insert(values.end(), src.begin(), src.end());
        labels.push_back(labels_[r]);
    }
    return Dataset(std::move(values), rows.size(), cols_, std::move(labels), names_, provenance_, seed_);
}

Dataset Dataset::select_columns(std::span<const std::size_t> cols) const {
    std::vector<double> values;
    values.reserve(rows_ * cols.size());
    std::vector<std::string> names;
    for (auto c : cols) {
        if (c >= cols_) throw ConfigError("column index out of range");
        names.push_back(names_[c]);
    }
    for (std::size_t r = 0; r < rows_; ++r) {
        for (auto c : cols) values.push_back(at(r, c));
    }
    return Dataset(std::move(values), rows_, cols.size(), labels_, std::move(names), provenance_, seed_);
}

Dataset Dataset::with_labels(std::vector<int> labels) const {
    return Dataset(values_, rows_, cols_, std::move(labels), names_, provenance_, seed_);
}

// ---------------------------------------------------------------- CSV

namespace {

std::string trim(std::string s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                field += '"';
                ++i;
            } else if (ch == '"') {
                quoted = false;
            } else {
                field += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            fields.push_back(trim(field));
            field.clear();
        } else {
            field += ch;
        }
    }
    fields.push_back(trim(field));
    return fields;
}

}  // namespace

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path.string() + "'");

    std::string line;
    if (!std::getline(in, line)) throw DataError("'" + path.string() + "' is empty (header row required)");
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    const auto header = split_csv_line(line);

    std::set<std::string> seen;
    for (const auto& h : header) {
        if (!seen.insert(h).second) throw DataError("duplicate header name '" + h + "'");
    }
    const auto label_it = std::find(header.begin(), header.end(), options.label_column);
    if (label_it == header.end()) throw DataError("label column '" + options.label_column + "' not found");
    const auto label_col = static_cast<std::size_t>(label_it - header.begin());

    std::vector<std::string> names;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (c != label_col) names.push_back(header[c]);
    }

    std::vector<double> values;
    std::vector<int> labels;
    std::set<std::string> tokens;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size()) {
            throw DataError("row " + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                            " fields, found " + std::to_string(fields.size()));
        }
        for (std::size_t c = 0; c < fields.size(); ++c) {
            if (c == label_col) {
                if (fields[c].empty()) throw DataError("row " + std::to_string(line_no) + ": empty label");
                tokens.insert(fields[c]);
                labels.push_back(fields[c] == options.positive_label ? 1 : 0);
                continue;
            }
            if (fields[c].empty()) {
                values.push_back(std::numeric_limits<double>::quiet_NaN());
                continue;
            }
            std::size_t consumed = 0;
            double v = 0.0;
            try {
                v = std::stod(fields[c], &consumed);
            } catch (const std::exception&) {
                consumed = 0;
            }
            if (consumed != fields[c].size() || !std::isfinite(v)) {
                throw DataError("row " + std::to_string(line_no) + ", column '" + header[c] +
                                "': cannot parse '" + fields[c] + "' as a number");
            }
            values.push_back(v);
        }
    }
    if (tokens.size() > 2) {
        throw DataError("label column '" + options.label_column + "' has " + std::to_string(tokens.size()) +
                        " distinct values; expected 2");
    }
    const std::size_t rows = labels.size();
    const std::size_t cols = names.size();
    return Dataset(std::move(values), rows, cols, std::move(labels), std::move(names));
}

void write_csv(const Dataset& d, const std::filesystem::path& path, const std::string& label_column) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    for (const auto& n : d.column_names()) out << n << ',';
    out << label_column << '\n';
    char buf[32];
    for (std::size_t r = 0; r < d.rows(); ++r) {
        for (std::size_t c = 0; c < d.cols(); ++c) {
            const double v = d.at(r, c);
            if (!std::isnan(v)) {
                std::snprintf(buf, sizeof buf, "%.17g", v);
                out << buf;
            }
            out << ',';
        }
        out << d.label(r) << '\n';
    }
}

// ---------------------------------------------------------------- cleaning

namespace {

bool approx_equal(double a, double b) {
    return std::abs(a - b) <= 1e-9 * std::max(std::abs(a), std::abs(b));
}

}  // namespace

CleanResult clean(const Dataset& d) {
    CleanReport report;

    std::vector<std::size_t> rows;
    for (std::size_t r = 0; r < d.rows(); ++r) {
        auto row = d.row(r);
        if (std::none_of(row.begin(), row.end(), [](double v) { return std::isnan(v); })) rows.push_back(r);
    }
    report.dropped_rows = d.rows() - rows.size();
    if (rows.size() < 2) throw DataError("fewer than 2 rows remain after dropping rows with missing values");

    const auto n = rows.size();
    std::vector<std::vector<double>> cols(d.cols(), std::vector<double>(n));
    for (std::size_t c = 0; c < d.cols(); ++c) {
        for (std::size_t i = 0; i < n; ++i) cols[c][i] = d.at(rows[i], c);
    }

    enum class State { candidate, dropped };
    std::vector<State> state(d.cols(), State::candidate);
    std::vector<std::string> reason(d.cols());

    for (std::size_t c = 0; c < d.cols(); ++c) {
        const auto [lo, hi] = std::minmax_element(cols[c].begin(), cols[c].end());
        if (*lo == *hi) {
            state[c] = State::dropped;
            reason[c] = "zero_variance";
        }
    }
    for (std::size_t c = 0; c < d.cols(); ++c) {
        if (state[c] == State::dropped) continue;
        for (std::size_t p = 0; p < c; ++p) {
            if (state[p] != State::dropped && cols[p] == cols[c]) {
                state[c] = State::dropped;
                reason[c] = "duplicate";
                break;
            }
        }
    }

    // squares[j] lists every surviving column i with col_j == col_i^2. After
    // de-duplication this relation is acyclic, so "j survives unless it is
    // the square of a surviving column" has a unique solution.
    std::vector<std::vector<std::size_t>> squares(d.cols());
    for (std::size_t j = 0; j < d.cols(); ++j) {
        if (state[j] == State::dropped) continue;
        for (std::size_t i = 0; i < d.cols(); ++i) {
            if (i == j || state[i] == State::dropped) continue;
            bool match = true;
            for (std::size_t r = 0; r < n && match; ++r) match = approx_equal(cols[j][r], cols[i][r] * cols[i][r]);
            if (match) squares[j].push_back(i);
        }
    }
    std::vector<int> survives(d.cols(), -1);
    std::function<bool(std::size_t)> resolve = [&](std::size_t j) -> bool {
        if (survives[j] >= 0) return survives[j] == 1;
        bool keep = true;
        for (auto i : squares[j]) {
            if (resolve(i)) {
                keep = false;
                break;
            }
        }
        survives[j] = keep ? 1 : 0;
        return keep;
    };
    for (std::size_t c = 0; c < d.cols(); ++c) {
        if (state[c] == State::dropped) continue;
        if (!resolve(c)) {
            state[c] = State::dropped;
            reason[c] = "squared_copy";
        }
    }

    for (std::size_t c = 0; c < d.cols(); ++c) {
        if (state[c] == State::dropped) {
            report.dropped_columns.push_back({d.column_names()[c], reason[c]});
        } else {
            report.kept_columns.push_back(c);
        }
    }
    if (report.kept_columns.empty()) throw DataError("cleaning removed every feature column");

    auto data = d.subset_rows(rows).select_columns(report.kept_columns);
    return {std::move(data), std::move(report)};
}

// ---------------------------------------------------------------- scaling

MinMaxScaler MinMaxScaler::fit(const Dataset& d, std::span<const std::size_t> rows) {
    if (rows.empty()) throw ConfigError("cannot fit a scaler on zero rows");
    MinMaxScaler s;
    s.min.assign(d.cols(), std::numeric_limits<double>::infinity());
    s.max.assign(d.cols(), -std::numeric_limits<double>::infinity());
    for (auto r : rows) {
        for (std::size_t c = 0; c < d.cols(); ++c) {
            s.min[c] = std::min(s.min[c], d.at(r, c));
            s.max[c] = std::max(s.max[c], d.at(r, c));
        }
    }
    return s;
}

MinMaxScaler MinMaxScaler::fit(const Dataset& d) {
    std::vector<std::size_t> rows(d.rows());
    std::iota(rows.begin(), rows.end(), 0);
    return fit(d, rows);
}

Dataset MinMaxScaler::transform(const Dataset& d) const {
    if (d.cols() != min.size()) throw ConfigError("scaler width does not match dataset");
    std::vector<double> values(d.values().begin(), d.values().end());
    for (std::size_t r = 0; r < d.rows(); ++r) {
        for (std::size_t c = 0; c < d.cols(); ++c) {
            auto& v = values[r * d.cols() + c];
            v = max[c] > min[c] ? apply(c, v) : 0.0;
        }
    }
    return Dataset(std::move(values), d.rows(), d.cols(), d.labels(), d.column_names(), d.provenance(),
                   d.synth_seed());
}

NormalizeResult normalize_minmax(const Dataset& d) {
    auto scaler = MinMaxScaler::fit(d);
    for (std::size_t c = 0; c < d.cols(); ++c) {
        if (!(scaler.max[c] > scaler.min[c])) {
            throw DataError("column '" + d.column_names()[c] + "' is constant; run clean() before normalizing");
        }
    }
    auto data = scaler.transform(d);
    return {std::move(data), std::move(scaler)};
}

// ---------------------------------------------------------------- splitting

namespace {

std::array<std::vector<std::size_t>, 2> rows_by_class(const Dataset& d) {
    std::array<std::vector<std::size_t>, 2> by_class;
    for (std::size_t r = 0; r < d.rows(); ++r) by_class[static_cast<std::size_t>(d.label(r))].push_back(r);
    return by_class;
}

// Distributes `total` over classes in proportion to `weights`, largest
// remainder first (ties to the lower class), never exceeding `caps`.
std::array<std::size_t, 2> apportion(std::size_t total, const std::array<std::size_t, 2>& weights,
                                     const std::array<std::size_t, 2>& caps) {
    const double sum = static_cast<double>(weights[0] + weights[1]);
    std::array<std::size_t, 2> out{};
    std::array<double, 2> rem{};
    std::size_t assigned = 0;
    for (std::size_t c = 0; c < 2; ++c) {
        const double share = static_cast<double>(total) * static_cast<double>(weights[c]) / sum;
        out[c] = std::min(caps[c], static_cast<std::size_t>(std::floor(share + 1e-9)));
        rem[c] = share - static_cast<double>(out[c]);
        assigned += out[c];
    }
    while (assigned < total) {
        std::size_t best = 2;
        for (std::size_t c = 0; c < 2; ++c) {
            if (out[c] >= caps[c]) continue;
            if (best == 2 || rem[c] > rem[best] + 1e-12) best = c;
        }
        if (best == 2) break;
        ++out[best];
        rem[best] -= 1.0;
        ++assigned;
    }
    return out;
}

}  // namespace

SplitIndices split(const Dataset& d, double train_frac, double validate_frac, std::uint64_t seed) {
    if (!(train_frac > 0.0) || !(validate_frac > 0.0) || !(train_frac + validate_frac < 1.0)) {
        throw ConfigError("split fractions must be positive with train + validate < 1");
    }
    auto by_class = rows_by_class(d);
    for (std::size_t c = 0; c < 2; ++c) {
        if (by_class[c].size() < 3) {
            throw DataError("class " + std::to_string(c) + " has " + std::to_string(by_class[c].size()) +
                            " rows; at least 3 are needed for a three-way stratified split");
        }
    }
    const auto n = static_cast<double>(d.rows());
    const auto n_train = static_cast<std::size_t>(std::llround(n * train_frac));
    const auto n_validate = static_cast<std::size_t>(std::llround(n * validate_frac));

    const std::array<std::size_t, 2> sizes{by_class[0].size(), by_class[1].size()};
    const auto train = apportion(n_train, sizes, sizes);
    const std::array<std::size_t, 2> left{sizes[0] - train[0], sizes[1] - train[1]};
    const auto validate = apportion(n_validate, sizes, left);

    SplitIndices out;
    for (std::size_t c = 0; c < 2; ++c) {
        auto rng = Rng::stream(seed, 0x5711u, c);
        shuffle(by_class[c], rng);
        const auto& rows = by_class[c];
        out.train.insert(out.train.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(train[c]));
        out.validate.insert(out.validate.end(), rows.begin() + static_cast<std::ptrdiff_t>(train[c]),
                            rows.begin() + static_cast<std::ptrdiff_t>(train[c] + validate[c]));
        out.test.insert(out.test.end(), rows.begin() + static_cast<std::ptrdiff_t>(train[c] + validate[c]),
                        rows.end());
    }
    std::sort(out.train.begin(), out.train.end());
    std::sort(out.validate.begin(), out.validate.end());
    std::sort(out.test.begin(), out.test.end());
    return out;
}

std::vector<Fold> kfold_indices(const Dataset& d, std::size_t k, std::uint64_t seed) {
    if (k < 2) throw ConfigError("k-fold needs k >= 2");
    if (k > d.rows()) {
        throw ConfigError("k = " + std::to_string(k) + " exceeds row count " + std::to_string(d.rows()));
    }
    auto by_class = rows_by_class(d);
    for (std::size_t c = 0; c < 2; ++c) {
        if (by_class[c].size() < 2) {
            throw DataError("class " + std::to_string(c) + " has fewer than 2 rows; every training fold must see it");
        }
    }
    std::vector<std::size_t> order;
    for (std::size_t c = 0; c < 2; ++c) {
        auto rng = Rng::stream(seed, 0xf01du, c);
        shuffle(by_class[c], rng);
        order.insert(order.end(), by_class[c].begin(), by_class[c].end());
    }
    std::vector<std::size_t> fold_of(d.rows());
    for (std::size_t p = 0; p < order.size(); ++p) fold_of[order[p]] = p % k;

    std::vector<Fold> folds(k);
    for (std::size_t r = 0; r < d.rows(); ++r) {
        for (std::size_t f = 0; f < k; ++f) {
            (fold_of[r] == f ? folds[f].test : folds[f].train).push_back(r);
        }
    }
    return folds;
}

// ---------------------------------------------------------------- synthesis

SynthResult synthesize(const SynthSpec& spec) {
    if (spec.n_rows < 2) throw ConfigError("synthetic dataset needs at least 2 rows");
    if (spec.n_cols < 1) throw ConfigError("synthetic dataset needs at least 1 column");
    if (!(spec.class_separation > 0.0)) throw ConfigError("class_separation must be positive");
    if (spec.n_informative + 2 * spec.redundant_pairs > spec.n_cols) {
        throw ConfigError("n_informative + 2 * redundant_pairs exceeds n_cols");
    }
    const std::size_t singles = spec.n_cols - 2 * spec.redundant_pairs;

    std::vector<std::size_t> positions(singles);
    std::iota(positions.begin(), positions.end(), 0);
    auto layout_rng = Rng::stream(spec.seed, 0x1a70u);
    shuffle(positions, layout_rng);
    FeatureMask truth(spec.n_cols);
    for (std::size_t i = 0; i < spec.n_informative; ++i) truth.set(positions[i]);

    std::vector<std::string> names;
    for (std::size_t c = 0; c < singles; ++c) names.push_back("f" + std::to_string(c));
    for (std::size_t p = 0; p < spec.redundant_pairs; ++p) {
        names.push_back("r" + std::to_string(p));
        names.push_back("r" + std::to_string(p) + "_sq");
    }

    std::vector<double> values(spec.n_rows * spec.n_cols);
    std::vector<int> labels(spec.n_rows);
    auto rng = Rng::stream(spec.seed, 0xda7au);
    for (std::size_t r = 0; r < spec.n_rows; ++r) {
        labels[r] = static_cast<int>(r % 2);
        double* row = values.data() + r * spec.n_cols;
        for (std::size_t c = 0; c < singles; ++c) {
            const double shift = truth.test(c) && labels[r] == 1 ? spec.class_separation : 0.0;
            row[c] = rng.normal() + shift;
        }
        for (std::size_t p = 0; p < spec.redundant_pairs; ++p) {
            const double base = rng.normal();
            row[singles + 2 * p] = base;
            row[singles + 2 * p + 1] = base * base;
        }
    }
    Dataset data(std::move(values), spec.n_rows, spec.n_cols, std::move(labels), std::move(names),
                 Provenance::synthetic, spec.seed);
    return {std::move(data), std::move(truth)};
}

}  // namespace swarmselect
