#include "swarmselect/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "swarmselect/error.hpp"
#include "swarmselect/evaluation.hpp"
#include "swarmselect/serialize.hpp"

namespace swarmselect {

namespace {

std::string fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

// 0.98765 stays, 1.00000 -> 1.0, 0.68470 -> 0.6847
std::string table_number(double v) {
    auto s = fixed(round_half_up(v, 5), 5);
    while (s.size() > 1 && s.back() == '0' && s[s.size() - 2] != '.') s.pop_back();
    return s;
}

// 0.96875 -> 96.875%, 1.0 -> 100%
std::string trimmed_percent(double fraction) {
    auto s = fixed(round_half_up(fraction * 100.0, 3), 3);
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
    return s + "%";
}

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

const char* classifier_colour(ClassifierKind k) {
    switch (k) {
        case ClassifierKind::knn: return "#4c78a8";
        case ClassifierKind::rf: return "#59a14f";
        case ClassifierKind::svm: return "#e15759";
    }
    return "#999999";
}

}  // namespace

ReportFormats parse_formats(std::string_view list) {
    ReportFormats f{false, false, false};
    std::size_t start = 0;
    bool any = false;
    while (start <= list.size()) {
        const auto end = std::min(list.find(',', start), list.size());
        const auto token = list.substr(start, end - start);
        if (token == "json") f.json = true;
        else if (token == "csv") f.csv = true;
        else if (token == "svg") f.svg = true;
        else throw ConfigError("unknown report format '" + std::string(token) + "'");
        any = true;
        start = end + 1;
    }
    if (!any) throw ConfigError("no report format given");
    return f;
}

std::string results_csv(const std::vector<CombinationResult>& results) {
    std::ostringstream out;
    out << "Ranking,NatureAlgo,MLAlgo,Accuracy,RecallAutism,RecallTypical,PrecisionAutism,PrecisionTypical,"
           "F1Autism,F1Typical,Selected,FeatureReduction,CvMean,CvStd,Fitness,GatesPassed,Status\n";
    for (const auto& r : results) {
        out << to_string(r.ranker) << ',' << to_string(r.selector) << ',' << to_string(r.classifier) << ',';
        if (r.failed) {
            out << ",,,,,,,,,,,,,failed\n";
            continue;
        }
        const auto& m = r.test_metrics;
        for (double v : {m.accuracy, m.recall_autism, m.recall_typical, m.precision_autism, m.precision_typical,
                         m.f1_autism, m.f1_typical}) {
            out << table_number(v) << ',';
        }
        out << r.n_selected << ',' << format_percent(r.feature_reduction) << ',' << table_number(r.cv_mean) << ','
            << table_number(r.cv_std) << ',' << table_number(r.fitness) << ','
            << (r.gates_passed ? "yes" : "no") << ",ok\n";
    }
    return out.str();
}

std::string summary_csv(const std::vector<CombinationResult>& results) {
    std::map<Algorithm, const CombinationResult*> best;
    for (const auto& r : results) {
        if (r.failed) continue;
        auto& slot = best[r.selector];
        if (!slot || better_result(r, *slot)) slot = &r;
    }
    std::vector<const CombinationResult*> rows;
    for (const auto& [alg, r] : best) rows.push_back(r);
    std::sort(rows.begin(), rows.end(), [](auto* a, auto* b) { return better_result(*a, *b); });

    std::ostringstream out;
    out << "Ranking,FeatureSelectionAlgorithm,MLAlgo,Accuracy,SelectedFeatures,FeatureReduction\n";
    for (const auto* r : rows) {
        out << to_string(r->ranker) << ',' << to_string(r->selector) << ',' << to_string(r->classifier) << ','
            << trimmed_percent(r->test_metrics.accuracy) << ',' << r->n_selected << ','
            << format_percent(r->feature_reduction) << '\n';
    }
    return out.str();
}

std::string accuracy_svg(const std::vector<CombinationResult>& results) {
    constexpr int bar_w = 14, gap = 4, group_gap = 30, left = 50, top = 30, plot_h = 240, label_h = 90;

    std::vector<RankMethod> rankers;
    for (const auto& r : results) {
        if (std::find(rankers.begin(), rankers.end(), r.ranker) == rankers.end()) rankers.push_back(r.ranker);
    }
    int width = left + 20;
    for (auto rk : rankers) {
        const auto n = std::count_if(results.begin(), results.end(), [&](const auto& r) { return r.ranker == rk; });
        width += static_cast<int>(n) * (bar_w + gap) + group_gap;
    }
    const int height = top + plot_h + label_h + 30;

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" font-family=\"sans-serif\" font-size=\"10\">\n";
    out << "<text x=\"" << left << "\" y=\"18\" font-size=\"13\">Test accuracy by combination</text>\n";
    for (int tick = 0; tick <= 4; ++tick) {
        const double v = tick * 0.25;
        const double y = top + plot_h * (1.0 - v);
        out << "<line x1=\"" << left << "\" y1=\"" << fixed(y, 1) << "\" x2=\"" << width - 10 << "\" y2=\""
            << fixed(y, 1) << "\" stroke=\"#dddddd\"/>\n";
        out << "<text x=\"" << left - 6 << "\" y=\"" << fixed(y + 3, 1) << "\" text-anchor=\"end\">" << fixed(v, 2)
            << "</text>\n";
    }

    int x = left + 10;
    for (auto rk : rankers) {
        const int group_start = x;
        out << "<g class=\"group\" data-ranker=\"" << to_string(rk) << "\">\n";
        for (const auto& r : results) {
            if (r.ranker != rk) continue;
            const double acc = r.failed ? 0.0 : r.test_metrics.accuracy;
            const double h = plot_h * acc;
            const double y = top + plot_h - h;
            out << "<rect class=\"bar\" x=\"" << x << "\" y=\"" << fixed(y, 1) << "\" width=\"" << bar_w
                << "\" height=\"" << fixed(h, 1) << "\" fill=\"" << classifier_colour(r.classifier)
                << "\" data-value=\"" << table_number(acc) << "\"><title>" << xml_escape(r.name()) << ' '
                << (r.failed ? std::string("failed") : table_number(acc)) << "</title></rect>\n";
            const int lx = x + bar_w / 2;
            const int ly = top + plot_h + 6;
            out << "<text x=\"" << lx << "\" y=\"" << ly << "\" transform=\"rotate(60 " << lx << ' ' << ly
                << ")\">" << to_string(r.selector) << '/' << to_string(r.classifier) << "</text>\n";
            x += bar_w + gap;
        }
        out << "<text x=\"" << (group_start + x - gap) / 2 << "\" y=\"" << top + plot_h + label_h + 15
            << "\" text-anchor=\"middle\" font-size=\"12\">" << to_string(rk) << "</text>\n";
        out << "</g>\n";
        x += group_gap;
    }
    out << "</svg>\n";
    return out.str();
}

std::string ranking_heatmap_svg(const std::vector<RankedFeatures>& rankings,
                                const std::vector<std::string>& feature_names) {
    constexpr int cell = 16, left = 70, top = 90;
    const int cols = static_cast<int>(feature_names.size());
    const int width = left + cols * cell + 20;
    const int height = top + static_cast<int>(rankings.size()) * cell + 20;

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" font-family=\"sans-serif\" font-size=\"10\">\n";
    for (int c = 0; c < cols; ++c) {
        const int lx = left + c * cell + cell / 2;
        out << "<text x=\"" << lx << "\" y=\"" << top - 4 << "\" transform=\"rotate(-60 " << lx << ' ' << top - 4
            << ")\">" << xml_escape(feature_names[static_cast<std::size_t>(c)]) << "</text>\n";
    }
    int row = 0;
    for (const auto& r : rankings) {
        const int y = top + row * cell;
        out << "<text x=\"" << left - 6 << "\" y=\"" << y + cell - 4 << "\" text-anchor=\"end\">"
            << to_string(r.method) << "</text>\n";
        const auto [lo, hi] = std::minmax_element(r.scores.begin(), r.scores.end());
        const double span = *hi - *lo;
        for (std::size_t c = 0; c < r.scores.size(); ++c) {
            const double v = span > 0.0 ? (r.scores[c] - *lo) / span : 0.0;
            const int shade = static_cast<int>(255.0 - 200.0 * v);
            out << "<rect class=\"cell\" x=\"" << left + static_cast<int>(c) * cell << "\" y=\"" << y
                << "\" width=\"" << cell << "\" height=\"" << cell << "\" fill=\"rgb(" << shade << ',' << shade
                << ",255)\"><title>" << xml_escape(feature_names[c]) << ' ' << table_number(r.scores[c])
                << "</title></rect>\n";
        }
        ++row;
    }
    out << "</svg>\n";
    return out.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot write " + path.string());
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!f) throw DataError("cannot write " + path.string());
}

std::vector<ManifestEntry> emit_report(const std::vector<CombinationResult>& results, const ReportFormats& formats,
                                       const std::filesystem::path& out_dir, bool include_timing) {
    if (results.empty()) throw ConfigError("no results to report");
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw DataError("cannot create " + out_dir.string() + ": " + ec.message());

    std::vector<ManifestEntry> manifest;
    auto emit = [&](const std::string& name, const std::string& text) {
        write_text(out_dir / name, text);
        manifest.push_back({name, std::filesystem::file_size(out_dir / name)});
    };
    if (formats.json) emit("results.json", results_to_json(results, include_timing));
    if (formats.csv) {
        emit("results.csv", results_csv(results));
        emit("summary.csv", summary_csv(results));
    }
    if (formats.svg) emit("accuracy.svg", accuracy_svg(results));
    return manifest;
}

}  // namespace swarmselect
