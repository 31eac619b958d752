#include "swarmselect/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "swarmselect/classifiers.hpp"
#include "swarmselect/error.hpp"
#include "swarmselect/evaluation.hpp"
#include "swarmselect/ranking.hpp"
#include "swarmselect/serialize.hpp"

namespace swarmselect {

using json = nlohmann::ordered_json;

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot read " + path.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    if (out.empty()) throw ConfigError("empty list '" + s + "'");
    return out;
}

template <typename T, typename Parse>
std::vector<T> parse_list(const std::string& s, Parse parse) {
    std::vector<T> out;
    for (const auto& item : split_list(s)) out.push_back(parse(item));
    return out;
}

void emit(std::ostream& out, const std::filesystem::path& path, const std::string& text) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    write_text(path, text);
}

Dataset load_prepared(const std::string& path, const CsvOptions& csv, bool do_clean) {
    auto raw = load_csv(path, csv);
    return do_clean ? prepare_dataset(raw) : normalize_minmax(raw).data;
}

FeatureMask mask_from_names(const Dataset& d, const std::string& list) {
    FeatureMask mask(d.cols());
    const auto& names = d.column_names();
    for (const auto& name : split_list(list)) {
        const auto it = std::find(names.begin(), names.end(), name);
        if (it == names.end()) throw ConfigError("unknown feature '" + name + "'");
        mask.set(static_cast<std::size_t>(it - names.begin()));
    }
    return mask;
}

struct DataFlags {
    std::string path;
    std::string label_column = "label";
    std::string positive_label = "1";
    bool no_clean = false;

    void attach(CLI::App* cmd, bool required = true) {
        auto* opt = cmd->add_option("--data", path, "input CSV");
        if (required) opt->required();
        cmd->add_option("--label-column", label_column, "name of the label column");
        cmd->add_option("--positive-label", positive_label, "label token treated as class 1");
        cmd->add_flag("--no-clean", no_clean, "skip row/column cleaning (scaling still applies)");
    }
    CsvOptions csv() const { return {label_column, positive_label}; }
    Dataset load() const { return load_prepared(path, csv(), !no_clean); }
};

}  // namespace

void RunConfig::validate() const {
    if (data.has_value() == synth.has_value()) throw ConfigError("exactly one of data and synth must be given");
    grid.validate();
}

RunConfig run_config_from_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    RunConfig cfg;
    try {
        for (const auto& [key, v] : doc.items()) {
            if (key == "data") {
                cfg.data = v.get<std::string>();
            } else if (key == "synth") {
                SynthSpec s;
                for (const auto& [k, x] : v.items()) {
                    if (k == "rows") s.n_rows = x.get<std::size_t>();
                    else if (k == "cols") s.n_cols = x.get<std::size_t>();
                    else if (k == "informative") s.n_informative = x.get<std::size_t>();
                    else if (k == "separation") s.class_separation = x.get<double>();
                    else if (k == "redundant_pairs") s.redundant_pairs = x.get<std::size_t>();
                    else if (k == "seed") s.seed = x.get<std::uint64_t>();
                    else throw ConfigError("synth: unknown key '" + k + "'");
                }
                cfg.synth = s;
            } else if (key == "label_column") {
                cfg.csv.label_column = v.get<std::string>();
            } else if (key == "positive_label") {
                cfg.csv.positive_label = v.get<std::string>();
            } else if (key == "output_dir") {
                cfg.output_dir = v.get<std::string>();
            } else if (key == "formats") {
                std::string joined;
                for (const auto& f : v) joined += (joined.empty() ? "" : ",") + f.get<std::string>();
                cfg.formats = parse_formats(joined);
            } else if (key == "timing") {
                cfg.timing = v.get<bool>();
            } else if (key == "seed") {
                cfg.grid.seed = v.get<std::uint64_t>();
            } else if (key == "grid") {
                cfg.grid = grid_config_from_json(v.dump(), cfg.grid);
            } else {
                throw ConfigError("unknown key '" + key + "'");
            }
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return cfg;
}

Dataset prepare_dataset(const Dataset& raw) { return normalize_minmax(clean(raw).data).data; }

int execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Wrapper feature selection with ranked seeding and binary swarm optimizers", "swarmselect"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "swarmselect 0.1.0");

    // synth
    auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic dataset with a planted feature mask");
    SynthSpec synth;
    std::string synth_out;
    synth_cmd->add_option("--rows", synth.n_rows, "number of rows")->capture_default_str();
    synth_cmd->add_option("--cols", synth.n_cols, "number of single columns")->capture_default_str();
    synth_cmd->add_option("--informative", synth.n_informative, "informative columns")->capture_default_str();
    synth_cmd->add_option("--separation", synth.class_separation, "class mean gap")->capture_default_str();
    synth_cmd->add_option("--redundant", synth.redundant_pairs, "trailing (x, x^2) pairs")->capture_default_str();
    synth_cmd->add_option("--seed", synth.seed, "random seed")->capture_default_str();
    synth_cmd->add_option("-o,--output", synth_out, "output CSV")->required();

    // rank
    auto* rank_cmd = app.add_subcommand("rank", "score features with pearson, spearman and/or relief");
    DataFlags rank_data;
    rank_data.attach(rank_cmd);
    std::string rank_method = "all";
    std::optional<std::size_t> rank_top;
    std::string rank_out, rank_svg;
    std::uint64_t rank_seed = 42;
    rank_cmd->add_option("--method", rank_method, "pearson|spearman|relief|all")->capture_default_str();
    rank_cmd->add_option("--top", rank_top, "size of the leading mask (default: half the features)");
    rank_cmd->add_option("--svg", rank_svg, "write a ranking heatmap here");
    rank_cmd->add_option("-o,--output", rank_out, "output JSON (default stdout)");
    rank_cmd->add_option("--seed", rank_seed, "random seed")->capture_default_str();

    // select
    auto* select_cmd = app.add_subcommand("select", "run one binary optimizer against the wrapper fitness");
    DataFlags select_data;
    select_data.attach(select_cmd);
    std::string select_alg = "gsa", select_clf = "knn", select_ranker = "relief", select_out, select_config;
    bool select_unseeded = false;
    std::size_t select_agents = 30, select_iters = 100;
    double select_weight = kDefaultFitnessWeight;
    std::uint64_t select_seed = 42;
    select_cmd->add_option("--algorithm", select_alg, "gsa|bba|cs|ga|gwo|pso|woa")->capture_default_str();
    select_cmd->add_option("--classifier", select_clf, "fitness classifier knn|rf|svm")->capture_default_str();
    select_cmd->add_option("--ranker", select_ranker, "ranker for the leading mask")->capture_default_str();
    select_cmd->add_flag("--unseeded", select_unseeded, "start without a leading mask");
    select_cmd->add_option("--agents", select_agents, "population size")->capture_default_str();
    select_cmd->add_option("--iterations", select_iters, "iterations")->capture_default_str();
    select_cmd->add_option("--weight", select_weight, "accuracy weight in the fitness")->capture_default_str();
    select_cmd->add_option("--config", select_config, "grid config JSON supplying optimizer/classifier params");
    select_cmd->add_option("--seed", select_seed, "random seed")->capture_default_str();
    select_cmd->add_option("-o,--output", select_out, "output JSON (default stdout)");

    // evaluate
    auto* eval_cmd = app.add_subcommand("evaluate", "train and score a classifier on a fixed feature mask");
    DataFlags eval_data;
    eval_data.attach(eval_cmd);
    std::string eval_mask, eval_features, eval_clf = "knn", eval_out;
    std::size_t eval_k = 10;
    double eval_weight = kDefaultFitnessWeight;
    std::uint64_t eval_seed = 42;
    auto* mask_opt = eval_cmd->add_option("--mask", eval_mask, "hex mask");
    auto* feat_opt = eval_cmd->add_option("--features", eval_features, "comma-separated feature names");
    mask_opt->excludes(feat_opt);
    eval_cmd->add_option("--classifier", eval_clf, "knn|rf|svm")->capture_default_str();
    eval_cmd->add_option("--cv-k", eval_k, "cross-validation folds")->capture_default_str();
    eval_cmd->add_option("--weight", eval_weight, "accuracy weight in the fitness")->capture_default_str();
    eval_cmd->add_option("--seed", eval_seed, "random seed")->capture_default_str();
    eval_cmd->add_option("-o,--output", eval_out, "output JSON (default stdout)");

    // grid
    auto* grid_cmd = app.add_subcommand("grid", "sweep ranker x optimizer x classifier and report");
    DataFlags grid_data;
    grid_data.attach(grid_cmd, false);
    std::string grid_config, grid_dir, grid_formats, grid_rankers, grid_selectors, grid_classifiers, grid_fitness;
    std::uint64_t grid_seed = 42;
    std::size_t grid_agents = 30, grid_iters = 100, grid_threads = 0;
    bool grid_timing = false;
    grid_cmd->add_option("--config", grid_config, "run config JSON");
    grid_cmd->add_option("-o,--out-dir", grid_dir, "output directory");
    grid_cmd->add_option("--formats", grid_formats, "comma list of json,csv,svg");
    auto* grid_seed_opt = grid_cmd->add_option("--seed", grid_seed, "master seed (default 42)");
    grid_cmd->add_option("--rankers", grid_rankers, "comma list of rankers");
    grid_cmd->add_option("--selectors", grid_selectors, "comma list of optimizers");
    grid_cmd->add_option("--classifiers", grid_classifiers, "comma list of classifiers");
    grid_cmd->add_option("--fitness-classifier", grid_fitness, "surrogate classifier inside the fitness");
    auto* agents_opt = grid_cmd->add_option("--agents", grid_agents, "population size");
    auto* iters_opt = grid_cmd->add_option("--iterations", grid_iters, "iterations");
    auto* threads_opt = grid_cmd->add_option("--threads", grid_threads, "combination workers");
    grid_cmd->add_flag("--timing", grid_timing, "include wall_time in results.json");

    // report
    auto* report_cmd = app.add_subcommand("report", "re-render reports from a results.json");
    std::string report_in, report_dir = "report", report_formats = "csv,svg";
    report_cmd->add_option("--results", report_in, "results.json")->required();
    report_cmd->add_option("-o,--out-dir", report_dir, "output directory")->capture_default_str();
    report_cmd->add_option("--formats", report_formats, "comma list of json,csv,svg")->capture_default_str();

    auto fail = [&](const char* code, int exit_code, const std::string& message) {
        std::string line = message;
        std::replace(line.begin(), line.end(), '\n', ' ');
        err << "error: " << code << ": " << line << "\n";
        return exit_code;
    };

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << app.version() << "\n";
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << app.help();
        return fail("usage", kExitUsage, e.what());
    }

    try {
        if (synth_cmd->parsed()) {
            const auto result = synthesize(synth);
            const std::filesystem::path csv_path = synth_out;
            write_csv(result.data, csv_path);
            auto sidecar = csv_path;
            sidecar.replace_extension(".mask.json");
            json features = json::array();
            for (auto k : result.true_mask.indices()) features.push_back(result.data.column_names()[k]);
            const json truth = {{"hex", result.true_mask.to_hex()},
                                {"n_features", result.true_mask.size()},
                                {"indices", result.true_mask.indices()},
                                {"features", features},
                                {"seed", synth.seed}};
            write_text(sidecar, truth.dump(2) + "\n");
            out << csv_path.string() << " " << std::filesystem::file_size(csv_path) << "\n";
            out << sidecar.string() << " " << std::filesystem::file_size(sidecar) << "\n";
            return kExitOk;
        }

        if (rank_cmd->parsed()) {
            const auto d = rank_data.load();
            std::vector<RankMethod> methods;
            if (rank_method == "all") methods = {RankMethod::pearson, RankMethod::spearman, RankMethod::relief};
            else methods = parse_list<RankMethod>(rank_method, parse_rank_method);
            std::vector<RankedFeatures> rankings;
            for (auto m : methods) rankings.push_back(rank_features(d, m, rank_seed));
            const std::size_t k = rank_top.value_or((d.cols() + 1) / 2);
            if (k < 1 || k > d.cols()) throw ConfigError("--top must lie in [1, number of features]");
            emit(out, rank_out, ranking_to_json(rankings, d.column_names(), k));
            if (!rank_svg.empty()) write_text(rank_svg, ranking_heatmap_svg(rankings, d.column_names()));
            return kExitOk;
        }

        if (select_cmd->parsed()) {
            const auto d = select_data.load();
            GridConfig g;
            if (!select_config.empty()) g = grid_config_from_json(read_file(select_config));
            g.seed = select_seed;
            g.validate();
            const auto parts = grid_split(d, g);
            ClassifierSpec spec = g.classifier;
            spec.kind = parse_classifier_kind(select_clf);
            spec.seed = select_seed;
            SelectorConfig sel = g.selector;
            sel.algorithm = parse_algorithm(select_alg);
            sel.num_agents = select_agents;
            sel.max_iterations = select_iters;
            sel.seed = select_seed;
            if (!select_unseeded) {
                std::vector<std::size_t> seen;
                std::merge(parts.train.begin(), parts.train.end(), parts.validate.begin(), parts.validate.end(),
                           std::back_inserter(seen));
                sel.leading_mask = leading_mask(rank_features(d.subset_rows(seen), parse_rank_method(select_ranker)));
            }
            const auto total = d.cols();
            const auto result = run_selector(sel, total, [&](const FeatureMask& mask) {
                const auto cm = evaluate_masked(spec, d, parts.train, parts.validate, mask);
                return fitness(cm, mask, total, select_weight).value;
            });
            emit(out, select_out, selection_to_json(result, sel, d.column_names()));
            return kExitOk;
        }

        if (eval_cmd->parsed()) {
            const auto d = eval_data.load();
            FeatureMask mask;
            if (!eval_mask.empty()) mask = FeatureMask::from_hex(eval_mask, d.cols());
            else if (!eval_features.empty()) mask = mask_from_names(d, eval_features);
            else mask = FeatureMask(d.cols(), true);
            if (mask.none()) throw ConfigError("mask selects no features");
            ClassifierSpec spec;
            spec.kind = parse_classifier_kind(eval_clf);
            spec.seed = eval_seed;
            GridConfig g;
            g.seed = eval_seed;
            const auto parts = grid_split(d, g);
            std::vector<std::size_t> seen;
            std::merge(parts.train.begin(), parts.train.end(), parts.validate.begin(), parts.validate.end(),
                       std::back_inserter(seen));
            const auto cm = evaluate_masked(spec, d, seen, parts.test, mask);
            const auto m = metrics(cm);
            const auto cv = cross_validate(spec, d, mask, eval_k, eval_seed);
            const auto fit = fitness(m.accuracy, mask.popcount(), d.cols(), eval_weight);
            const json j = {{"classifier", to_string(spec.kind)},
                            {"mask", mask.to_hex()},
                            {"n_selected", mask.popcount()},
                            {"feature_reduction", format_percent(fit.reduction_part)},
                            {"confusion", {{"tp", cm.tp}, {"fp", cm.fp}, {"tn", cm.tn}, {"fn", cm.fn}}},
                            {"accuracy", m.accuracy},
                            {"recall_autism", m.recall_autism},
                            {"recall_typical", m.recall_typical},
                            {"precision_autism", m.precision_autism},
                            {"precision_typical", m.precision_typical},
                            {"f1_autism", m.f1_autism},
                            {"f1_typical", m.f1_typical},
                            {"fitness", fit.value},
                            {"cv_mean", cv.mean},
                            {"cv_std", cv.stddev},
                            {"warnings", m.warnings}};
            emit(out, eval_out, j.dump(2) + "\n");
            return kExitOk;
        }

        if (grid_cmd->parsed()) {
            RunConfig cfg;
            if (!grid_config.empty()) cfg = run_config_from_json(read_file(grid_config));
            if (!grid_data.path.empty()) {
                cfg.data = grid_data.path;
                cfg.synth.reset();
                cfg.csv = grid_data.csv();
            }
            if (!cfg.data && !cfg.synth) throw ConfigError("grid needs --data or a config with data/synth");
            if (!grid_dir.empty()) cfg.output_dir = grid_dir;
            if (!grid_formats.empty()) cfg.formats = parse_formats(grid_formats);
            if (grid_seed_opt->count()) cfg.grid.seed = grid_seed;
            if (!grid_rankers.empty()) cfg.grid.rankers = parse_list<RankMethod>(grid_rankers, parse_rank_method);
            if (!grid_selectors.empty()) cfg.grid.selectors = parse_list<Algorithm>(grid_selectors, parse_algorithm);
            if (!grid_classifiers.empty()) {
                cfg.grid.classifiers = parse_list<ClassifierKind>(grid_classifiers, parse_classifier_kind);
            }
            if (!grid_fitness.empty()) cfg.grid.fitness_classifier = parse_classifier_kind(grid_fitness);
            if (agents_opt->count()) cfg.grid.selector.num_agents = grid_agents;
            if (iters_opt->count()) cfg.grid.selector.max_iterations = grid_iters;
            if (threads_opt->count()) cfg.grid.threads = grid_threads;
            if (grid_timing) cfg.timing = true;
            cfg.validate();

            Dataset d = cfg.data ? load_prepared(cfg.data->string(), cfg.csv, !grid_data.no_clean)
                                 : prepare_dataset(synthesize(*cfg.synth).data);
            const auto results = run_grid(d, cfg.grid);
            const auto manifest = emit_report(results, cfg.formats, cfg.output_dir, cfg.timing);
            for (const auto& m : manifest) out << (cfg.output_dir / m.file).string() << " " << m.bytes << "\n";
            const auto failed = std::count_if(results.begin(), results.end(), [](const auto& r) { return r.failed; });
            if (failed == static_cast<std::ptrdiff_t>(results.size())) {
                for (const auto& r : results) err << r.name() << ": " << r.error << "\n";
                throw DataError("every combination failed");
            }
            const auto& best = select_best(results);
            out << "best " << best.name() << " accuracy " << best.test_metrics.accuracy << " features "
                << best.n_selected << " reduction " << format_percent(best.feature_reduction) << "\n";
            return kExitOk;
        }

        if (report_cmd->parsed()) {
            const auto results = results_from_json(read_file(report_in));
            const auto manifest = emit_report(results, parse_formats(report_formats), report_dir);
            for (const auto& m : manifest) {
                out << (std::filesystem::path(report_dir) / m.file).string() << " " << m.bytes << "\n";
            }
            return kExitOk;
        }
    } catch (const ConfigError& e) {
        return fail("usage", kExitUsage, e.what());
    } catch (const DataError& e) {
        return fail("data", kExitData, e.what());
    } catch (const std::exception& e) {
        return fail("internal", kExitInternal, e.what());
    }
    return fail("usage", kExitUsage, "no subcommand");
}

int execute(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return execute(args, std::cout, std::cerr);
}

}  // namespace swarmselect
