#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "swarmselect/cli.hpp"
#include "swarmselect/error.hpp"
#include "swarmselect/evaluation.hpp"
#include "swarmselect/metaheuristics.hpp"
#include "swarmselect/pipeline.hpp"
#include "swarmselect/ranking.hpp"
#include "swarmselect/serialize.hpp"

namespace py = pybind11;
using namespace swarmselect;

namespace {

py::object from_json(const std::string& text) { return py::module_::import("json").attr("loads")(text); }

std::string to_json_text(const py::object& obj) {
    if (obj.is_none()) return "{}";
    if (py::isinstance<py::str>(obj)) return obj.cast<std::string>();
    return py::module_::import("json").attr("dumps")(obj).cast<std::string>();
}

Dataset make_dataset(const std::vector<std::vector<double>>& rows, const std::vector<int>& labels,
                     std::optional<std::vector<std::string>> names) {
    if (rows.empty()) throw DataError("dataset needs at least 2 rows, got 0");
    const std::size_t cols = rows.front().size();
    std::vector<double> values;
    values.reserve(rows.size() * cols);
    for (const auto& r : rows) {
        if (r.size() != cols) throw DataError("rows differ in length");
        values.insert(values.end(), r.begin(), r.end());
    }
    if (!names) {
        names.emplace();
        for (std::size_t c = 0; c < cols; ++c) names->push_back("f" + std::to_string(c));
    }
    return Dataset(std::move(values), rows.size(), cols, labels, *names);
}

std::vector<std::vector<double>> dataset_rows(const Dataset& d) {
    std::vector<std::vector<double>> out;
    for (std::size_t r = 0; r < d.rows(); ++r) {
        auto row = d.row(r);
        out.emplace_back(row.begin(), row.end());
    }
    return out;
}

FeatureMask mask_of(const Dataset& d, const std::vector<std::size_t>& features) {
    return FeatureMask::from_indices(d.cols(), features);
}

py::dict metrics_dict(const MetricsReport& m) {
    py::dict out;
    out["accuracy"] = m.accuracy;
    out["recall_autism"] = m.recall_autism;
    out["recall_typical"] = m.recall_typical;
    out["precision_autism"] = m.precision_autism;
    out["precision_typical"] = m.precision_typical;
    out["f1_autism"] = m.f1_autism;
    out["f1_typical"] = m.f1_typical;
    out["warnings"] = m.warnings;
    return out;
}

GridConfig grid_config(const py::object& config) { return grid_config_from_json(to_json_text(config)); }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Wrapper feature selection core";

    py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    m.attr("RANKERS") = std::vector<std::string>{"pearson", "spearman", "relief"};
    m.attr("CLASSIFIERS") = std::vector<std::string>{"knn", "rf", "svm"};
    std::vector<std::string> algorithms;
    for (auto a : kAllAlgorithms) algorithms.push_back(to_string(a));
    m.attr("ALGORITHMS") = algorithms;

    py::class_<Dataset>(m, "Dataset")
        .def(py::init(&make_dataset), py::arg("rows"), py::arg("labels"), py::arg("names") = py::none())
        .def_property_readonly("n_rows", &Dataset::rows)
        .def_property_readonly("n_cols", &Dataset::cols)
        .def_property_readonly("labels", &Dataset::labels)
        .def_property_readonly("column_names", &Dataset::column_names)
        .def("rows", &dataset_rows)
        .def("column", &Dataset::column)
        .def("__repr__", [](const Dataset& d) {
            return "<Dataset " + std::to_string(d.rows()) + "x" + std::to_string(d.cols()) + ">";
        });

    m.def(
        "load_csv",
        [](const std::string& path, const std::string& label_column, const std::string& positive_label) {
            return load_csv(path, {label_column, positive_label});
        },
        py::arg("path"), py::arg("label_column") = "label", py::arg("positive_label") = "1");

    m.def(
        "synthesize",
        [](std::size_t rows, std::size_t cols, std::size_t informative, double separation, std::size_t redundant_pairs,
           std::uint64_t seed) {
            SynthSpec spec;
            spec.n_rows = rows;
            spec.n_cols = cols;
            spec.n_informative = informative;
            spec.class_separation = separation;
            spec.redundant_pairs = redundant_pairs;
            spec.seed = seed;
            auto syn = synthesize(spec);
            return py::make_tuple(syn.data, syn.true_mask.indices());
        },
        py::arg("rows") = 200, py::arg("cols") = 20, py::arg("informative") = 4, py::arg("separation") = 3.0,
        py::arg("redundant_pairs") = 0, py::arg("seed") = 42,
        "Returns (dataset, planted feature indices).");

    m.def("prepare_dataset", &prepare_dataset, py::arg("dataset"), "clean() then min-max scaling.");

    m.def("pearson", [](const std::vector<double>& x, const std::vector<double>& y) { return pearson(x, y); });
    m.def("spearman", [](const std::vector<double>& x, const std::vector<double>& y) { return spearman(x, y); });

    m.def(
        "rank_features",
        [](const Dataset& d, const std::string& method, std::uint64_t seed) {
            const auto r = rank_features(d, parse_rank_method(method), seed);
            py::dict out;
            out["method"] = to_string(r.method);
            out["scores"] = r.scores;
            out["order"] = r.order;
            out["leading"] = leading_mask(r).indices();
            return out;
        },
        py::arg("dataset"), py::arg("method") = "pearson", py::arg("seed") = 42);

    m.def(
        "metrics",
        [](std::size_t tp, std::size_t fn, std::size_t fp, std::size_t tn) {
            ConfusionMatrix cm;
            cm.tp = tp;
            cm.fn = fn;
            cm.fp = fp;
            cm.tn = tn;
            return metrics_dict(metrics(cm));
        },
        py::arg("tp"), py::arg("fn"), py::arg("fp"), py::arg("tn"));

    m.def(
        "fitness",
        [](double accuracy, std::size_t selected, std::size_t total, double weight) {
            return fitness(accuracy, selected, total, weight).value;
        },
        py::arg("accuracy"), py::arg("selected"), py::arg("total"), py::arg("weight") = kDefaultFitnessWeight);
    m.def("feature_reduction", py::overload_cast<std::size_t, std::size_t>(&feature_reduction), py::arg("selected"),
          py::arg("total"));
    m.def("format_percent", &format_percent, py::arg("fraction"), py::arg("decimals") = 2);

    m.def(
        "run_selector",
        [](const std::string& algorithm, std::size_t n_features, const std::function<double(std::vector<std::size_t>)>& fn,
           std::size_t agents, std::size_t iterations, std::uint64_t seed,
           std::optional<std::vector<std::size_t>> leading) {
            SelectorConfig cfg;
            cfg.algorithm = parse_algorithm(algorithm);
            cfg.num_agents = agents;
            cfg.max_iterations = iterations;
            cfg.seed = seed;
            if (leading) cfg.leading_mask = FeatureMask::from_indices(n_features, *leading);
            const auto r = run_selector(cfg, n_features, [&](const FeatureMask& mask) { return fn(mask.indices()); });
            py::dict out;
            out["best_features"] = r.best_mask.indices();
            out["best_mask"] = r.best_mask.to_hex();
            out["best_fitness"] = r.best_fitness;
            out["fitness_history"] = r.fitness_history;
            out["evaluations"] = r.evaluations;
            return out;
        },
        py::arg("algorithm"), py::arg("n_features"), py::arg("fitness"), py::arg("agents") = 30,
        py::arg("iterations") = 100, py::arg("seed") = 42, py::arg("leading") = py::none(),
        "Maximizes fitness(selected feature indices) with one binary optimizer.");

    m.def(
        "evaluate_mask",
        [](const Dataset& d, const std::vector<std::size_t>& features, const std::string& classifier,
           std::uint64_t seed) {
            ClassifierSpec spec;
            spec.kind = parse_classifier_kind(classifier);
            spec.seed = seed;
            const auto parts = split(d, 0.8, 0.1, seed);
            std::vector<std::size_t> seen = parts.train;
            seen.insert(seen.end(), parts.validate.begin(), parts.validate.end());
            return metrics_dict(metrics(evaluate_masked(spec, d, seen, parts.test, mask_of(d, features))));
        },
        py::arg("dataset"), py::arg("features"), py::arg("classifier") = "knn", py::arg("seed") = 42,
        "Trains on the 90% train+validate rows of a stratified split and scores the test rows.");

    m.def(
        "cross_validate",
        [](const Dataset& d, const std::vector<std::size_t>& features, const std::string& classifier, std::size_t k,
           std::uint64_t seed) {
            ClassifierSpec spec;
            spec.kind = parse_classifier_kind(classifier);
            spec.seed = seed;
            const auto cv = cross_validate(spec, d, mask_of(d, features), k, seed);
            py::dict out;
            out["accuracies"] = cv.accuracies;
            out["mean"] = cv.mean;
            out["std"] = cv.stddev;
            return out;
        },
        py::arg("dataset"), py::arg("features"), py::arg("classifier") = "knn", py::arg("k") = 10,
        py::arg("seed") = 42);

    m.def(
        "run_combination",
        [](const Dataset& d, const std::string& ranker, const std::string& selector, const std::string& classifier,
           const py::object& config, std::size_t index) {
            const auto cfg = grid_config(config);
            CombinationResult r;
            {
                py::gil_scoped_release release;
                r = run_combination(parse_rank_method(ranker), parse_algorithm(selector),
                                    parse_classifier_kind(classifier), d, cfg, combination_seed(cfg.seed, index));
            }
            const py::list all = from_json(results_to_json({r}));
            return py::object(all[0]);
        },
        py::arg("dataset"), py::arg("ranker"), py::arg("selector"), py::arg("classifier"),
        py::arg("config") = py::none(), py::arg("index") = 0,
        "config: dict or JSON text with grid keys (selector, classifier, seed, ...).");

    m.def(
        "run_grid",
        [](const Dataset& d, const py::object& config) {
            const auto cfg = grid_config(config);
            std::string text;
            {
                py::gil_scoped_release release;
                text = results_to_json(run_grid(d, cfg));
            }
            return from_json(text);
        },
        py::arg("dataset"), py::arg("config") = py::none());

    m.def(
        "execute",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            const int code = execute(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Runs one CLI subcommand; returns (exit_code, stdout, stderr).");
}
