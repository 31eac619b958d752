#include "swarmselect/serialize.hpp"

#include <functional>
#include <map>

#include <json.hpp>

#include "swarmselect/error.hpp"

namespace swarmselect {

using json = nlohmann::ordered_json;

namespace {

json mask_json(const FeatureMask& mask) {
    return {{"hex", mask.to_hex()}, {"n_features", mask.size()}, {"indices", mask.indices()}};
}

json metrics_json(const MetricsReport& m) {
    return {{"accuracy", m.accuracy},
            {"recall_autism", m.recall_autism},
            {"recall_typical", m.recall_typical},
            {"precision_autism", m.precision_autism},
            {"precision_typical", m.precision_typical},
            {"f1_autism", m.f1_autism},
            {"f1_typical", m.f1_typical},
            {"warnings", m.warnings}};
}

using Setter = std::function<void(const json&)>;

// Applies one setter per key; unknown keys are rejected.
void read_object(const json& obj, const std::string& where, const std::map<std::string, Setter>& setters) {
    if (!obj.is_object()) throw ConfigError(where + ": expected an object");
    for (const auto& [key, value] : obj.items()) {
        const auto it = setters.find(key);
        if (it == setters.end()) throw ConfigError(where + ": unknown key '" + key + "'");
        try {
            it->second(value);
        } catch (const json::exception& e) {
            throw ConfigError(where + "." + key + ": " + e.what());
        }
    }
}

template <typename T>
Setter into(T& field) {
    return [&field](const json& v) { field = v.get<T>(); };
}

template <typename T>
Setter into_optional(std::optional<T>& field) {
    return [&field](const json& v) {
        if (v.is_null()) field.reset();
        else field = v.get<T>();
    };
}

TransferMode parse_transfer(const std::string& s) {
    if (s == "standard") return TransferMode::standard;
    if (s == "literal") return TransferMode::literal;
    throw ConfigError("unknown transfer mode '" + s + "'");
}

const char* transfer_name(TransferMode m) { return m == TransferMode::literal ? "literal" : "standard"; }

void read_selector(const json& j, SelectorConfig& s) {
    read_object(j, "selector", {
        {"num_agents", into(s.num_agents)},
        {"max_iterations", into(s.max_iterations)},
        {"v_max", into(s.v_max)},
        {"position_bound", into(s.position_bound)},
        {"init_range", into(s.init_range)},
        {"seed_magnitude", into(s.seed_magnitude)},
        {"threads", into(s.threads)},
        {"transfer", [&](const json& v) { s.transfer = parse_transfer(v.get<std::string>()); }},
        {"gsa", [&](const json& v) {
             read_object(v, "selector.gsa", {{"g0", into(s.gsa.g0)}, {"decay", into(s.gsa.decay)},
                                             {"epsilon", into(s.gsa.epsilon)},
                                             {"distance_power", into(s.gsa.distance_power)}});
         }},
        {"bba", [&](const json& v) {
             read_object(v, "selector.bba", {{"f_min", into(s.bba.f_min)}, {"f_max", into(s.bba.f_max)},
                                             {"loudness0", into(s.bba.loudness0)}, {"pulse0", into(s.bba.pulse0)},
                                             {"alpha", into(s.bba.alpha)}, {"gamma", into(s.bba.gamma)}});
         }},
        {"cs", [&](const json& v) {
             read_object(v, "selector.cs", {{"alpha", into(s.cs.alpha)}, {"lambda", into(s.cs.lambda)},
                                            {"abandon", into(s.cs.abandon)}});
         }},
        {"ga", [&](const json& v) {
             read_object(v, "selector.ga", {{"crossover", into(s.ga.crossover)},
                                            {"mutation", into_optional(s.ga.mutation)},
                                            {"tournament", into(s.ga.tournament)},
                                            {"elitism", into(s.ga.elitism)},
                                            {"stagnation_window", into(s.ga.stagnation_window)},
                                            {"stagnation_boost", into(s.ga.stagnation_boost)}});
         }},
        {"pso", [&](const json& v) {
             read_object(v, "selector.pso", {{"alpha", into(s.pso.alpha)}, {"beta", into(s.pso.beta)}});
         }},
        {"woa", [&](const json& v) {
             read_object(v, "selector.woa", {{"b", into(s.woa.b)},
                                             {"encircle_probability", into(s.woa.encircle_probability)}});
         }},
    });
}

void read_classifier(const json& j, ClassifierSpec& c) {
    read_object(j, "classifier", {
        {"knn_k", into(c.knn_k)},
        {"rf_trees", into(c.rf_trees)},
        {"rf_max_depth", into_optional(c.rf_max_depth)},
        {"rf_bootstrap", into(c.rf_bootstrap)},
        {"svm_epochs", into(c.svm_epochs)},
        {"svm_learning_rate", into(c.svm_learning_rate)},
        {"svm_regularization", into(c.svm_regularization)},
    });
}

template <typename T, typename Parse>
Setter into_list(std::vector<T>& field, Parse parse) {
    return [&field, parse](const json& v) {
        field.clear();
        for (const auto& item : v) field.push_back(parse(item.get<std::string>()));
    };
}

template <typename T>
json names(const std::vector<T>& values) {
    json out = json::array();
    for (const auto& v : values) out.push_back(to_string(v));
    return out;
}

}  // namespace

std::string results_to_json(const std::vector<CombinationResult>& results, bool include_timing) {
    json out = json::array();
    for (const auto& r : results) {
        json j = {{"name", r.name()},
                  {"ranker", to_string(r.ranker)},
                  {"selector", to_string(r.selector)},
                  {"classifier", to_string(r.classifier)},
                  {"seed", r.seed},
                  {"failed", r.failed}};
        if (r.failed) {
            j["error"] = r.error;
        } else {
            j["selected_mask"] = mask_json(r.selected_mask);
            j["n_selected"] = r.n_selected;
            j["feature_reduction"] = r.feature_reduction;
            j["test_metrics"] = metrics_json(r.test_metrics);
            j["cv_mean"] = r.cv_mean;
            j["cv_std"] = r.cv_std;
            j["fitness"] = r.fitness;
            j["validation_accuracy"] = r.validation_accuracy;
            j["gate_cv_mean"] = r.gate_cv_mean;
            j["gates_passed"] = r.gates_passed;
            j["attempts"] = r.attempts;
            j["evaluations"] = r.evaluations;
        }
        if (include_timing) j["wall_time"] = r.wall_time;
        out.push_back(std::move(j));
    }
    return out.dump(2) + "\n";
}

std::vector<CombinationResult> results_from_json(std::string_view text) {
    std::vector<CombinationResult> out;
    try {
        const auto doc = json::parse(text);
        if (!doc.is_array()) throw DataError("results document must be a JSON array");
        for (const auto& j : doc) {
            CombinationResult r;
            r.ranker = parse_rank_method(j.at("ranker").get<std::string>());
            r.selector = parse_algorithm(j.at("selector").get<std::string>());
            r.classifier = parse_classifier_kind(j.at("classifier").get<std::string>());
            r.seed = j.at("seed").get<std::uint64_t>();
            r.failed = j.at("failed").get<bool>();
            if (j.contains("wall_time")) r.wall_time = j["wall_time"].get<double>();
            if (r.failed) {
                r.error = j.value("error", "");
                out.push_back(std::move(r));
                continue;
            }
            const auto& m = j.at("selected_mask");
            r.selected_mask = FeatureMask::from_indices(m.at("n_features").get<std::size_t>(),
                                                        m.at("indices").get<std::vector<std::size_t>>());
            r.n_selected = j.at("n_selected").get<std::size_t>();
            r.feature_reduction = j.at("feature_reduction").get<double>();
            const auto& t = j.at("test_metrics");
            r.test_metrics.accuracy = t.at("accuracy").get<double>();
            r.test_metrics.recall_autism = t.at("recall_autism").get<double>();
            r.test_metrics.recall_typical = t.at("recall_typical").get<double>();
            r.test_metrics.precision_autism = t.at("precision_autism").get<double>();
            r.test_metrics.precision_typical = t.at("precision_typical").get<double>();
            r.test_metrics.f1_autism = t.at("f1_autism").get<double>();
            r.test_metrics.f1_typical = t.at("f1_typical").get<double>();
            r.test_metrics.warnings = t.value("warnings", std::vector<std::string>{});
            r.cv_mean = j.at("cv_mean").get<double>();
            r.cv_std = j.at("cv_std").get<double>();
            r.fitness = j.at("fitness").get<double>();
            r.validation_accuracy = j.value("validation_accuracy", 0.0);
            r.gate_cv_mean = j.value("gate_cv_mean", 0.0);
            r.gates_passed = j.value("gates_passed", false);
            r.attempts = j.value("attempts", std::size_t{0});
            r.evaluations = j.value("evaluations", std::size_t{0});
            out.push_back(std::move(r));
        }
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed results document: ") + e.what());
    } catch (const ConfigError& e) {
        throw DataError(std::string("malformed results document: ") + e.what());
    }
    return out;
}

std::string selection_to_json(const SelectionResult& result, const SelectorConfig& config,
                              const std::vector<std::string>& feature_names) {
    json features = json::array();
    for (auto k : result.best_mask.indices()) features.push_back(feature_names.at(k));
    const json j = {{"algorithm", to_string(config.algorithm)},
                    {"seed", config.seed},
                    {"best_mask", {{"hex", result.best_mask.to_hex()}, {"features", features}}},
                    {"best_fitness", result.best_fitness},
                    {"fitness_history", result.fitness_history},
                    {"evaluations", result.evaluations}};
    return j.dump(2) + "\n";
}

std::string ranking_to_json(const std::vector<RankedFeatures>& rankings, const std::vector<std::string>& feature_names,
                            std::size_t leading_k) {
    json out = json::array();
    for (const auto& r : rankings) {
        json scores = json::object();
        for (std::size_t k = 0; k < r.scores.size(); ++k) scores[feature_names.at(k)] = r.scores[k];
        json order = json::array();
        for (auto k : r.order) order.push_back(feature_names.at(k));
        out.push_back({{"method", to_string(r.method)},
                       {"scores", scores},
                       {"order", order},
                       {"leading_mask", leading_mask(r, leading_k).to_hex()}});
    }
    return out.dump(2) + "\n";
}

GridConfig grid_config_from_json(std::string_view text, GridConfig base) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    auto& g = base;
    read_object(doc, "grid", {
        {"rankers", into_list(g.rankers, [](const std::string& s) { return parse_rank_method(s); })},
        {"selectors", into_list(g.selectors, [](const std::string& s) { return parse_algorithm(s); })},
        {"classifiers", into_list(g.classifiers, [](const std::string& s) { return parse_classifier_kind(s); })},
        {"selector", [&](const json& v) { read_selector(v, g.selector); }},
        {"classifier", [&](const json& v) { read_classifier(v, g.classifier); }},
        {"fitness_classifier", [&](const json& v) {
             if (v.is_null()) g.fitness_classifier.reset();
             else g.fitness_classifier = parse_classifier_kind(v.get<std::string>());
         }},
        {"fitness_rf_trees", into_optional(g.fitness_rf_trees)},
        {"fitness_weight", into(g.fitness_weight)},
        {"train_frac", into(g.train_frac)},
        {"validate_frac", into(g.validate_frac)},
        {"cv_k", into(g.cv_k)},
        {"accuracy_gate", into(g.accuracy_gate)},
        {"cv_gate", into(g.cv_gate)},
        {"max_attempts", into(g.max_attempts)},
        {"seed", into(g.seed)},
        {"threads", into(g.threads)},
    });
    return base;
}

std::string grid_config_to_json(const GridConfig& g) {
    const auto& s = g.selector;
    const auto& c = g.classifier;
    json sel = {{"num_agents", s.num_agents},
                {"max_iterations", s.max_iterations},
                {"v_max", s.v_max},
                {"position_bound", s.position_bound},
                {"init_range", s.init_range},
                {"seed_magnitude", s.seed_magnitude},
                {"threads", s.threads},
                {"transfer", transfer_name(s.transfer)},
                {"gsa", {{"g0", s.gsa.g0}, {"decay", s.gsa.decay}, {"epsilon", s.gsa.epsilon},
                         {"distance_power", s.gsa.distance_power}}},
                {"bba", {{"f_min", s.bba.f_min}, {"f_max", s.bba.f_max}, {"loudness0", s.bba.loudness0},
                         {"pulse0", s.bba.pulse0}, {"alpha", s.bba.alpha}, {"gamma", s.bba.gamma}}},
                {"cs", {{"alpha", s.cs.alpha}, {"lambda", s.cs.lambda}, {"abandon", s.cs.abandon}}},
                {"ga", {{"crossover", s.ga.crossover},
                        {"mutation", s.ga.mutation ? json(*s.ga.mutation) : json(nullptr)},
                        {"tournament", s.ga.tournament},
                        {"elitism", s.ga.elitism},
                        {"stagnation_window", s.ga.stagnation_window},
                        {"stagnation_boost", s.ga.stagnation_boost}}},
                {"pso", {{"alpha", s.pso.alpha}, {"beta", s.pso.beta}}},
                {"woa", {{"b", s.woa.b}, {"encircle_probability", s.woa.encircle_probability}}}};
    json cls = {{"knn_k", c.knn_k},
                {"rf_trees", c.rf_trees},
                {"rf_max_depth", c.rf_max_depth ? json(*c.rf_max_depth) : json(nullptr)},
                {"rf_bootstrap", c.rf_bootstrap},
                {"svm_epochs", c.svm_epochs},
                {"svm_learning_rate", c.svm_learning_rate},
                {"svm_regularization", c.svm_regularization}};
    json j = {{"rankers", names(g.rankers)},
              {"selectors", names(g.selectors)},
              {"classifiers", names(g.classifiers)},
              {"selector", sel},
              {"classifier", cls},
              {"fitness_classifier", g.fitness_classifier ? json(to_string(*g.fitness_classifier)) : json(nullptr)},
              {"fitness_rf_trees", g.fitness_rf_trees ? json(*g.fitness_rf_trees) : json(nullptr)},
              {"fitness_weight", g.fitness_weight},
              {"train_frac", g.train_frac},
              {"validate_frac", g.validate_frac},
              {"cv_k", g.cv_k},
              {"accuracy_gate", g.accuracy_gate},
              {"cv_gate", g.cv_gate},
              {"max_attempts", g.max_attempts},
              {"seed", g.seed},
              {"threads", g.threads}};
    return j.dump(2) + "\n";
}

}  // namespace swarmselect
