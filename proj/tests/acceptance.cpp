// Acceptance harness: one PASS/FAIL line per criterion.
//   acceptance                 run all criteria
//   acceptance --criterion N   run one; exit status 0 only on PASS

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "oracle_fixture.hpp"
#include "support.hpp"
#include "swarmselect/cli.hpp"
#include "swarmselect/evaluation.hpp"
#include "swarmselect/pipeline.hpp"
#include "swarmselect/ranking.hpp"
#include "swarmselect/serialize.hpp"

using namespace swarmselect;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id;
    const char* name;
    double time_limit;  // seconds
    std::function<Outcome()> run;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

// ------------------------------------------------------------------ 1
Outcome metric_identities() {
    ConfusionMatrix cm;
    cm.tp = 79;
    cm.fn = 1;
    cm.fp = 0;
    cm.tn = 80;
    const auto m = metrics(cm);
    const double got[] = {m.accuracy, m.recall_autism, m.precision_autism, m.f1_autism};
    const double want[] = {0.99375, 0.9875, 1.0, 0.99371};
    bool ok = true;
    std::string detail;
    for (int i = 0; i < 4; ++i) {
        const double r = round_half_up(got[i], 5);
        ok &= r == want[i];
        detail += (i ? " " : "") + fmt("%.5f", r);
    }
    return {ok, "acc/recall/precision/f1 = " + detail};
}

// ------------------------------------------------------------------ 2
Outcome fitness_arithmetic() {
    struct Row {
        double acc;
        std::size_t selected;
        const char* reduction;
        double fitness;
    };
    const Row rows[] = {{1.0, 380, "69.81%", 0.93964}, {0.96875, 4, "99.68%", 0.97434}};
    bool ok = true;
    std::string detail;
    for (const auto& r : rows) {
        const auto red = format_percent(feature_reduction(r.selected, 1259));
        const double fit = round_half_up(fitness(r.acc, r.selected, 1259).value, 5);
        const bool row_ok = red == r.reduction && fit == r.fitness;
        ok &= row_ok;
        detail += (detail.empty() ? "" : "; ") + std::to_string(r.selected) + "/1259: reduction " + red +
                  " fitness " + fmt("%.5f", fit) + " (expected " + r.reduction + " " + fmt("%.5f", r.fitness) + ")";
    }
    return {ok, detail};
}

// ------------------------------------------------------------------ 3
Outcome optimizer_soundness() {
    bool ok = true;
    bool monotone = true;
    std::string detail;
    for (auto alg : kAllAlgorithms) {
        int good = 0;
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            const testing::Planted objective(16, 1000 + seed);
            SelectorConfig cfg;
            cfg.algorithm = alg;
            cfg.seed = seed;
            const auto r = run_selector(cfg, 16, std::cref(objective));
            good += r.best_fitness >= 0.95;
            monotone &= std::is_sorted(r.fitness_history.begin(), r.fitness_history.end());
        }
        ok &= good >= 4;
        detail += (detail.empty() ? "" : " ") + to_string(alg) + "=" + std::to_string(good) + "/5";
    }
    return {ok && monotone, detail + (monotone ? ", histories monotone" : ", NON-MONOTONE history")};
}

// ------------------------------------------------------------------ 4
Outcome step_oracles() {
    double worst = 0.0;
    std::string worst_alg;
    for (auto alg : kAllAlgorithms) {
        for (std::uint64_t seed = 1; seed <= 3; ++seed) {
            const double g = oracle::fixture_gap(alg, seed);
            if (g >= worst) {
                worst = g;
                worst_alg = to_string(alg);
            }
        }
    }
    return {worst <= 1e-9, "max coordinate gap " + fmt("%.3g", worst) + " (" + worst_alg + ")"};
}

// ------------------------------------------------------------------ 5
Outcome ranking_correctness() {
    auto rng = Rng::stream(5150);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 3 + rng.index(60);
        const bool ties = trial % 3 == 0;
        std::vector<double> x(n), y(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = ties ? std::floor(rng.uniform() * 5.0) : rng.normal();
            y[i] = ties ? std::floor(rng.uniform() * 5.0) : rng.normal();
        }
        if (std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; })) x[0] += 1.0;
        if (std::all_of(y.begin(), y.end(), [&](double v) { return v == y[0]; })) y[0] += 1.0;
        const double a = spearman(x, y);
        const double b = pearson(average_ranks(x), average_ranks(y));
        worst = std::max(worst, std::abs(a - b));
    }

    int relief_wins = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        auto gen = Rng::stream(seed, 77);
        std::vector<std::vector<double>> rows;
        std::vector<int> labels;
        for (int i = 0; i < 100; ++i) {
            const int label = i % 2;
            rows.push_back({label * 3.0 + gen.normal(), gen.uniform()});
            labels.push_back(label);
        }
        const auto d = normalize_minmax(testing::table(rows, labels)).data;
        relief_wins += rank_features(d, RankMethod::relief, seed).order.front() == 0;
    }
    return {worst <= 1e-12 && relief_wins == 5,
            "spearman vs pearson(ranks) max gap " + fmt("%.3g", worst) + ", relief informative-first " +
                std::to_string(relief_wins) + "/5"};
}

// ------------------------------------------------------------------ 6
Outcome end_to_end_recovery() {
    int good = 0;
    std::string detail;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        SynthSpec spec;
        spec.n_rows = 300;
        spec.n_cols = 30;
        spec.n_informative = 5;
        spec.class_separation = 3.0;
        spec.seed = seed;
        const auto syn = synthesize(spec);
        const auto d = prepare_dataset(syn.data);
        GridConfig cfg;
        cfg.seed = seed;
        cfg.fitness_rf_trees = 20;
        const auto r =
            run_combination(RankMethod::relief, Algorithm::gsa, ClassifierKind::rf, d, cfg, combination_seed(seed, 0));
        const double acc = r.test_metrics.accuracy;
        const bool all = r.selected_mask.contains(syn.true_mask);
        const bool ok = acc >= 0.9 && all && std::abs(r.cv_mean - acc) <= 0.1;
        good += ok;
        std::size_t hit = 0;
        for (auto k : syn.true_mask.indices()) hit += r.selected_mask.test(k);
        detail += (detail.empty() ? "" : "; ") + std::string("seed ") + std::to_string(seed) + " acc " +
                  fmt("%.3f", acc) + " cv " + fmt("%.3f", r.cv_mean) + " planted " + std::to_string(hit) + "/5 of " +
                  std::to_string(r.n_selected);
    }
    return {good >= 4, std::to_string(good) + "/5 seeds recover: " + detail};
}

// ------------------------------------------------------------------ 7
Outcome seeding_benefit() {
    SynthSpec spec;
    spec.n_rows = 300;
    spec.n_cols = 30;
    spec.n_informative = 5;
    const auto syn = synthesize(spec);
    const auto d = prepare_dataset(syn.data);
    const auto parts = split(d, 0.8, 0.1, 7);
    ClassifierSpec knn;
    const auto fitness_fn = [&](const FeatureMask& mask) {
        return fitness(evaluate_masked(knn, d, parts.train, parts.validate, mask), mask, d.cols()).value;
    };

    bool ok = true;
    std::string detail;
    for (auto alg : {Algorithm::gsa, Algorithm::pso}) {
        std::vector<double> seeded, unseeded;
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            SelectorConfig cfg;
            cfg.algorithm = alg;
            cfg.seed = seed;
            const double never = static_cast<double>(evaluation_budget(cfg) + 1);
            auto reach = [&](const SelectionResult& r) {
                const auto e = evaluations_to_reach(r, 0.95);
                return e ? static_cast<double>(*e) : never;
            };
            unseeded.push_back(reach(run_selector(cfg, d.cols(), fitness_fn)));
            cfg.leading_mask = syn.true_mask;
            seeded.push_back(reach(run_selector(cfg, d.cols(), fitness_fn)));
        }
        auto median = [](std::vector<double> v) {
            std::sort(v.begin(), v.end());
            return v[v.size() / 2];
        };
        const double s = median(seeded);
        const double u = median(unseeded);
        ok &= s <= u;
        detail += (detail.empty() ? "" : "; ") + to_string(alg) + " median evals seeded " + fmt("%.0f", s) +
                  " vs unseeded " + fmt("%.0f", u);
    }
    return {ok, detail};
}

// ------------------------------------------------------------------ 8
std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism() {
    const auto dir = testing::scratch_dir("acceptance_determinism");
    const auto cfg = dir / "run.json";
    std::ofstream(cfg) << R"({"synth": {"rows": 120, "cols": 12, "informative": 3, "seed": 11},
  "formats": ["json"],
  "seed": 42,
  "grid": {"selector": {"num_agents": 10, "max_iterations": 10}, "classifier": {"rf_trees": 30}}}
)";
    std::vector<std::string> outputs;
    for (const char* run : {"a", "b"}) {
        const auto out = dir / run;
        const std::string cmd = std::string(SWARMSELECT_CLI_PATH) + " grid --config " + cfg.string() + " -o " +
                                out.string() + " > " + (dir / (std::string(run) + ".log")).string() + " 2>&1";
        if (std::system(cmd.c_str()) != 0) return {false, "grid run '" + std::string(run) + "' failed: " + cmd};
        outputs.push_back(slurp(out / "results.json"));
    }
    const bool same = !outputs[0].empty() && outputs[0] == outputs[1];
    return {same, std::to_string(outputs[0].size()) + " bytes, runs " + (same ? "identical" : "DIFFER")};
}

// ------------------------------------------------------------------ 9
Outcome hygiene() {
    SynthSpec spec;
    spec.n_rows = 120;
    spec.n_cols = 12;
    spec.n_informative = 3;
    spec.seed = 9;
    const auto d = prepare_dataset(synthesize(spec).data);
    GridConfig cfg;
    cfg.selector.num_agents = 10;
    cfg.selector.max_iterations = 10;
    cfg.classifier.rf_trees = 30;
    const auto parts = grid_split(d, cfg);
    auto labels = d.labels();
    for (auto r : parts.test) labels[r] = 1 - labels[r];
    const auto corrupted = d.with_labels(labels);

    const auto clean_run = run_grid(d, cfg, parts);
    const auto dirty_run = run_grid(corrupted, cfg, parts);
    std::size_t same = 0;
    double acc_clean = 0.0, acc_dirty = 0.0;
    for (std::size_t i = 0; i < clean_run.size(); ++i) {
        same += clean_run[i].selected_mask == dirty_run[i].selected_mask && !clean_run[i].failed;
        acc_clean += clean_run[i].test_metrics.accuracy;
        acc_dirty += dirty_run[i].test_metrics.accuracy;
    }
    const auto n = static_cast<double>(clean_run.size());
    return {same == clean_run.size(), std::to_string(same) + "/" + std::to_string(clean_run.size()) +
                                          " masks unchanged; mean test accuracy " + fmt("%.3f", acc_clean / n) +
                                          " -> " + fmt("%.3f", acc_dirty / n) + " with flipped test labels"};
}

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> all{
        {1, "metric identities", 1.0, metric_identities},
        {2, "fitness/reduction arithmetic", 1.0, fitness_arithmetic},
        {3, "optimizer soundness", 30.0, optimizer_soundness},
        {4, "step oracles", 5.0, step_oracles},
        {5, "ranking correctness", 10.0, ranking_correctness},
        {6, "end-to-end recovery", 120.0, end_to_end_recovery},
        {7, "seeding benefit", 120.0, seeding_benefit},
        {8, "determinism", 600.0, determinism},
        {9, "hygiene", 120.0, hygiene},
    };
    return all;
}

bool run(const Criterion& c) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = c.run();
    } catch (const std::exception& e) {
        o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.time_limit;
    const bool pass = o.pass && in_time;
    std::cout << "criterion " << c.id << ": " << (pass ? "PASS" : "FAIL") << " " << c.name << " -- " << o.detail
              << " [" << fmt("%.2f", secs) << "s, limit " << fmt("%.0f", c.time_limit) << "s"
              << (in_time ? "" : ", OVER TIME") << "]" << std::endl;
    return pass;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> wanted;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--criterion" && i + 1 < argc) {
            wanted.push_back(std::atoi(argv[++i]));
        } else {
            std::cerr << "usage: acceptance [--criterion N]...\n";
            return 1;
        }
    }
    bool all_pass = true;
    bool any = false;
    for (const auto& c : criteria()) {
        if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.id) == wanted.end()) continue;
        any = true;
        all_pass &= run(c);
    }
    if (!any) {
        std::cerr << "no such criterion\n";
        return 1;
    }
    return all_pass ? 0 : 1;
}
