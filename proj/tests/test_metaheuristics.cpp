#include <doctest.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <set>

#include "support.hpp"
#include "swarmselect/error.hpp"
#include "swarmselect/metaheuristics.hpp"

using namespace swarmselect;
using testing::Planted;

namespace {

double onemax(const FeatureMask& m) { return static_cast<double>(m.popcount()) / static_cast<double>(m.size()); }

SelectorConfig config_for(Algorithm a, std::uint64_t seed, std::size_t agents = 30, std::size_t iterations = 100) {
    SelectorConfig c;
    c.algorithm = a;
    c.seed = seed;
    c.num_agents = agents;
    c.max_iterations = iterations;
    return c;
}

}  // namespace

TEST_CASE("transfer sigmoid") {
    CHECK(transfer_sigmoid(0.0) == 0.5);
    CHECK(std::round(transfer_sigmoid(6.0) * 1e5) / 1e5 == 0.99753);
    CHECK(transfer_sigmoid(-3.0) == doctest::Approx(1.0 - transfer_sigmoid(3.0)));
}

TEST_CASE("binarize saturates, repairs and centres") {
    auto rng = Rng::stream(1);
    const std::vector<double> high(32, 20.0), low(32, -20.0), mid(32, 0.0);
    CHECK(binarize(high, rng) == FeatureMask(32, true));
    for (int i = 0; i < 20; ++i) CHECK(binarize(low, rng).popcount() == 1);
    double total = 0.0;
    const int draws = 1000;
    for (int i = 0; i < draws; ++i) total += static_cast<double>(binarize(mid, rng).popcount());
    // mean of 1000 Binomial(32, 1/2) counts: sd of the mean = sqrt(8 / 1000)
    CHECK(std::abs(total / draws - 16.0) <= 3.0 * std::sqrt(8.0 / draws));
    // the literal orientation mirrors the standard one
    CHECK(binarize(high, rng, TransferMode::literal).popcount() == 1);
}

TEST_CASE("repair only touches empty masks") {
    auto rng = Rng::stream(2);
    FeatureMask empty(5);
    CHECK(repair(empty, rng));
    CHECK(empty.popcount() == 1);
    CHECK_FALSE(repair(empty, rng));
}

TEST_CASE("levy steps") {
    CHECK(std::round(mantegna_sigma(1.5) * 1e5) / 1e5 == 0.69657);
    auto rng = Rng::stream(3);
    const int n = 100000;
    std::vector<double> mags;
    mags.reserve(n);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double s = levy_step(1.5, rng);
        sum += s;
        mags.push_back(std::abs(s));
    }
    std::nth_element(mags.begin(), mags.begin() + n / 2, mags.end());
    const double median = mags[n / 2];
    const double max = *std::max_element(mags.begin(), mags.end());
    CHECK(median < 2.0);
    CHECK(max / median > 50.0);
    double sq = 0.0;
    for (double m : mags) sq += m * m;
    const double sd = std::sqrt(sq / n - (sum / n) * (sum / n));
    CHECK(std::abs(sum / n) <= 3.0 * sd / std::sqrt(static_cast<double>(n)));
    CHECK_THROWS_AS(levy_step(1.0, rng), ConfigError);
    CHECK_THROWS_AS(levy_step(3.5, rng), ConfigError);
}

TEST_CASE("gsa force examples") {
    const GsaParams p;
    const std::vector<double> a{0.0}, b{1.0}, c{2.0};
    const auto fab = gsa_pairwise_force(1.0, 1.0, 1.0, a, b, p);
    const auto fba = gsa_pairwise_force(1.0, 1.0, 1.0, b, a, p);
    CHECK(fab[0] == doctest::Approx(1.0));
    CHECK(fba[0] == doctest::Approx(-1.0));
    const auto left = gsa_pairwise_force(1.0, 1.0, 1.0, b, a, p);
    const auto right = gsa_pairwise_force(1.0, 1.0, 1.0, b, c, p);
    CHECK(left[0] + right[0] == doctest::Approx(0.0));
}

TEST_CASE("gsa schedules and masses") {
    const GsaParams p;
    CHECK(gravitational_constant(p, 0, 100) == 100.0);
    CHECK(gravitational_constant(p, 100, 100) == doctest::Approx(100.0 * std::exp(-20.0)));
    CHECK(kbest_count(30, 0, 100) == 30);
    CHECK(kbest_count(30, 100, 100) == 1);
    const auto m = gsa_masses(std::vector<double>{0.2, 0.6, 1.0});
    CHECK(m[0] == 0.0);
    CHECK(m[1] == doctest::Approx(1.0 / 3.0));
    CHECK(m[2] == doctest::Approx(2.0 / 3.0));
    const auto u = gsa_masses(std::vector<double>{0.5, 0.5});
    CHECK(u[0] == 0.5);
    CHECK(u[1] == 0.5);
}

TEST_CASE("gwo and woa schedules") {
    CHECK(gwo_a(0, 50) == 2.0);
    CHECK(gwo_a(50, 50) == 0.0);
    CHECK(woa_a(25, 50) == doctest::Approx(1.0));
}

TEST_CASE("bba loudness decays geometrically and zero frequency keeps velocity") {
    Planted obj(12, 4);
    auto cfg = config_for(Algorithm::bba, 4, 6, 5);
    cfg.bba.f_min = 0.0;
    cfg.bba.f_max = 0.0;
    Evaluator e(std::cref(obj));
    auto s = initialize_swarm(cfg, 12, e);
    for (auto& a : s.agents) std::fill(a.velocity.begin(), a.velocity.end(), 0.75);
    for (std::size_t t = 0; t < 5; ++t) {
        bba_step(s, StepContext{t, 5, cfg}, e);
        for (const auto& a : s.agents) {
            CHECK(a.loudness == doctest::Approx(std::pow(0.9, static_cast<double>(t + 1))));
            CHECK(std::all_of(a.velocity.begin(), a.velocity.end(), [](double v) { return v == 0.75; }));
        }
    }
    CHECK(bba_pulse_rate(cfg.bba, 0) == 0.0);
}

TEST_CASE("pso velocity stays put when position equals both bests") {
    Planted obj(8, 5);
    auto cfg = config_for(Algorithm::pso, 5, 4, 3);
    Evaluator e(std::cref(obj));
    auto s = initialize_swarm(cfg, 8, e);
    const std::vector<double> x{1, -1, 2, -2, 0.5, -0.5, 3, -3};
    s.best.position = x;
    for (auto& a : s.agents) {
        a.position = x;
        a.best_position = x;
        std::fill(a.velocity.begin(), a.velocity.end(), 0.25);
    }
    pso_step(s, StepContext{0, 3, cfg}, e);
    for (const auto& a : s.agents) {
        CHECK(std::all_of(a.velocity.begin(), a.velocity.end(), [](double v) { return v == 0.25; }));
    }
}

TEST_CASE("gwo leaves a wolf at the origin when every leader sits there") {
    Planted obj(6, 6);
    auto cfg = config_for(Algorithm::gwo, 6, 4, 3);
    Evaluator e(std::cref(obj));
    auto s = initialize_swarm(cfg, 6, e);
    for (auto& l : s.leaders) std::fill(l.position.begin(), l.position.end(), 0.0);
    for (auto& a : s.agents) std::fill(a.position.begin(), a.position.end(), 0.0);
    gwo_step(s, StepContext{0, 3, cfg}, e);
    for (const auto& a : s.agents) {
        CHECK(std::all_of(a.position.begin(), a.position.end(), [](double v) { return v == 0.0; }));
    }
}

TEST_CASE("woa encircling collapses onto the best at the end of the schedule") {
    Planted obj(6, 7);
    auto cfg = config_for(Algorithm::woa, 7, 5, 10);
    cfg.woa.encircle_probability = 1.0;
    Evaluator e(std::cref(obj));
    auto s = initialize_swarm(cfg, 6, e);
    const auto best = s.best.position;
    woa_step(s, StepContext{10, 10, cfg}, e);
    for (const auto& a : s.agents) {
        for (std::size_t d = 0; d < best.size(); ++d) CHECK(a.position[d] == doctest::Approx(best[d]));
    }
}

TEST_CASE("cs with zero step keeps every position up to sign") {
    Planted obj(10, 8);
    auto cfg = config_for(Algorithm::cs, 8, 6, 3);
    cfg.cs.alpha = 0.0;
    cfg.cs.abandon = 0.0;
    Evaluator e(std::cref(obj));
    auto s = initialize_swarm(cfg, 10, e);
    auto magnitudes = [](const std::vector<double>& x) {
        std::vector<double> m;
        for (double v : x) m.push_back(std::abs(v));
        return m;
    };
    std::set<std::vector<double>> before;
    for (const auto& a : s.agents) before.insert(magnitudes(a.position));
    cs_step(s, StepContext{0, 3, cfg}, e);
    for (const auto& a : s.agents) CHECK(before.count(magnitudes(a.position)) == 1);
}

TEST_CASE("cs with full abandonment redraws every nest but the best") {
    Planted obj(10, 9);
    auto cfg = config_for(Algorithm::cs, 9, 6, 3);
    cfg.cs.abandon = 1.0;
    std::size_t calls = 0;
    Evaluator e([&](const FeatureMask& m) {
        ++calls;
        return obj(m);
    });
    auto s = initialize_swarm(cfg, 10, e);
    const std::size_t requests = e.requests();
    cs_step(s, StepContext{0, 3, cfg}, e);
    CHECK(e.requests() - requests == 6 + 5);
    CHECK(calls == e.evaluations());
}

TEST_CASE("ga without variation only copies parents") {
    Planted obj(12, 10);
    auto cfg = config_for(Algorithm::ga, 10, 8, 3);
    cfg.ga.crossover = 0.0;
    cfg.ga.mutation = 0.0;
    Evaluator e(std::cref(obj));
    auto s = initialize_swarm(cfg, 12, e);
    std::set<std::string> parents;
    for (const auto& a : s.agents) parents.insert(a.mask.key());
    const auto elite = std::max_element(s.agents.begin(), s.agents.end(),
                                        [](const Agent& a, const Agent& b) { return a.fitness < b.fitness; })
                           ->mask;
    ga_step(s, StepContext{0, 3, cfg}, e);
    CHECK(s.agents.front().mask == elite);
    for (const auto& a : s.agents) CHECK(parents.count(a.mask.key()) == 1);
}

TEST_CASE("ga crossover of identical parents is a fixed point") {
    Planted obj(12, 11);
    auto cfg = config_for(Algorithm::ga, 11, 6, 3);
    cfg.ga.crossover = 1.0;
    cfg.ga.mutation = 0.0;
    Evaluator e(std::cref(obj));
    auto s = initialize_swarm(cfg, 12, e);
    for (auto& a : s.agents) {
        a.mask = s.agents.front().mask;
        a.fitness = s.agents.front().fitness;
    }
    ga_step(s, StepContext{0, 3, cfg}, e);
    for (const auto& a : s.agents) CHECK(a.mask == s.agents.front().mask);
}

TEST_CASE("onemax is solved by every algorithm") {
    for (auto alg : kAllAlgorithms) {
        int solved = 0;
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            solved += run_selector(config_for(alg, seed), 16, onemax).best_fitness == 1.0;
        }
        INFO(to_string(alg));
        CHECK(solved >= 4);
    }
}

TEST_CASE("planted masks are recovered and histories never drop") {
    for (auto alg : kAllAlgorithms) {
        int good = 0;
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            Planted obj(16, 100 + seed);
            const auto r = run_selector(config_for(alg, seed), 16, std::cref(obj));
            good += r.best_fitness >= 0.95;
            CHECK(std::is_sorted(r.fitness_history.begin(), r.fitness_history.end()));
            CHECK(r.fitness_history.size() == 101);
            CHECK(r.evaluations <= evaluation_budget(config_for(alg, seed)));
            CHECK(r.best_fitness == obj(r.best_mask));
        }
        INFO(to_string(alg));
        CHECK(good >= 4);
    }
}

TEST_CASE("a seed at the optimum is kept") {
    for (auto alg : kAllAlgorithms) {
        auto cfg = config_for(alg, 3, 30, 1);
        cfg.leading_mask = FeatureMask(16, true);
        CHECK(run_selector(cfg, 16, onemax).best_fitness == 1.0);
    }
}

TEST_CASE("no empty mask is ever evaluated") {
    for (auto alg : kAllAlgorithms) {
        auto cfg = config_for(alg, 4, 10, 20);
        cfg.init_range = 20.0;  // mostly saturated, plenty of empties before repair
        const auto r = run_selector(cfg, 4, [](const FeatureMask& m) {
            REQUIRE_FALSE(m.none());
            return 1.0 - onemax(m);
        });
        CHECK(r.best_mask.popcount() >= 1);
    }
}

TEST_CASE("selector runs are reproducible and thread-count independent") {
    for (auto alg : kAllAlgorithms) {
        Planted obj(20, 12);
        auto cfg = config_for(alg, 12, 12, 15);
        const auto a = run_selector(cfg, 20, std::cref(obj));
        cfg.threads = 3;
        const auto b = run_selector(cfg, 20, std::cref(obj));
        CHECK(a.best_mask == b.best_mask);
        CHECK(a.fitness_history == b.fitness_history);
        CHECK(a.evaluation_history == b.evaluation_history);
    }
}

TEST_CASE("evaluator memoizes masks") {
    std::atomic<int> calls{0};
    Evaluator e([&](const FeatureMask& m) {
        ++calls;
        return onemax(m);
    });
    const std::vector<FeatureMask> batch{FeatureMask::from_bits({1, 0}), FeatureMask::from_bits({1, 0}),
                                         FeatureMask::from_bits({1, 1})};
    CHECK(e.evaluate(batch) == std::vector<double>{0.5, 0.5, 1.0});
    CHECK(e(FeatureMask::from_bits({1, 1})) == 1.0);
    CHECK(calls == 2);
    CHECK(e.evaluations() == 2);
    CHECK(e.requests() == 4);
    CHECK_THROWS_AS(e(FeatureMask(2)), ConfigError);
}

TEST_CASE("evaluations_to_reach") {
    SelectionResult r;
    r.fitness_history = {0.5, 0.9, 0.96, 0.97};
    r.evaluation_history = {10, 20, 30, 40};
    CHECK(evaluations_to_reach(r, 0.95) == 30);
    CHECK_FALSE(evaluations_to_reach(r, 0.99).has_value());
}

TEST_CASE("selector config validation") {
    auto cfg = config_for(Algorithm::gwo, 1, 2, 5);
    CHECK_THROWS_AS(cfg.validate(5), ConfigError);
    cfg = config_for(Algorithm::pso, 1, 5, 0);
    CHECK_THROWS_AS(cfg.validate(5), ConfigError);
    cfg = config_for(Algorithm::pso, 1);
    cfg.leading_mask = FeatureMask(4, true);
    CHECK_THROWS_AS(cfg.validate(5), ConfigError);
    cfg.leading_mask = FeatureMask(5);
    CHECK_THROWS_AS(cfg.validate(5), ConfigError);
    CHECK(parse_algorithm("woa") == Algorithm::woa);
    CHECK_THROWS_AS(parse_algorithm("abc"), ConfigError);
}
