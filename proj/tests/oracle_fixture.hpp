#pragma once

// Pinned 4-agent, 6-bit fixture: run two library steps and measure how far
// they land from the brute-force oracles.

#include <algorithm>
#include <cmath>
#include <limits>

#include "step_oracles.hpp"
#include "support.hpp"

namespace oracle {

inline constexpr std::size_t kFixtureDims = 6;
inline constexpr std::size_t kFixtureAgents = 4;
inline constexpr std::size_t kFixtureIterations = 10;

inline StepOut expected_step(swarmselect::Algorithm a, const Swarm& s, std::size_t t, const SelectorConfig& c,
                             const Fitness& f) {
    using swarmselect::Algorithm;
    switch (a) {
        case Algorithm::gsa: return gsa(s, t, kFixtureIterations, c, f);
        case Algorithm::bba: return bba(s, t, c, f);
        case Algorithm::cs: return cs(s, t, c, f);
        case Algorithm::ga: return ga(s, t, c, f);
        case Algorithm::gwo: return gwo(s, t, kFixtureIterations, c, f);
        case Algorithm::pso: return pso(s, t, c, f);
        case Algorithm::woa: return woa(s, t, kFixtureIterations, c, f);
    }
    return {};
}

inline void library_step(swarmselect::Algorithm a, Swarm& s, std::size_t t, const SelectorConfig& c,
                         swarmselect::Evaluator& e) {
    namespace ss = swarmselect;
    const ss::StepContext ctx{t, kFixtureIterations, c};
    switch (a) {
        case ss::Algorithm::gsa: ss::gsa_step(s, ctx, e); break;
        case ss::Algorithm::bba: ss::bba_step(s, ctx, e); break;
        case ss::Algorithm::cs: ss::cs_step(s, ctx, e); break;
        case ss::Algorithm::ga: ss::ga_step(s, ctx, e); break;
        case ss::Algorithm::gwo: ss::gwo_step(s, ctx, e); break;
        case ss::Algorithm::pso: ss::pso_step(s, ctx, e); break;
        case ss::Algorithm::woa: ss::woa_step(s, ctx, e); break;
    }
}

// Largest per-coordinate gap in position or velocity; infinity when any mask
// or fitness differs.
inline double gap(const Swarm& s, const StepOut& want) {
    double worst = 0.0;
    for (std::size_t i = 0; i < s.agents.size(); ++i) {
        const auto& a = s.agents[i];
        if (bits_of(a.mask) != want.bits[i] || a.fitness != want.fitness[i]) {
            return std::numeric_limits<double>::infinity();
        }
        for (std::size_t d = 0; d < a.position.size(); ++d) {
            worst = std::max(worst, std::abs(a.position[d] - want.position[i][d]));
            worst = std::max(worst, std::abs(a.velocity[d] - want.velocity[i][d]));
        }
    }
    return worst;
}

inline double fixture_gap(swarmselect::Algorithm alg, std::uint64_t seed) {
    const testing::Planted objective(kFixtureDims, seed + 17);
    SelectorConfig cfg;
    cfg.algorithm = alg;
    cfg.seed = seed;
    cfg.num_agents = kFixtureAgents;
    cfg.max_iterations = kFixtureIterations;
    const Fitness f = [&](const Bits& b) { return objective(swarmselect::FeatureMask::from_bits(b)); };
    swarmselect::Evaluator evaluate(std::cref(objective));
    auto swarm = swarmselect::initialize_swarm(cfg, kFixtureDims, evaluate);
    double worst = 0.0;
    for (std::size_t t = 0; t < 2; ++t) {
        const auto want = expected_step(alg, swarm, t, cfg, f);
        library_step(alg, swarm, t, cfg, evaluate);
        worst = std::max(worst, gap(swarm, want));
    }
    return worst;
}

}  // namespace oracle
