#include "swarmselect/metaheuristics.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>

#include "swarmselect/error.hpp"

namespace swarmselect {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

std::string to_string(Algorithm algorithm) {
    switch (algorithm) {
        case Algorithm::gsa: return "gsa";
        case Algorithm::bba: return "bba";
        case Algorithm::cs: return "cs";
        case Algorithm::ga: return "ga";
        case Algorithm::gwo: return "gwo";
        case Algorithm::pso: return "pso";
        case Algorithm::woa: return "woa";
    }
    return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
    for (auto a : kAllAlgorithms) {
        if (name == to_string(a)) return a;
    }
    throw ConfigError("unknown selector algorithm '" + std::string(name) + "'");
}

void SelectorConfig::validate(std::size_t n_features) const {
    if (num_agents < 2) throw ConfigError("num_agents must be >= 2");
    if (algorithm == Algorithm::gwo && num_agents < 3) throw ConfigError("GWO needs at least 3 agents");
    if (max_iterations < 1) throw ConfigError("max_iterations must be >= 1");
    if (n_features < 1) throw ConfigError("need at least one feature");
    if (!(v_max > 0.0)) throw ConfigError("v_max must be positive");
    if (!(position_bound > 0.0)) throw ConfigError("position_bound must be positive");
    if (leading_mask) {
        if (leading_mask->size() != n_features) throw ConfigError("leading mask width does not match feature count");
        if (leading_mask->none()) throw ConfigError("leading mask is empty");
    }
    if (!(cs.lambda > 1.0 && cs.lambda <= 3.0)) throw ConfigError("Levy exponent must lie in (1, 3]");
    if (!(cs.abandon >= 0.0 && cs.abandon <= 1.0)) throw ConfigError("abandon fraction must lie in [0, 1]");
    if (ga.tournament < 1) throw ConfigError("tournament size must be >= 1");
    if (ga.elitism >= num_agents) throw ConfigError("elitism must leave room for children");
    if (threads < 1) throw ConfigError("threads must be >= 1");
}

// ---------------------------------------------------------------- primitives

double transfer_sigmoid(double v) { return 1.0 / (1.0 + std::exp(-v)); }

bool repair(FeatureMask& mask, Rng& rng) {
    if (!mask.none()) return false;
    mask.set(rng.index(mask.size()));
    return true;
}

FeatureMask binarize(std::span<const double> position, Rng& rng, TransferMode mode) {
    FeatureMask mask(position.size());
    for (std::size_t k = 0; k < position.size(); ++k) {
        const bool below = rng.uniform() < transfer_sigmoid(position[k]);
        mask.set(k, mode == TransferMode::standard ? below : !below);
    }
    repair(mask, rng);
    return mask;
}

double mantegna_sigma(double lambda) {
    const double num = std::tgamma(1.0 + lambda) * std::sin(kPi * lambda / 2.0);
    const double den = std::tgamma((1.0 + lambda) / 2.0) * lambda * std::pow(2.0, (lambda - 1.0) / 2.0);
    return std::pow(num / den, 1.0 / lambda);
}

double levy_step(double lambda, Rng& rng) {
    if (!(lambda > 1.0 && lambda <= 3.0)) throw ConfigError("Levy exponent must lie in (1, 3]");
    const double u = mantegna_sigma(lambda) * rng.normal();
    const double v = rng.normal();
    return u / std::pow(std::abs(v), 1.0 / lambda);
}

// ---------------------------------------------------------------- evaluator

double Evaluator::operator()(const FeatureMask& mask) {
    const FeatureMask one[] = {mask};
    return evaluate(one).front();
}

std::vector<double> Evaluator::evaluate(std::span<const FeatureMask> masks) {
    requests_ += masks.size();
    std::vector<std::string> keys;
    keys.reserve(masks.size());
    std::vector<std::size_t> pending;  // first occurrence of each uncached key
    std::unordered_map<std::string, std::size_t> seen;
    for (std::size_t i = 0; i < masks.size(); ++i) {
        if (masks[i].none()) throw ConfigError("fitness requested for an empty mask");
        keys.push_back(masks[i].key());
        if (!cache_.count(keys.back()) && seen.emplace(keys.back(), i).second) pending.push_back(i);
    }
    std::vector<double> fresh(pending.size());
    if (threads_ <= 1 || pending.size() <= 1) {
        for (std::size_t p = 0; p < pending.size(); ++p) fresh[p] = fn_(masks[pending[p]]);
    } else {
        const std::size_t workers = std::min(threads_, pending.size());
        std::vector<std::future<void>> jobs;
        for (std::size_t w = 0; w < workers; ++w) {
            jobs.push_back(std::async(std::launch::async, [&, w] {
                for (std::size_t p = w; p < pending.size(); p += workers) fresh[p] = fn_(masks[pending[p]]);
            }));
        }
        for (auto& j : jobs) j.get();
    }
    for (std::size_t p = 0; p < pending.size(); ++p) cache_.emplace(keys[pending[p]], fresh[p]);
    evaluations_ += pending.size();

    std::vector<double> out(masks.size());
    for (std::size_t i = 0; i < masks.size(); ++i) out[i] = cache_.at(keys[i]);
    return out;
}

// ---------------------------------------------------------------- swarm helpers

Rng agent_stream(const SelectorConfig& config, std::size_t agent, std::size_t iteration) {
    return Rng::stream(config.seed, agent, iteration);
}

namespace {

std::vector<double> bits_of(const FeatureMask& mask) {
    std::vector<double> bits(mask.size());
    for (std::size_t k = 0; k < mask.size(); ++k) bits[k] = mask.test(k) ? 1.0 : 0.0;
    return bits;
}

void clamp_position(std::vector<double>& x, double bound) {
    for (auto& v : x) v = std::clamp(v, -bound, bound);
}

// A stored best position gets the sign pattern of the mask it produced, so that
// moves toward it bias sampling toward that mask rather than a luckier draw.
std::vector<double> aligned(std::vector<double> x, const FeatureMask& mask) {
    for (std::size_t k = 0; k < x.size(); ++k) {
        if ((x[k] > 0.0) != mask.test(k) && x[k] != 0.0) x[k] = -x[k];
    }
    return x;
}

bool uses_bit_positions(Algorithm a) { return a == Algorithm::bba || a == Algorithm::ga; }

void score_agents(Swarm& swarm, Evaluator& evaluate) {
    std::vector<FeatureMask> masks;
    masks.reserve(swarm.agents.size());
    for (const auto& a : swarm.agents) masks.push_back(a.mask);
    const auto fit = evaluate.evaluate(masks);
    for (std::size_t i = 0; i < swarm.agents.size(); ++i) swarm.agents[i].fitness = fit[i];
}

void update_personal_bests(Swarm& swarm) {
    for (auto& a : swarm.agents) {
        if (a.fitness > a.best_fitness) {
            a.best_fitness = a.fitness;
            a.best_mask = a.mask;
            a.best_position = aligned(a.position, a.mask);
        }
    }
}

void finish_step(Swarm& swarm, Evaluator& evaluate) {
    score_agents(swarm, evaluate);
    update_personal_bests(swarm);
    update_global_best(swarm);
}

}  // namespace

void update_global_best(Swarm& swarm) {
    for (const auto& a : swarm.agents) {
        if (swarm.best.mask.size() == 0 || a.fitness > swarm.best.fitness) {
            swarm.best = {aligned(a.position, a.mask), a.mask, a.fitness};
        }
    }
}

void update_leaders(Swarm& swarm) {
    if (swarm.leaders.size() != 3) swarm.leaders.assign(3, Leader{{}, {}, -std::numeric_limits<double>::infinity()});
    auto& alpha = swarm.leaders[0];
    auto& beta = swarm.leaders[1];
    auto& delta = swarm.leaders[2];
    for (const auto& a : swarm.agents) {
        const Leader me{aligned(a.position, a.mask), a.mask, a.fitness};
        if (a.fitness > alpha.fitness) {
            delta = beta;
            beta = alpha;
            alpha = me;
        } else if (a.fitness > beta.fitness) {
            delta = beta;
            beta = me;
        } else if (a.fitness > delta.fitness) {
            delta = me;
        }
    }
}

Swarm initialize_swarm(const SelectorConfig& config, std::size_t n_features, Evaluator& evaluate) {
    config.validate(n_features);
    Swarm swarm;
    swarm.agents.resize(config.num_agents);
    const bool bit_positions = uses_bit_positions(config.algorithm);
    for (std::size_t i = 0; i < config.num_agents; ++i) {
        auto& a = swarm.agents[i];
        auto rng = agent_stream(config, i, 0);
        a.velocity.assign(n_features, 0.0);
        if (i == 0 && config.leading_mask) {
            a.mask = *config.leading_mask;
            a.position.resize(n_features);
            for (std::size_t k = 0; k < n_features; ++k) {
                a.position[k] = a.mask.test(k) ? config.seed_magnitude : -config.seed_magnitude;
            }
        } else {
            a.position.resize(n_features);
            for (auto& x : a.position) x = rng.uniform(-config.init_range, config.init_range);
            a.mask = binarize(a.position, rng, config.transfer);
        }
        if (bit_positions) a.position = bits_of(a.mask);
        a.loudness = config.bba.loudness0;
        a.pulse_rate = bba_pulse_rate(config.bba, 0);
        a.best_fitness = -std::numeric_limits<double>::infinity();
    }
    finish_step(swarm, evaluate);
    if (config.algorithm == Algorithm::gwo) update_leaders(swarm);
    return swarm;
}

// ---------------------------------------------------------------- GSA

double gravitational_constant(const GsaParams& params, std::size_t iteration, std::size_t max_iterations) {
    return params.g0 * std::exp(-params.decay * static_cast<double>(iteration) / static_cast<double>(max_iterations));
}

std::size_t kbest_count(std::size_t num_agents, std::size_t iteration, std::size_t max_iterations) {
    const double frac = static_cast<double>(iteration) / static_cast<double>(max_iterations);
    const auto k = std::llround(static_cast<double>(num_agents) - static_cast<double>(num_agents - 1) * frac);
    return static_cast<std::size_t>(std::clamp<long long>(k, 1, static_cast<long long>(num_agents)));
}

std::vector<double> gsa_masses(std::span<const double> fitness) {
    const auto [lo, hi] = std::minmax_element(fitness.begin(), fitness.end());
    std::vector<double> m(fitness.size(), 1.0);
    if (*hi > *lo) {
        for (std::size_t i = 0; i < fitness.size(); ++i) m[i] = (fitness[i] - *lo) / (*hi - *lo);
    }
    const double total = std::accumulate(m.begin(), m.end(), 0.0);
    for (auto& v : m) v /= total;
    return m;
}

std::vector<double> gsa_pairwise_force(double g, double mass_i, double mass_j, std::span<const double> x_i,
                                       std::span<const double> x_j, const GsaParams& params) {
    double r2 = 0.0;
    for (std::size_t d = 0; d < x_i.size(); ++d) r2 += (x_j[d] - x_i[d]) * (x_j[d] - x_i[d]);
    const double denom = std::pow(std::sqrt(r2) + params.epsilon, params.distance_power);
    std::vector<double> f(x_i.size());
    for (std::size_t d = 0; d < x_i.size(); ++d) f[d] = g * mass_i * mass_j * (x_j[d] - x_i[d]) / denom;
    return f;
}

void gsa_step(Swarm& swarm, const StepContext& ctx, Evaluator& evaluate) {
    const auto& cfg = ctx.config;
    const std::size_t n = swarm.agents.size();
    std::vector<double> fit(n);
    for (std::size_t i = 0; i < n; ++i) fit[i] = swarm.agents[i].fitness;
    const auto mass = gsa_masses(fit);
    const double g = gravitational_constant(cfg.gsa, ctx.iteration, ctx.max_iterations);

    std::vector<std::size_t> kbest(n);
    std::iota(kbest.begin(), kbest.end(), 0);
    std::stable_sort(kbest.begin(), kbest.end(), [&](std::size_t a, std::size_t b) { return mass[a] > mass[b]; });
    kbest.resize(kbest_count(n, ctx.iteration, ctx.max_iterations));

    std::vector<std::vector<double>> snapshot;
    for (const auto& a : swarm.agents) snapshot.push_back(a.position);

    for (std::size_t i = 0; i < n; ++i) {
        auto& a = swarm.agents[i];
        auto rng = agent_stream(cfg, i, ctx.iteration + 1);
        const std::size_t dims = a.position.size();
        // a_i = F_i / M_i; the mass of i cancels, so it is passed as 1.
        std::vector<double> accel(dims, 0.0);
        for (auto j : kbest) {
            if (j == i) continue;
            const auto f = gsa_pairwise_force(g, 1.0, mass[j], snapshot[i], snapshot[j], cfg.gsa);
            for (std::size_t d = 0; d < dims; ++d) accel[d] += rng.uniform() * f[d];
        }
        for (std::size_t d = 0; d < dims; ++d) {
            a.velocity[d] = std::clamp(rng.uniform() * a.velocity[d] + accel[d], -cfg.v_max, cfg.v_max);
            a.position[d] += a.velocity[d];
        }
        clamp_position(a.position, cfg.position_bound);
        a.mask = binarize(a.position, rng, cfg.transfer);
    }
    finish_step(swarm, evaluate);
}

// ---------------------------------------------------------------- BBA

double bba_pulse_rate(const BbaParams& params, std::size_t completed_iterations) {
    return params.pulse0 * (1.0 - std::exp(-params.gamma * static_cast<double>(completed_iterations)));
}

void bba_step(Swarm& swarm, const StepContext& ctx, Evaluator& evaluate) {
    const auto& cfg = ctx.config;
    const std::size_t n = swarm.agents.size();
    const auto best_bits = bits_of(swarm.best.mask);
    const std::size_t dims = best_bits.size();

    std::vector<Rng> streams;
    std::vector<FeatureMask> candidates;
    for (std::size_t i = 0; i < n; ++i) {
        auto& a = swarm.agents[i];
        auto& rng = streams.emplace_back(agent_stream(cfg, i, ctx.iteration + 1));
        const double f = cfg.bba.f_min + (cfg.bba.f_max - cfg.bba.f_min) * rng.uniform();
        for (std::size_t d = 0; d < dims; ++d) {
            a.velocity[d] = std::clamp(a.velocity[d] + (best_bits[d] - a.position[d]) * f, -cfg.v_max, cfg.v_max);
        }
        auto candidate = binarize(a.velocity, rng, cfg.transfer);
        if (rng.uniform() > a.pulse_rate) {
            candidate = swarm.best.mask;
            candidate.flip(rng.index(dims));
            repair(candidate, rng);
        }
        candidates.push_back(std::move(candidate));
    }
    const auto fit = evaluate.evaluate(candidates);

    for (std::size_t i = 0; i < n; ++i) {
        auto& a = swarm.agents[i];
        if (streams[i].uniform() < a.loudness && fit[i] >= a.fitness) {
            a.mask = candidates[i];
            a.position = bits_of(a.mask);
            a.fitness = fit[i];
        }
        a.loudness *= cfg.bba.alpha;
        a.pulse_rate = bba_pulse_rate(cfg.bba, ctx.iteration + 1);
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (fit[i] > swarm.best.fitness) swarm.best = {bits_of(candidates[i]), candidates[i], fit[i]};
    }
    update_personal_bests(swarm);
    update_global_best(swarm);
}

// ---------------------------------------------------------------- CS

void cs_step(Swarm& swarm, const StepContext& ctx, Evaluator& evaluate) {
    const auto& cfg = ctx.config;
    const std::size_t n = swarm.agents.size();
    std::vector<Rng> streams;
    std::vector<std::vector<double>> positions;
    std::vector<FeatureMask> candidates;
    for (std::size_t i = 0; i < n; ++i) {
        auto& rng = streams.emplace_back(agent_stream(cfg, i, ctx.iteration + 1));
        auto x = swarm.agents[i].position;
        for (auto& v : x) v += cfg.cs.alpha * levy_step(cfg.cs.lambda, rng);
        clamp_position(x, cfg.position_bound);
        candidates.push_back(binarize(x, rng, cfg.transfer));
        positions.push_back(std::move(x));
    }
    const auto fit = evaluate.evaluate(candidates);

    auto population = agent_stream(cfg, kPopulationStream, ctx.iteration + 1);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t j = population.index(n - 1);
        if (j >= i) ++j;
        auto& rival = swarm.agents[j];
        if (fit[i] > rival.fitness) {
            rival.position = aligned(positions[i], candidates[i]);
            rival.mask = candidates[i];
            rival.fitness = fit[i];
        }
    }

    // abandon the worst nests (never the best one)
    const auto n_abandon =
        std::min<std::size_t>(n - 1, static_cast<std::size_t>(std::llround(cfg.cs.abandon * static_cast<double>(n))));
    if (n_abandon > 0) {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return swarm.agents[a].fitness < swarm.agents[b].fitness ||
                   (swarm.agents[a].fitness == swarm.agents[b].fitness && a > b);
        });
        std::vector<std::size_t> redraw(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_abandon));
        std::sort(redraw.begin(), redraw.end());
        std::vector<FeatureMask> fresh;
        for (auto k : redraw) {
            auto& nest = swarm.agents[k];
            auto& rng = streams[k];
            for (auto& v : nest.position) v = rng.uniform(-cfg.init_range, cfg.init_range);
            nest.mask = binarize(nest.position, rng, cfg.transfer);
            fresh.push_back(nest.mask);
        }
        const auto fresh_fit = evaluate.evaluate(fresh);
        for (std::size_t r = 0; r < redraw.size(); ++r) swarm.agents[redraw[r]].fitness = fresh_fit[r];
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (fit[i] > swarm.best.fitness) swarm.best = {aligned(positions[i], candidates[i]), candidates[i], fit[i]};
    }
    update_personal_bests(swarm);
    update_global_best(swarm);
}

// ---------------------------------------------------------------- GA

void ga_step(Swarm& swarm, const StepContext& ctx, Evaluator& evaluate) {
    const auto& cfg = ctx.config;
    const std::size_t n = swarm.agents.size();
    const std::size_t dims = swarm.agents.front().mask.size();

    double rate = cfg.ga.mutation.value_or(1.0 / static_cast<double>(dims));
    if (swarm.stagnant_generations >= cfg.ga.stagnation_window) {
        rate = std::min(0.5, rate * cfg.ga.stagnation_boost);
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return swarm.agents[a].fitness > swarm.agents[b].fitness; });

    std::vector<Agent> next;
    next.reserve(n);
    for (std::size_t e = 0; e < cfg.ga.elitism; ++e) next.push_back(swarm.agents[order[e]]);

    auto tournament = [&](Rng& rng) {
        std::size_t winner = rng.index(n);
        for (std::size_t t = 1; t < cfg.ga.tournament; ++t) {
            const std::size_t c = rng.index(n);
            const auto& a = swarm.agents[c];
            const auto& w = swarm.agents[winner];
            if (a.fitness > w.fitness || (a.fitness == w.fitness && c < winner)) winner = c;
        }
        return winner;
    };

    std::vector<FeatureMask> children;
    for (std::size_t c = cfg.ga.elitism; c < n; ++c) {
        auto rng = agent_stream(cfg, c, ctx.iteration + 1);
        const auto& pa = swarm.agents[tournament(rng)].mask;
        const auto& pb = swarm.agents[tournament(rng)].mask;
        FeatureMask child = pa;
        if (rng.uniform() < cfg.ga.crossover) {
            for (std::size_t k = 0; k < dims; ++k) child.set(k, rng.uniform() < 0.5 ? pa.test(k) : pb.test(k));
        }
        for (std::size_t k = 0; k < dims; ++k) {
            if (rng.uniform() < rate) child.flip(k);
        }
        repair(child, rng);
        children.push_back(std::move(child));
    }
    const auto fit = evaluate.evaluate(children);
    for (std::size_t c = 0; c < children.size(); ++c) {
        Agent child;
        child.mask = children[c];
        child.position = bits_of(child.mask);
        child.velocity.assign(dims, 0.0);
        child.fitness = fit[c];
        child.best_fitness = -std::numeric_limits<double>::infinity();
        next.push_back(std::move(child));
    }
    swarm.agents = std::move(next);

    const double before = swarm.best.fitness;
    update_personal_bests(swarm);
    update_global_best(swarm);
    swarm.stagnant_generations = swarm.best.fitness > before ? 0 : swarm.stagnant_generations + 1;
}

// ---------------------------------------------------------------- GWO

double gwo_a(std::size_t iteration, std::size_t max_iterations) {
    return 2.0 - 2.0 * static_cast<double>(iteration) / static_cast<double>(max_iterations);
}

void gwo_step(Swarm& swarm, const StepContext& ctx, Evaluator& evaluate) {
    const auto& cfg = ctx.config;
    if (swarm.agents.size() < 3) throw ConfigError("GWO needs at least 3 agents");
    if (swarm.leaders.size() != 3) update_leaders(swarm);
    const double a = gwo_a(ctx.iteration, ctx.max_iterations);
    for (std::size_t i = 0; i < swarm.agents.size(); ++i) {
        auto& wolf = swarm.agents[i];
        auto rng = agent_stream(cfg, i, ctx.iteration + 1);
        const std::size_t dims = wolf.position.size();
        std::vector<double> next(dims, 0.0);
        for (const auto& leader : swarm.leaders) {
            for (std::size_t d = 0; d < dims; ++d) {
                const double r1 = rng.uniform();
                const double r2 = rng.uniform();
                const double big_a = 2.0 * a * r1 - a;
                const double c = 2.0 * r2;
                const double dist = std::abs(c * leader.position[d] - wolf.position[d]);
                next[d] += (leader.position[d] - big_a * dist) / 3.0;
            }
        }
        wolf.position = std::move(next);
        clamp_position(wolf.position, cfg.position_bound);
        wolf.mask = binarize(wolf.position, rng, cfg.transfer);
    }
    finish_step(swarm, evaluate);
    update_leaders(swarm);
}

// ---------------------------------------------------------------- PSO

void pso_step(Swarm& swarm, const StepContext& ctx, Evaluator& evaluate) {
    const auto& cfg = ctx.config;
    const auto& g = swarm.best.position;
    for (std::size_t i = 0; i < swarm.agents.size(); ++i) {
        auto& p = swarm.agents[i];
        auto rng = agent_stream(cfg, i, ctx.iteration + 1);
        for (std::size_t d = 0; d < p.position.size(); ++d) {
            const double e1 = rng.uniform();
            const double e2 = rng.uniform();
            const double v = p.velocity[d] + cfg.pso.alpha * e1 * (g[d] - p.position[d]) +
                             cfg.pso.beta * e2 * (p.best_position[d] - p.position[d]);
            p.velocity[d] = std::clamp(v, -cfg.v_max, cfg.v_max);
            p.position[d] += p.velocity[d];
        }
        clamp_position(p.position, cfg.position_bound);
        p.mask = binarize(p.position, rng, cfg.transfer);
    }
    finish_step(swarm, evaluate);
}

// ---------------------------------------------------------------- WOA

double woa_a(std::size_t iteration, std::size_t max_iterations) { return gwo_a(iteration, max_iterations); }

void woa_step(Swarm& swarm, const StepContext& ctx, Evaluator& evaluate) {
    const auto& cfg = ctx.config;
    const std::size_t n = swarm.agents.size();
    const double a = woa_a(ctx.iteration, ctx.max_iterations);
    const auto& prey = swarm.best.position;
    std::vector<std::vector<double>> snapshot;
    for (const auto& w : swarm.agents) snapshot.push_back(w.position);

    for (std::size_t i = 0; i < n; ++i) {
        auto& whale = swarm.agents[i];
        auto rng = agent_stream(cfg, i, ctx.iteration + 1);
        const double big_a = 2.0 * a * rng.uniform() - a;
        const double c = 2.0 * rng.uniform();
        const double p = rng.uniform();
        const double l = rng.uniform(-1.0, 1.0);
        auto& x = whale.position;
        if (p < cfg.woa.encircle_probability) {
            const auto& target = std::abs(big_a) < 1.0 ? prey : snapshot[rng.index(n)];
            for (std::size_t d = 0; d < x.size(); ++d) {
                const double dist = std::abs(c * target[d] - x[d]);
                x[d] = target[d] - big_a * dist;
            }
        } else {
            const double factor = std::exp(cfg.woa.b * l) * std::cos(2.0 * kPi * l);
            for (std::size_t d = 0; d < x.size(); ++d) {
                const double dist = std::abs(prey[d] - x[d]);
                x[d] = dist * factor + prey[d];
            }
        }
        clamp_position(x, cfg.position_bound);
        whale.mask = binarize(x, rng, cfg.transfer);
    }
    finish_step(swarm, evaluate);
}

// ---------------------------------------------------------------- driver

std::size_t evaluation_budget(const SelectorConfig& config) {
    const std::size_t base = config.num_agents * (config.max_iterations + 1);
    if (config.algorithm == Algorithm::cs) {
        const auto n_abandon = std::min<std::size_t>(
            config.num_agents - 1,
            static_cast<std::size_t>(std::llround(config.cs.abandon * static_cast<double>(config.num_agents))));
        return base + n_abandon * config.max_iterations;
    }
    return base;
}

std::optional<std::size_t> evaluations_to_reach(const SelectionResult& result, double threshold) {
    for (std::size_t t = 0; t < result.fitness_history.size(); ++t) {
        if (result.fitness_history[t] >= threshold) return result.evaluation_history[t];
    }
    return std::nullopt;
}

SelectionResult run_selector(const SelectorConfig& config, std::size_t n_features,
                             const std::function<double(const FeatureMask&)>& fitness_fn) {
    Evaluator evaluate(fitness_fn, config.threads);
    auto swarm = initialize_swarm(config, n_features, evaluate);

    SelectionResult result;
    result.fitness_history.push_back(swarm.best.fitness);
    result.evaluation_history.push_back(evaluate.evaluations());

    for (std::size_t t = 0; t < config.max_iterations; ++t) {
        const StepContext ctx{t, config.max_iterations, config};
        switch (config.algorithm) {
            case Algorithm::gsa: gsa_step(swarm, ctx, evaluate); break;
            case Algorithm::bba: bba_step(swarm, ctx, evaluate); break;
            case Algorithm::cs: cs_step(swarm, ctx, evaluate); break;
            case Algorithm::ga: ga_step(swarm, ctx, evaluate); break;
            case Algorithm::gwo: gwo_step(swarm, ctx, evaluate); break;
            case Algorithm::pso: pso_step(swarm, ctx, evaluate); break;
            case Algorithm::woa: woa_step(swarm, ctx, evaluate); break;
        }
        result.fitness_history.push_back(swarm.best.fitness);
        result.evaluation_history.push_back(evaluate.evaluations());
    }
    result.best_mask = swarm.best.mask;
    result.best_fitness = swarm.best.fitness;
    result.evaluations = evaluate.evaluations();
    return result;
}

}  // namespace swarmselect
