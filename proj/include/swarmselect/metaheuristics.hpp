#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "swarmselect/feature_mask.hpp"
#include "swarmselect/rng.hpp"

namespace swarmselect {

enum class Algorithm { gsa, bba, cs, ga, gwo, pso, woa };

inline constexpr Algorithm kAllAlgorithms[] = {Algorithm::gsa, Algorithm::bba, Algorithm::cs, Algorithm::ga,
                                               Algorithm::gwo, Algorithm::pso, Algorithm::woa};

std::string to_string(Algorithm algorithm);
Algorithm parse_algorithm(std::string_view name);

/// standard: bit = 1 with probability S(v). literal: bit = 0 when rand < S(v),
/// the inequality exactly as printed for the binary bat algorithm.
enum class TransferMode { standard, literal };

struct GsaParams {
    double g0 = 100.0;
    double decay = 20.0;  // G(t) = g0 * exp(-decay * t / T)
    double epsilon = 1e-12;
    /// Pairwise force is G*M_i*M_j*(x_j - x_i) / (R + eps)^distance_power.
    /// 1 is the usual GSA form; 3 gives an inverse-square magnitude.
    double distance_power = 1.0;
};

struct BbaParams {
    double f_min = 0.0;
    double f_max = 2.0;
    double loudness0 = 1.0;
    double pulse0 = 0.5;
    double alpha = 0.9;  // loudness decay
    double gamma = 0.9;  // pulse-rate growth
};

struct CsParams {
    double alpha = 0.01;   // step scale
    double lambda = 1.5;   // Levy exponent
    double abandon = 0.25; // fraction of worst nests redrawn per iteration
};

struct GaParams {
    double crossover = 0.9;
    std::optional<double> mutation;  // defaults to 1 / n_features
    std::size_t tournament = 2;
    std::size_t elitism = 1;
    std::size_t stagnation_window = 15;
    double stagnation_boost = 10.0;
};

struct PsoParams {
    double alpha = 2.0;  // pull toward the global best
    double beta = 2.0;   // pull toward the personal best
};

struct WoaParams {
    double b = 1.0;
    double encircle_probability = 0.5;  // p below this encircles or explores, else spiral
};

struct SelectorConfig {
    Algorithm algorithm = Algorithm::gsa;
    std::size_t num_agents = 30;
    std::size_t max_iterations = 100;
    std::uint64_t seed = 42;
    std::optional<FeatureMask> leading_mask;

    double v_max = 6.0;
    /// Continuous positions are clamped to [-position_bound, position_bound]
    /// so no bit's set probability saturates beyond S(position_bound).
    double position_bound = 6.0;
    double init_range = 4.0;       // unseeded positions ~ U[-init_range, init_range]
    double seed_magnitude = 4.0;   // seeded agent sits at +/- this value
    TransferMode transfer = TransferMode::standard;
    /// Worker threads for fitness evaluation within one iteration.
    std::size_t threads = 1;

    GsaParams gsa;
    BbaParams bba;
    CsParams cs;
    GaParams ga;
    PsoParams pso;
    WoaParams woa;

    void validate(std::size_t n_features) const;
};

double transfer_sigmoid(double v);

/// Bit k set with probability S(position[k]) (or the literal orientation).
/// Consumes one uniform per coordinate, plus one index draw when the result
/// is empty and a random bit is set to repair it.
FeatureMask binarize(std::span<const double> position, Rng& rng, TransferMode mode = TransferMode::standard);

/// Sets one random bit when `mask` is empty. Returns true if it did.
bool repair(FeatureMask& mask, Rng& rng);

/// Mantegna's sigma_u for a Levy-stable step with exponent lambda.
double mantegna_sigma(double lambda);

/// One Levy-distributed step by Mantegna's method (two normals, u then v).
double levy_step(double lambda, Rng& rng);

struct Agent {
    std::vector<double> position;  // bit values for BBA and GA
    std::vector<double> velocity;
    FeatureMask mask;
    double fitness = 0.0;

    // personal best (PSO)
    std::vector<double> best_position;
    FeatureMask best_mask;
    double best_fitness = 0.0;

    // echolocation state (BBA)
    double loudness = 1.0;
    double pulse_rate = 0.0;
};

struct Leader {
    std::vector<double> position;
    FeatureMask mask;
    double fitness = -1.0;
};

struct Swarm {
    std::vector<Agent> agents;
    Leader best;                 // global best so far
    std::vector<Leader> leaders; // GWO alpha, beta, delta
    std::size_t stagnant_generations = 0;
};

/// Memoizing wrapper around a mask -> fitness function. Batches are
/// de-duplicated and may be fanned out to worker threads; results are
/// assembled in request order so the outcome does not depend on scheduling.
class Evaluator {
public:
    using FitnessFn = std::function<double(const FeatureMask&)>;

    explicit Evaluator(FitnessFn fn, std::size_t threads = 1) : fn_(std::move(fn)), threads_(threads) {}

    double operator()(const FeatureMask& mask);
    std::vector<double> evaluate(std::span<const FeatureMask> masks);

    /// Distinct masks actually passed to the fitness function.
    std::size_t evaluations() const { return evaluations_; }
    /// All fitness requests, memo hits included.
    std::size_t requests() const { return requests_; }

private:
    FitnessFn fn_;
    std::size_t threads_;
    std::unordered_map<std::string, double> cache_;
    std::size_t evaluations_ = 0;
    std::size_t requests_ = 0;
};

struct StepContext {
    std::size_t iteration = 0;  // 0-based
    std::size_t max_iterations = 1;
    const SelectorConfig& config;
};

// Random streams: agent i draws from Rng::stream(seed, i, t + 1) during
// iteration t (t + 1 = 0 is initialization); population-level choices use
// agent index kPopulationStream.
inline constexpr std::uint64_t kPopulationStream = 0xFFFFFFFFu;

Rng agent_stream(const SelectorConfig& config, std::size_t agent, std::size_t iteration);

/// Random initial swarm; agent 0 takes the leading mask when configured.
/// All agents are evaluated and the global best / leaders are set.
Swarm initialize_swarm(const SelectorConfig& config, std::size_t n_features, Evaluator& evaluate);

/// Folds the agents' current fitness into the global best (strict
/// improvement, lower index wins ties).
void update_global_best(Swarm& swarm);

/// Alpha/beta/delta update of the GWO leader archive.
void update_leaders(Swarm& swarm);

double gravitational_constant(const GsaParams& params, std::size_t iteration, std::size_t max_iterations);
std::size_t kbest_count(std::size_t num_agents, std::size_t iteration, std::size_t max_iterations);
/// Normalized masses M_i from fitness (maximization); uniform when all equal.
std::vector<double> gsa_masses(std::span<const double> fitness);
/// Force exerted on agent i by agent j, before random scaling.
std::vector<double> gsa_pairwise_force(double g, double mass_i, double mass_j, std::span<const double> x_i,
                                       std::span<const double> x_j, const GsaParams& params);

double gwo_a(std::size_t iteration, std::size_t max_iterations);
double woa_a(std::size_t iteration, std::size_t max_iterations);
double bba_pulse_rate(const BbaParams& params, std::size_t completed_iterations);

// Each step moves every agent, evaluates the new masks and refreshes the
// global best, so the swarm leaves every step fully scored.

/// Per agent i: for each j in Kbest (j != i), for each dim: one uniform
/// scales that force component; then per dim one uniform scales the old
/// velocity; then binarize.
void gsa_step(Swarm& swarm, const StepContext& ctx, Evaluator& evaluate);

/// Per bat: frequency uniform; velocity += (x* - x) * f; candidate =
/// binarize(velocity); one uniform against the pulse rate picks a local walk
/// (global best with one index-drawn bit flipped). After evaluation, one more
/// uniform per bat gates acceptance by loudness.
void bba_step(Swarm& swarm, const StepContext& ctx, Evaluator& evaluate);

/// Per nest: one Levy step per dim (alpha scaled), binarize; after
/// evaluation the population stream draws the rival nest for each candidate
/// in order. The worst nests are then redrawn from their own streams.
void cs_step(Swarm& swarm, const StepContext& ctx, Evaluator& evaluate);

/// Elitism, then child c (c >= elitism) from stream c: two tournaments (two
/// index draws each), one uniform for crossover, one per bit for uniform
/// crossover when it happens, one per bit for mutation, repair.
void ga_step(Swarm& swarm, const StepContext& ctx, Evaluator& evaluate);

/// Per wolf: for leader in (alpha, beta, delta), for each dim: r1 then r2.
void gwo_step(Swarm& swarm, const StepContext& ctx, Evaluator& evaluate);

/// Per particle and dim: e1 then e2.
void pso_step(Swarm& swarm, const StepContext& ctx, Evaluator& evaluate);

/// Per whale: r1, r2, p, l (uniform in [-1, 1]) and, when exploring, the
/// index of the random whale.
void woa_step(Swarm& swarm, const StepContext& ctx, Evaluator& evaluate);

struct SelectionResult {
    FeatureMask best_mask;
    double best_fitness = 0.0;
    std::vector<double> fitness_history;            // [0] after init, then per iteration
    std::vector<std::size_t> evaluation_history;    // cumulative evaluations, same indexing
    std::size_t evaluations = 0;
};

/// Upper bound on distinct fitness evaluations for a run.
std::size_t evaluation_budget(const SelectorConfig& config);

/// Evaluations spent when the best fitness first reached `threshold`, or
/// nullopt if it never did.
std::optional<std::size_t> evaluations_to_reach(const SelectionResult& result, double threshold);

SelectionResult run_selector(const SelectorConfig& config, std::size_t n_features,
                             const std::function<double(const FeatureMask&)>& fitness_fn);

}  // namespace swarmselect
