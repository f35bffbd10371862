#pragma once

/// @file dsga.hpp
/// @brief Distance-similarity genetic algorithm over task permutations.
///
/// The genome is a permutation of task ids, decoded into a schedule by the
/// feed-switching decoder. Each generation, individuals whose similarity to a
/// roulette-selected benchmark individual exceeds a decaying threshold are
/// perturbed by one of four operators; the others are replaced by the
/// benchmark or, after stagnation, by the best individual of the elite pool.
/// Operators are chosen by roulette over weights derived from their scores.

#include <array>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "sgnp/decoder.hpp"
#include "sgnp/model.hpp"
#include "sgnp/rng.hpp"
#include "sgnp/similarity.hpp"

namespace sgnp {

struct Individual {
    std::vector<TaskId> genes;
    std::optional<double> fitness;      ///< set once decoded
    std::vector<TaskId> unscheduled;    ///< from the last decode
};

/// Bounded buffer of improving individuals; evicts the oldest entry when full.
class ElitePool {
  public:
    explicit ElitePool(std::size_t capacity) : capacity_(capacity) {}

    void push(const Individual& individual);
    bool empty() const noexcept { return entries_.empty(); }
    std::size_t size() const noexcept { return entries_.size(); }
    std::size_t capacity() const noexcept { return capacity_; }
    /// Highest-fitness entry; ties go to the most recent. Pool must be non-empty.
    const Individual& best() const;

  private:
    std::size_t capacity_;
    std::deque<Individual> entries_;
};

enum class Operator : std::uint8_t { rco1 = 0, rco2 = 1, sco1 = 2, sco2 = 3 };
inline constexpr std::size_t operator_count = 4;
std::string_view operator_name(Operator op) noexcept;

/// Score bonuses, in order: new global best, better than parent, accepted by
/// the Metropolis test, otherwise.
using ScoreBonuses = std::array<double, operator_count>;

struct OperatorBank {
    std::array<double, operator_count> scores{};
    std::array<double, operator_count> weights{};

    /// Equal scores, uniform weights.
    static OperatorBank uniform(double initial_score);
};

/// Roulette over operator weights.
Operator pick_operator(const OperatorBank& bank, Rng& rng);

/// Adds one bonus to the operator's score: bonus[0] if f_local > f_global,
/// else bonus[1] if f_local > f_last, else bonus[2] if exp((f_local - f_last)/T)
/// with T = max(1, temperature_fraction * f_last) passes a uniform draw, else
/// bonus[3].
void update_score(OperatorBank& bank, Operator op, double f_local, double f_last, double f_global, Rng& rng,
                  const ScoreBonuses& bonuses, double temperature_fraction = 0.05);

/// weights = scores / sum(scores); uniform if every score is zero.
void update_weights(OperatorBank& bank);

/// Index drawn with probability fitness_i / sum; uniform if the sum is zero.
/// Throws std::invalid_argument on a negative or empty input.
std::size_t roulette_select(std::span<const double> fitnesses, Rng& rng);

/// What the operators need beyond the genome.
struct OperatorContext {
    const Instance* instance = nullptr;
    const TaskSimilarityMatrix* similarity = nullptr;
    std::size_t segment_length = 2;
    std::size_t candidates = 3;
};

/// Swaps the equal-length segments starting at `first` and `second`.
void swap_segments(std::vector<TaskId>& genes, std::size_t first, std::size_t second, std::size_t length);

/// Applies one operator; the result is always a permutation of the input.
/// Segment length is clamped to n/2; inputs shorter than two are returned as is.
std::vector<TaskId> apply_operator(Operator op, const Individual& parent, const OperatorContext& context, Rng& rng);

/// Heuristic share per rule: ceil(0.2 * population).
std::size_t heuristic_share(std::size_t population_size) noexcept;

/// Sorted by est, by let, by duration (ties by id), then random permutations.
std::vector<std::vector<TaskId>> init_population(const Instance& instance, std::size_t population_size, Rng& rng);

struct DsgaConfig {
    std::size_t population_size = 10;
    std::size_t max_evaluations = 5000;
    std::size_t segment_length = 2;
    double crossover_probability = 0.8;
    std::size_t elite_capacity = 20;
    std::size_t stagnation_threshold = 20; ///< mu
    std::size_t restart_threshold = 20;    ///< tau
    double restart_randomness = 0.2;       ///< phi
    bool restarts = true;
    std::size_t weight_update_period = 20;
    ScoreBonuses bonuses{50.0, 30.0, 10.0, 5.0};
    double initial_score = 50.0;
    double metropolis_temperature = 0.05;
    std::size_t similarity_candidates = 3;
    /// false: always RCO1 with no score bookkeeping (the ablated variant).
    bool adaptive_operators = true;
    /// 0 means 50 * (max_evaluations / population_size). Guards runs whose
    /// settings never spend evaluations.
    std::size_t max_generations = 0;
    /// Worker threads for decoding fresh individuals; results do not depend on it.
    std::size_t threads = 1;
    std::uint64_t seed = 1;
};

/// Throws std::invalid_argument describing the first bad field.
void validate_config(const DsgaConfig& config);

/// Snapshot handed to an observer after each generation's replacement step.
struct GenerationView {
    std::size_t generation = 0;
    std::size_t evaluations = 0;
    double threshold = 0.0;
    const std::vector<Individual>& population;
    const ElitePool& pool;
    const OperatorBank& bank;
    double best_fitness = 0.0;
};

struct EvolveResult {
    std::vector<TaskId> best;
    Schedule schedule;
    double best_fitness = 0.0;
    /// Best-so-far after each evaluation; padded to max_evaluations.
    std::vector<double> history;
    std::size_t evaluations = 0;
    std::size_t generations = 0;
    OperatorBank bank;
};

EvolveResult evolve(const Instance& instance, const DsgaConfig& config,
                    const std::function<void(const GenerationView&)>& observer = {});

} // namespace sgnp
