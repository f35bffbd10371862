#include "sgnp/dsga.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace sgnp {

// ---------------------------------------------------------------- elite pool

void ElitePool::push(const Individual& individual) {
    if (capacity_ == 0) return;
    if (entries_.size() == capacity_) entries_.pop_front();
    entries_.push_back(individual);
}

const Individual& ElitePool::best() const {
    if (entries_.empty()) throw std::logic_error("ElitePool::best on an empty pool");
    const Individual* best = &entries_.front();
    for (const auto& e : entries_)
        if (e.fitness.value_or(0.0) >= best->fitness.value_or(0.0)) best = &e;
    return *best;
}

// ---------------------------------------------------------------- operator bank

std::string_view operator_name(Operator op) noexcept {
    switch (op) {
    case Operator::rco1: return "RCO1";
    case Operator::rco2: return "RCO2";
    case Operator::sco1: return "SCO1";
    case Operator::sco2: return "SCO2";
    }
    return "?";
}

OperatorBank OperatorBank::uniform(double initial_score) {
    OperatorBank bank;
    bank.scores.fill(initial_score);
    update_weights(bank);
    return bank;
}

Operator pick_operator(const OperatorBank& bank, Rng& rng) {
    return static_cast<Operator>(roulette_select(bank.weights, rng));
}

void update_score(OperatorBank& bank, Operator op, double f_local, double f_last, double f_global, Rng& rng,
                  const ScoreBonuses& bonuses, double temperature_fraction) {
    double& score = bank.scores[static_cast<std::size_t>(op)];
    if (f_local > f_global) {
        score += bonuses[0];
    } else if (f_local > f_last) {
        score += bonuses[1];
    } else {
        const double temperature = std::max(1.0, temperature_fraction * f_last);
        const double accept = std::exp((f_local - f_last) / temperature);
        score += rng.uniform01() < accept ? bonuses[2] : bonuses[3];
    }
}

void update_weights(OperatorBank& bank) {
    const double total = std::accumulate(bank.scores.begin(), bank.scores.end(), 0.0);
    for (std::size_t i = 0; i < operator_count; ++i)
        bank.weights[i] = total > 0.0 ? bank.scores[i] / total : 1.0 / static_cast<double>(operator_count);
}

std::size_t roulette_select(std::span<const double> fitnesses, Rng& rng) {
    if (fitnesses.empty()) throw std::invalid_argument("roulette_select: no candidates");
    double total = 0.0;
    for (double f : fitnesses) {
        if (f < 0.0 || std::isnan(f)) throw std::invalid_argument("roulette_select: negative fitness");
        total += f;
    }
    if (total == 0.0) return static_cast<std::size_t>(rng.below(fitnesses.size()));
    const double target = rng.uniform01() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < fitnesses.size(); ++i) {
        acc += fitnesses[i];
        if (target < acc) return i;
    }
    // Rounding can leave target == total; take the last positive entry.
    for (std::size_t i = fitnesses.size(); i-- > 0;)
        if (fitnesses[i] > 0.0) return i;
    return fitnesses.size() - 1;
}

// ---------------------------------------------------------------- operators

void swap_segments(std::vector<TaskId>& genes, std::size_t first, std::size_t second, std::size_t length) {
    if (first > second) std::swap(first, second);
    if (first + length > second || second + length > genes.size())
        throw std::invalid_argument("swap_segments: segments overlap or run past the end");
    std::swap_ranges(genes.begin() + static_cast<std::ptrdiff_t>(first),
                     genes.begin() + static_cast<std::ptrdiff_t>(first + length),
                     genes.begin() + static_cast<std::ptrdiff_t>(second));
}

namespace {

std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
    return lo + static_cast<std::size_t>(rng.below(hi - lo + 1));
}

double segment_similarity(const std::vector<TaskId>& g, std::size_t a, std::size_t b, std::size_t len,
                          const TaskSimilarityMatrix& ts) {
    double sum = 0.0;
    for (std::size_t i = 0; i < len; ++i)
        for (std::size_t j = 0; j < len; ++j)
            sum += ts(static_cast<std::size_t>(g[a + i]), static_cast<std::size_t>(g[b + j]));
    return sum / static_cast<double>(len * len);
}

double similarity_to_task(const std::vector<TaskId>& g, std::size_t a, std::size_t len, TaskId task,
                          const TaskSimilarityMatrix& ts) {
    double sum = 0.0;
    for (std::size_t i = 0; i < len; ++i)
        sum += ts(static_cast<std::size_t>(g[a + i]), static_cast<std::size_t>(task));
    return sum / static_cast<double>(len);
}

void random_segment_swap(std::vector<TaskId>& g, std::size_t len, Rng& rng) {
    const std::size_t n = g.size();
    const std::size_t a = pick(rng, 0, n - 2 * len);
    const std::size_t b = pick(rng, a + len, n - len);
    swap_segments(g, a, b, len);
}

} // namespace

std::vector<TaskId> apply_operator(Operator op, const Individual& parent, const OperatorContext& ctx, Rng& rng) {
    std::vector<TaskId> g = parent.genes;
    const std::size_t n = g.size();
    if (n < 2) return g;
    const std::size_t len = std::clamp<std::size_t>(ctx.segment_length, 1, n / 2);
    const std::size_t half = n / 2;
    const std::size_t k = std::max<std::size_t>(1, ctx.candidates);

    switch (op) {
    case Operator::rco1:
        random_segment_swap(g, len, rng);
        break;
    case Operator::rco2: {
        const std::size_t a = pick(rng, 0, n - len);
        rng.shuffle(std::span<TaskId>(g).subspan(a, len));
        break;
    }
    case Operator::sco1: {
        const std::size_t a = pick(rng, 0, half - len);
        std::size_t best = 0;
        double best_sim = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < k; ++c) {
            const std::size_t b = pick(rng, half, n - len);
            const double s = segment_similarity(g, a, b, len, *ctx.similarity);
            if (s < best_sim) {
                best_sim = s;
                best = b;
            }
        }
        swap_segments(g, a, best, len);
        break;
    }
    case Operator::sco2: {
        if (parent.unscheduled.empty()) {
            random_segment_swap(g, len, rng);
            break;
        }
        const auto& tasks = ctx.instance->tasks;
        TaskId target = parent.unscheduled.front();
        for (TaskId id : parent.unscheduled) {
            const double p = tasks[static_cast<std::size_t>(id)].profit;
            const double q = tasks[static_cast<std::size_t>(target)].profit;
            if (p > q || (p == q && id < target)) target = id;
        }
        const auto pos = static_cast<std::size_t>(std::find(g.begin(), g.end(), target) - g.begin());
        const std::size_t seg = std::min(pos, n - len);
        std::optional<std::size_t> best;
        double best_sim = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < k; ++c) {
            const std::size_t b = pick(rng, 0, half - len);
            if (b + len > seg && seg + len > b) continue; // overlaps the task's own segment
            const double s = similarity_to_task(g, b, len, target, *ctx.similarity);
            if (s < best_sim) {
                best_sim = s;
                best = b;
            }
        }
        if (best)
            swap_segments(g, seg, *best, len);
        else
            random_segment_swap(g, len, rng);
        break;
    }
    }
    return g;
}

// ---------------------------------------------------------------- initialization

std::size_t heuristic_share(std::size_t population_size) noexcept { return (population_size + 4) / 5; }

std::vector<std::vector<TaskId>> init_population(const Instance& instance, std::size_t population_size, Rng& rng) {
    const std::size_t n = instance.tasks.size();
    std::vector<TaskId> ids(n);
    std::iota(ids.begin(), ids.end(), TaskId{0});

    auto sorted_by = [&](auto key) {
        std::vector<TaskId> g = ids;
        std::stable_sort(g.begin(), g.end(), [&](TaskId a, TaskId b) {
            return key(instance.tasks[static_cast<std::size_t>(a)]) < key(instance.tasks[static_cast<std::size_t>(b)]);
        });
        return g;
    };
    const std::array<std::vector<TaskId>, 3> rules{
        sorted_by([](const Task& t) { return t.est; }),
        sorted_by([](const Task& t) { return t.let; }),
        sorted_by([](const Task& t) { return t.duration; }),
    };

    std::vector<std::vector<TaskId>> population;
    population.reserve(population_size);
    const std::size_t share = heuristic_share(population_size);
    for (const auto& rule : rules)
        for (std::size_t i = 0; i < share && population.size() < population_size; ++i) population.push_back(rule);
    while (population.size() < population_size) {
        std::vector<TaskId> g = ids;
        rng.shuffle(std::span<TaskId>(g));
        population.push_back(std::move(g));
    }
    return population;
}

// ---------------------------------------------------------------- evolve

void validate_config(const DsgaConfig& c) {
    auto fail = [](const char* what) { throw std::invalid_argument(std::string("DsgaConfig: ") + what); };
    if (c.population_size < 2) fail("population_size must be at least 2");
    if (c.max_evaluations < 1) fail("max_evaluations must be at least 1");
    if (c.segment_length < 1) fail("segment_length must be at least 1");
    if (!(c.crossover_probability >= 0.0 && c.crossover_probability <= 1.0))
        fail("crossover_probability must lie in [0, 1]");
    if (c.stagnation_threshold < 1 || c.restart_threshold < 1 || c.weight_update_period < 1)
        fail("thresholds must be at least 1");
    if (!(c.restart_randomness >= 0.0 && c.restart_randomness <= 1.0)) fail("restart_randomness must lie in [0, 1]");
    for (std::size_t i = 0; i + 1 < c.bonuses.size(); ++i)
        if (!(c.bonuses[i] > c.bonuses[i + 1])) fail("score bonuses must be strictly decreasing");
    if (c.bonuses.back() < 0.0) fail("score bonuses must be non-negative");
    if (c.initial_score < 0.0) fail("initial_score must be non-negative");
}

namespace {

struct Decoded {
    double fitness = 0.0;
    Schedule schedule;
};

Decoded evaluate(const DecoderContext& ctx, const std::vector<TaskId>& genes) {
    Decoded d;
    d.schedule = decode(ctx, genes);
    d.fitness = fitness(ctx.instance(), d.schedule);
    return d;
}

// Runs that share nothing but the read-only context; joined in index order.
std::vector<Decoded> evaluate_all(const DecoderContext& ctx, const std::vector<const std::vector<TaskId>*>& jobs,
                                  std::size_t threads) {
    std::vector<Decoded> out(jobs.size());
    const std::size_t workers = std::min(threads, jobs.size());
    if (workers <= 1) {
        for (std::size_t i = 0; i < jobs.size(); ++i) out[i] = evaluate(ctx, *jobs[i]);
        return out;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < jobs.size(); i += workers) out[i] = evaluate(ctx, *jobs[i]);
        });
    pool.clear();
    return out;
}

class Engine {
  public:
    Engine(const Instance& instance, const DsgaConfig& config)
        : inst_(instance),
          cfg_(config),
          ctx_(instance),
          ts_(build_task_similarity(instance.tasks)),
          rng_(config.seed),
          pool_(config.elite_capacity),
          bank_(OperatorBank::uniform(config.initial_score)),
          op_ctx_{&instance, &ts_, config.segment_length, config.similarity_candidates} {
        history_.reserve(config.max_evaluations);
    }

    EvolveResult run(const std::function<void(const GenerationView&)>& observer) {
        std::vector<Individual> population;
        for (auto& genes : init_population(inst_, cfg_.population_size, rng_))
            population.push_back({std::move(genes), std::nullopt, {}});

        const std::size_t m = std::max<std::size_t>(2, cfg_.max_evaluations / cfg_.population_size);
        const std::size_t generation_limit = cfg_.max_generations ? cfg_.max_generations : 50 * m;
        std::size_t stagnation = 0;
        std::size_t restart_count = 0;
        std::size_t generation = 0;

        while (budget_left() && generation < generation_limit) {
            ++generation;
            evaluate_fresh(population);
            if (!budget_left()) break;

            std::vector<std::vector<TaskId>> genomes;
            genomes.reserve(population.size());
            for (const auto& ind : population) genomes.push_back(ind.genes);
            const SimilarityStats stats = population_similarity_stats(genomes, ts_);
            const double threshold = generation_threshold(std::min(generation, m), m, stats.ave, stats.std);

            if (!improved_) ++stagnation;
            improved_ = false;

            std::vector<double> fits;
            fits.reserve(population.size());
            for (const auto& ind : population) fits.push_back(*ind.fitness);
            const Individual benchmark = population[roulette_select(fits, rng_)];

            std::vector<Individual> next;
            next.reserve(population.size());
            for (const auto& ind : population) {
                if (individual_similarity(ind.genes, benchmark.genes, ts_) > threshold) {
                    if (budget_left() && rng_.bernoulli(cfg_.crossover_probability))
                        next.push_back(offspring(ind));
                    else
                        next.push_back(ind);
                } else if (stagnation > cfg_.stagnation_threshold) {
                    next.push_back(pool_.best());
                    stagnation = 0;
                } else {
                    next.push_back(benchmark);
                }
            }
            population = std::move(next);

            if (cfg_.restarts && ++restart_count >= cfg_.restart_threshold) {
                restart_count = 0;
                const std::size_t slot = static_cast<std::size_t>(rng_.below(population.size()));
                Individual fresh;
                if (rng_.bernoulli(cfg_.restart_randomness)) {
                    fresh.genes.resize(inst_.tasks.size());
                    std::iota(fresh.genes.begin(), fresh.genes.end(), TaskId{0});
                    rng_.shuffle(std::span<TaskId>(fresh.genes));
                } else {
                    const Operator op = cfg_.adaptive_operators ? pick_operator(bank_, rng_) : Operator::rco1;
                    fresh.genes = apply_operator(op, pool_.best(), op_ctx_, rng_);
                }
                population[slot] = std::move(fresh);
            }

            if (observer)
                observer(GenerationView{generation, evaluations_, threshold, population, pool_, bank_, best_fitness_});
        }

        EvolveResult result;
        result.best = best_genes_;
        result.schedule = best_schedule_;
        result.best_fitness = best_fitness_;
        result.evaluations = evaluations_;
        result.generations = generation;
        result.bank = bank_;
        result.history = std::move(history_);
        const double last = result.history.empty() ? 0.0 : result.history.back();
        result.history.resize(cfg_.max_evaluations, last);
        return result;
    }

  private:
    bool budget_left() const noexcept { return evaluations_ < cfg_.max_evaluations; }

    void record(Individual& ind, Decoded decoded) {
        ++evaluations_;
        ind.fitness = decoded.fitness;
        ind.unscheduled = std::move(decoded.schedule.unscheduled);
        decoded.schedule.unscheduled = ind.unscheduled;
        if (!has_best_ || decoded.fitness > best_fitness_) {
            has_best_ = true;
            improved_ = true;
            best_fitness_ = decoded.fitness;
            best_genes_ = ind.genes;
            best_schedule_ = std::move(decoded.schedule);
            pool_.push(ind);
        }
        history_.push_back(best_fitness_);
    }

    void evaluate_fresh(std::vector<Individual>& population) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < population.size(); ++i)
            if (!population[i].fitness && idx.size() < cfg_.max_evaluations - evaluations_) idx.push_back(i);
        std::vector<const std::vector<TaskId>*> jobs;
        jobs.reserve(idx.size());
        for (std::size_t i : idx) jobs.push_back(&population[i].genes);
        auto decoded = evaluate_all(ctx_, jobs, cfg_.threads);
        for (std::size_t j = 0; j < idx.size(); ++j) record(population[idx[j]], std::move(decoded[j]));
    }

    Individual offspring(const Individual& parent) {
        const Operator op = cfg_.adaptive_operators ? pick_operator(bank_, rng_) : Operator::rco1;
        Individual child{apply_operator(op, parent, op_ctx_, rng_), std::nullopt, {}};
        const double f_global = best_fitness_;
        record(child, evaluate(ctx_, child.genes));
        if (cfg_.adaptive_operators) {
            update_score(bank_, op, *child.fitness, *parent.fitness, f_global, rng_, cfg_.bonuses,
                         cfg_.metropolis_temperature);
            if (++applications_ % cfg_.weight_update_period == 0) update_weights(bank_);
        }
        return child;
    }

    const Instance& inst_;
    const DsgaConfig& cfg_;
    DecoderContext ctx_;
    TaskSimilarityMatrix ts_;
    Rng rng_;
    ElitePool pool_;
    OperatorBank bank_;
    OperatorContext op_ctx_;

    std::size_t evaluations_ = 0;
    std::size_t applications_ = 0;
    bool has_best_ = false;
    bool improved_ = false;
    double best_fitness_ = 0.0;
    std::vector<TaskId> best_genes_;
    Schedule best_schedule_;
    std::vector<double> history_;
};

} // namespace

EvolveResult evolve(const Instance& instance, const DsgaConfig& config,
                    const std::function<void(const GenerationView&)>& observer) {
    validate_config(config);
    if (const auto diags = check_instance(instance); !diags.empty())
        throw std::invalid_argument("evolve: invalid instance: " + diags.front().path + ": " + diags.front().message);
    Engine engine(instance, config);
    return engine.run(observer);
}

} // namespace sgnp
