#pragma once

/// @file bench.hpp
/// @brief Experiment harness: seeded runs, summary statistics, delimited output.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sgnp/dsga.hpp"
#include "sgnp/model.hpp"

namespace sgnp {

enum class Algorithm { dsga, dsga_wa, random, greedy, oracle };

std::string_view algorithm_name(Algorithm a) noexcept;
/// Accepts "dsga", "dsga-wa", "random", "greedy", "oracle".
std::optional<Algorithm> parse_algorithm(std::string_view name) noexcept;

struct RunRecord {
    std::string instance;
    std::string algorithm;
    std::uint64_t seed = 0;
    double best_fitness = 0.0;
    double seconds = 0.0;       ///< solver loop only
    std::vector<double> trace;  ///< best-so-far per evaluation, length = budget
    Schedule schedule;
    bool valid = false;         ///< schedule passed validate_schedule
};

/// Runs one algorithm once. DSGA settings other than budget, population,
/// seed and the adaptive flag come from `base`.
RunRecord run_algorithm(const Instance& instance, Algorithm algorithm, const DsgaConfig& base);

struct AlgorithmSummary {
    std::string algorithm;
    std::size_t runs = 0;
    double best = 0.0;
    double mean = 0.0;
    double stddev = 0.0;        ///< n-1 sample deviation, 0 for one run
    double mean_seconds = 0.0;
};

struct SummaryRow {
    std::string instance;
    std::vector<AlgorithmSummary> algorithms;
};

/// Groups records by instance (first-seen order) and algorithm.
std::vector<SummaryRow> summarize(const std::vector<RunRecord>& records);

struct SuiteEntry {
    std::string path;           ///< instance file
    Instance instance;
};

struct SuiteConfig {
    std::vector<Algorithm> algorithms{Algorithm::dsga};
    std::size_t runs = 10;
    std::uint64_t base_seed = 1;
    DsgaConfig dsga;            ///< budget/population/etc. for every run
    std::size_t parallel_runs = 1;
};

/// R seeded runs per (instance, algorithm); seed of run r is base_seed + r.
/// Records are named by instance label, or by path where labels collide.
/// Records come back in (instance, algorithm, run) order whatever the
/// parallelism.
std::vector<RunRecord> run_suite(const std::vector<SuiteEntry>& instances, const SuiteConfig& config);

/// instance,algorithm,runs,best,mean,std,mean_cpu_s
std::string summary_csv(const std::vector<SummaryRow>& rows);
/// instance,algorithm,seed,best_fitness,cpu_s,valid
std::string runs_csv(const std::vector<RunRecord>& records);
/// instance,algorithm,seed,evaluation,best_so_far (evaluation is 1-based)
std::string traces_csv(const std::vector<RunRecord>& records);

} // namespace sgnp
