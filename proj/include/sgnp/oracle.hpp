#pragma once

/// @file oracle.hpp
/// @brief Reference solvers: exact enumeration for tiny instances, random
/// search and a profit-greedy baseline.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "sgnp/model.hpp"

namespace sgnp {

inline constexpr std::size_t exact_task_limit = 10;

class InstanceTooLarge : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

struct OracleResult {
    double optimum = 0.0;
    Schedule schedule;
    std::uint64_t nodes = 0;
};

/// Branch and bound over ordered task sequences. Each step places one more
/// task at the earliest feasible start of any free piece, directly or with a
/// feed switch, using the decoder's placement rules. Because every decode is
/// such a sequence, the optimum bounds the decoder from above for all
/// permutations. Throws InstanceTooLarge above exact_task_limit tasks.
OracleResult exact_optimum(const Instance& instance);

struct SearchResult {
    double best_fitness = 0.0;
    std::vector<TaskId> best;
    Schedule schedule;
    std::vector<double> history; ///< best-so-far per evaluation
};

/// Best of `budget` uniformly random permutations.
SearchResult random_search(const Instance& instance, std::size_t budget, std::uint64_t seed);

/// Permutation by descending profit, ties by ascending id.
std::vector<TaskId> greedy_order(const Instance& instance);
Schedule greedy_profit(const Instance& instance);

} // namespace sgnp
