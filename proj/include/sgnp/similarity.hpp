#pragma once

/// @file similarity.hpp
/// @brief Task and individual similarity.
///
/// Tasks are compared on four attributes in fixed column order
/// (est, let, duration, profit). Columns are weighted by their coefficient of
/// variation (reciprocal variance weighting), task distance is weighted
/// Euclidean and similarity is 1 / (1 + distance). Individuals, being task
/// permutations, are compared position by position.

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "sgnp/model.hpp"

namespace sgnp {

inline constexpr std::size_t attribute_count = 4;

enum class Attribute : std::size_t { est = 0, let = 1, duration = 2, profit = 3 };

/// Row-major n x m matrix of doubles.
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }
    std::span<const double> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

class DegenerateAttribute : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// One row per task: est, let, duration, profit.
Matrix attribute_matrix(std::span<const Task> tasks);

struct AttributeWeights {
    std::vector<double> weights;
};

/// Column weight w_i = y_i / sum(y), y = S / |mean| with S the n-1 sample
/// standard deviation. Constant columns get y = 0; if every column is
/// constant the weights are uniform. Requires at least two rows. Throws
/// DegenerateAttribute for a zero-mean column with spread.
AttributeWeights rvw_weights(const Matrix& attributes);

double weighted_distance(std::span<const double> x, std::span<const double> y, const AttributeWeights& w);

/// Symmetric n x n task similarity with unit diagonal.
class TaskSimilarityMatrix {
  public:
    TaskSimilarityMatrix() = default;
    explicit TaskSimilarityMatrix(Matrix values) : values_(std::move(values)) {}

    std::size_t size() const noexcept { return values_.rows(); }
    double operator()(std::size_t i, std::size_t j) const noexcept { return values_(i, j); }

  private:
    Matrix values_;
};

TaskSimilarityMatrix task_similarity_matrix(const Matrix& attributes, const AttributeWeights& weights);

/// Attribute matrix, weights and similarity in one step. Fewer than two
/// tasks fall back to uniform weights.
TaskSimilarityMatrix build_task_similarity(std::span<const Task> tasks);

/// Mean of Ts(a_i, b_i) over positions. Throws std::invalid_argument on a
/// length mismatch.
double individual_similarity(std::span<const TaskId> a, std::span<const TaskId> b, const TaskSimilarityMatrix& ts);

/// Similarity gate for generation x of m:
/// ave - std * (1 - exp(-ln2 * (x - 1) / (m - 1))).
double generation_threshold(std::size_t x, std::size_t m, double ave, double std);

struct SimilarityStats {
    double ave = 0.0;
    double std = 0.0;
};

/// Mean and n-1 sample deviation of pairwise similarity values. One value
/// has deviation 0.
SimilarityStats pair_stats(std::span<const double> values);

/// Stats over all unordered pairs of the population. Needs two or more
/// individuals.
SimilarityStats population_similarity_stats(std::span<const std::vector<TaskId>> population,
                                            const TaskSimilarityMatrix& ts);

} // namespace sgnp
