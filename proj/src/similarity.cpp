#include "sgnp/similarity.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace sgnp {

Matrix attribute_matrix(std::span<const Task> tasks) {
    Matrix m(tasks.size(), attribute_count);
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        m(i, static_cast<std::size_t>(Attribute::est)) = static_cast<double>(tasks[i].est);
        m(i, static_cast<std::size_t>(Attribute::let)) = static_cast<double>(tasks[i].let);
        m(i, static_cast<std::size_t>(Attribute::duration)) = static_cast<double>(tasks[i].duration);
        m(i, static_cast<std::size_t>(Attribute::profit)) = tasks[i].profit;
    }
    return m;
}

AttributeWeights rvw_weights(const Matrix& a) {
    const std::size_t n = a.rows();
    if (n < 2) throw std::invalid_argument("rvw_weights needs at least two rows");
    std::vector<double> y(a.cols(), 0.0);
    for (std::size_t c = 0; c < a.cols(); ++c) {
        double mean = 0.0;
        for (std::size_t r = 0; r < n; ++r) mean += a(r, c);
        mean /= static_cast<double>(n);
        double ss = 0.0;
        for (std::size_t r = 0; r < n; ++r) ss += (a(r, c) - mean) * (a(r, c) - mean);
        const double spread = std::sqrt(ss / static_cast<double>(n - 1));
        if (spread == 0.0) continue;
        if (mean == 0.0)
            throw DegenerateAttribute("attribute column " + std::to_string(c) + " has zero mean but nonzero spread");
        y[c] = spread / std::abs(mean);
    }
    const double total = std::accumulate(y.begin(), y.end(), 0.0);
    AttributeWeights w;
    if (total == 0.0) {
        w.weights.assign(a.cols(), 1.0 / static_cast<double>(a.cols()));
        return w;
    }
    w.weights.reserve(y.size());
    for (double v : y) w.weights.push_back(v / total);
    return w;
}

double weighted_distance(std::span<const double> x, std::span<const double> y, const AttributeWeights& w) {
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        sum += w.weights[i] * d * d;
    }
    return std::sqrt(sum);
}

TaskSimilarityMatrix task_similarity_matrix(const Matrix& attributes, const AttributeWeights& weights) {
    const std::size_t n = attributes.rows();
    Matrix s(n, n, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = 1.0 / (1.0 + weighted_distance(attributes.row(i), attributes.row(j), weights));
            s(i, j) = v;
            s(j, i) = v;
        }
    }
    return TaskSimilarityMatrix(std::move(s));
}

TaskSimilarityMatrix build_task_similarity(std::span<const Task> tasks) {
    const Matrix attrs = attribute_matrix(tasks);
    AttributeWeights w;
    if (tasks.size() < 2)
        w.weights.assign(attribute_count, 1.0 / static_cast<double>(attribute_count));
    else
        w = rvw_weights(attrs);
    return task_similarity_matrix(attrs, w);
}

double individual_similarity(std::span<const TaskId> a, std::span<const TaskId> b, const TaskSimilarityMatrix& ts) {
    if (a.size() != b.size()) throw std::invalid_argument("individual_similarity: length mismatch");
    if (a.empty()) return 1.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        sum += ts(static_cast<std::size_t>(a[i]), static_cast<std::size_t>(b[i]));
    return sum / static_cast<double>(a.size());
}

double generation_threshold(std::size_t x, std::size_t m, double ave, double std) {
    if (m < 2 || x < 1 || x > m) throw std::invalid_argument("generation_threshold needs 1 <= x <= m, m >= 2");
    const double t = static_cast<double>(x - 1) / static_cast<double>(m - 1);
    return ave - std * (1.0 - std::exp(-std::numbers::ln2 * t));
}

SimilarityStats pair_stats(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("pair_stats: no values");
    const double n = static_cast<double>(values.size());
    const double ave = std::accumulate(values.begin(), values.end(), 0.0) / n;
    if (values.size() == 1) return {ave, 0.0};
    double ss = 0.0;
    for (double v : values) ss += (v - ave) * (v - ave);
    return {ave, std::sqrt(ss / (n - 1.0))};
}

SimilarityStats population_similarity_stats(std::span<const std::vector<TaskId>> population,
                                            const TaskSimilarityMatrix& ts) {
    if (population.size() < 2) throw std::invalid_argument("population_similarity_stats needs two individuals");
    std::vector<double> values;
    values.reserve(population.size() * (population.size() - 1) / 2);
    for (std::size_t i = 0; i < population.size(); ++i)
        for (std::size_t j = i + 1; j < population.size(); ++j)
            values.push_back(individual_similarity(population[i], population[j], ts));
    return pair_stats(values);
}

} // namespace sgnp
