#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "sgnp/instance_io.hpp"
#include "sgnp/rng.hpp"
#include "sgnp/similarity.hpp"

using namespace sgnp;

namespace {

constexpr double tol = 1e-12;

Matrix from_rows(const std::vector<std::vector<double>>& rows) {
    Matrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
    return m;
}

} // namespace

TEST_CASE("attribute matrix layout") {
    const std::vector<Task> one{{0, 0, 100, 10, 5}};
    const Matrix m = attribute_matrix(one);
    CHECK(m.rows() == 1);
    CHECK(m.cols() == 4);
    CHECK(m(0, 0) == 0);
    CHECK(m(0, 1) == 100);
    CHECK(m(0, 2) == 10);
    CHECK(m(0, 3) == 5);
    CHECK(static_cast<std::size_t>(Attribute::duration) == 2);

    const auto inst = [] {
        GeneratorConfig c;
        c.task_count = 37;
        return generate_instance(c);
    }();
    const Matrix big = attribute_matrix(inst.tasks);
    CHECK(big.rows() == 37);
    CHECK(big.cols() == 4);
    for (std::size_t i = 0; i < 37; ++i) CHECK(big(i, 2) == static_cast<double>(inst.tasks[i].duration));
}

TEST_CASE("reciprocal variance weights") {
    SUBCASE("constant column gets no weight") {
        const auto w = rvw_weights(from_rows({{1, 2}, {3, 2}}));
        // Hand evaluation: S_A = sqrt(((1-2)^2 + (3-2)^2) / 1) = sqrt(2), mean 2, y_A = sqrt(2)/2; y_B = 0.
        REQUIRE(w.weights.size() == 2);
        CHECK(std::abs(w.weights[0] - 1.0) <= tol);
        CHECK(std::abs(w.weights[1] - 0.0) <= tol);
    }
    SUBCASE("identical columns share equally") {
        const auto w = rvw_weights(from_rows({{1, 1, 1, 1}, {4, 4, 4, 4}, {9, 9, 9, 9}}));
        for (double x : w.weights) CHECK(std::abs(x - 0.25) <= tol);
    }
    SUBCASE("all columns constant fall back to uniform") {
        const auto w = rvw_weights(from_rows({{3, 7}, {3, 7}}));
        CHECK(std::abs(w.weights[0] - 0.5) <= tol);
        CHECK(std::abs(w.weights[1] - 0.5) <= tol);
    }
    SUBCASE("hand-computed coefficients of variation") {
        // Column A: 2, 4, 6 -> mean 4, S = 2, y = 0.5. Column B: 10, 10, 40 -> mean 20,
        // S = sqrt((100 + 100 + 400) / 2) = sqrt(300), y = sqrt(300) / 20.
        const auto w = rvw_weights(from_rows({{2, 10}, {4, 10}, {6, 40}}));
        const double ya = 0.5;
        const double yb = std::sqrt(300.0) / 20.0;
        CHECK(std::abs(w.weights[0] - ya / (ya + yb)) <= tol);
        CHECK(std::abs(w.weights[1] - yb / (ya + yb)) <= tol);
    }
    SUBCASE("zero-mean column with spread is degenerate") {
        CHECK_THROWS_AS(rvw_weights(from_rows({{-1, 1}, {1, 2}})), DegenerateAttribute);
    }
    SUBCASE("a single row is not enough") { CHECK_THROWS(rvw_weights(from_rows({{1, 2}}))); }
    SUBCASE("weights sum to one on generated data") {
        GeneratorConfig c;
        c.task_count = 300;
        const auto inst = generate_instance(c);
        const auto w = rvw_weights(attribute_matrix(inst.tasks));
        CHECK(std::abs(std::accumulate(w.weights.begin(), w.weights.end(), 0.0) - 1.0) <= tol);
        for (double x : w.weights) CHECK(x >= 0.0);
    }
}

TEST_CASE("weighted distance and task similarity") {
    const AttributeWeights w{{0.5, 0.5, 0.0, 0.0}};
    const std::vector<double> a{1, 2, 100, 7};
    const std::vector<double> b{3, 4, -50, 1};
    // sqrt(0.5 * 4 + 0.5 * 4) = 2, similarity 1 / (1 + 2).
    CHECK(std::abs(weighted_distance(a, b, w) - 2.0) <= tol);
    CHECK(std::abs(weighted_distance(a, a, w)) <= tol);

    const Matrix rows = from_rows({{1, 2, 100, 7}, {3, 4, -50, 1}, {1, 2, 0, 0}});
    const TaskSimilarityMatrix ts = task_similarity_matrix(rows, w);
    CHECK(std::abs(ts(0, 1) - 1.0 / 3.0) <= tol);
    CHECK(std::abs(ts(0, 2) - 1.0) <= tol); // identical on weighted columns
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(ts(i, i) == 1.0);
        for (std::size_t j = 0; j < 3; ++j) CHECK(ts(i, j) == ts(j, i));
    }
}

TEST_CASE("similarity of generated tasks is symmetric with unit diagonal") {
    GeneratorConfig c;
    c.task_count = 80;
    c.seed = 4;
    const auto inst = generate_instance(c);
    const auto ts = build_task_similarity(inst.tasks);
    const auto w = rvw_weights(attribute_matrix(inst.tasks));
    const Matrix m = attribute_matrix(inst.tasks);
    for (std::size_t i = 0; i < ts.size(); ++i) {
        CHECK(ts(i, i) == 1.0);
        for (std::size_t j = 0; j < ts.size(); ++j) {
            CHECK(ts(i, j) == ts(j, i));
            CHECK(ts(i, j) > 0.0);
            CHECK(ts(i, j) <= 1.0);
            // Recompute from the definition.
            double sq = 0.0;
            for (std::size_t k = 0; k < 4; ++k) sq += w.weights[k] * (m(i, k) - m(j, k)) * (m(i, k) - m(j, k));
            CHECK(std::abs(ts(i, j) - 1.0 / (1.0 + std::sqrt(sq))) <= tol);
        }
    }
    CHECK(build_task_similarity(std::vector<Task>{}).size() == 0);
    CHECK(build_task_similarity(std::vector<Task>{{0, 0, 10, 1, 1}}).size() == 1);
}

TEST_CASE("individual similarity") {
    Matrix values(4, 4, 0.0);
    for (std::size_t i = 0; i < 4; ++i) values(i, i) = 1.0;
    values(0, 2) = values(2, 0) = 0.5;
    values(1, 3) = values(3, 1) = 0.25;
    const TaskSimilarityMatrix ts(values);
    const std::vector<TaskId> a{0, 1};
    const std::vector<TaskId> b{2, 3};
    CHECK(std::abs(individual_similarity(a, b, ts) - 0.375) <= tol);
    CHECK(individual_similarity(a, b, ts) == individual_similarity(b, a, ts));
    CHECK(individual_similarity(a, a, ts) == 1.0);
    CHECK_THROWS_AS(individual_similarity(a, std::vector<TaskId>{0}, ts), std::invalid_argument);
    CHECK(individual_similarity(std::vector<TaskId>{}, std::vector<TaskId>{}, ts) == 1.0);
}

TEST_CASE("generation threshold") {
    CHECK(std::abs(generation_threshold(1, 10, 0.8, 0.2) - 0.8) <= tol);
    CHECK(std::abs(generation_threshold(10, 10, 0.8, 0.2) - 0.7) <= tol);
    CHECK(std::abs(generation_threshold(500, 500, 0.61, 0.13) - (0.61 - 0.13 / 2)) <= tol);
    double previous = generation_threshold(1, 50, 0.5, 0.1);
    for (std::size_t x = 2; x <= 50; ++x) {
        const double now = generation_threshold(x, 50, 0.5, 0.1);
        CHECK(now < previous);
        previous = now;
    }
    // Hand evaluation at x = 3, m = 5: exponent -ln2 * 2/4, factor 1 - 2^-0.5.
    CHECK(std::abs(generation_threshold(3, 5, 1.0, 1.0) - (1.0 - (1.0 - 1.0 / std::sqrt(2.0)))) <= tol);
    CHECK_THROWS(generation_threshold(0, 10, 0.5, 0.1));
    CHECK_THROWS(generation_threshold(11, 10, 0.5, 0.1));
    CHECK_THROWS(generation_threshold(1, 1, 0.5, 0.1));
}

TEST_CASE("population similarity statistics") {
    const std::vector<double> three{0.2, 0.4, 0.6};
    const auto s = pair_stats(three);
    CHECK(std::abs(s.ave - 0.4) <= tol);
    CHECK(std::abs(s.std - 0.2) <= tol);
    const std::vector<double> one{0.3};
    CHECK(pair_stats(one).std == 0.0);
    CHECK(std::abs(pair_stats(one).ave - 0.3) <= tol);

    GeneratorConfig c;
    c.task_count = 20;
    const auto inst = generate_instance(c);
    const auto ts = build_task_similarity(inst.tasks);
    std::vector<TaskId> ident(20);
    std::iota(ident.begin(), ident.end(), 0);
    const std::vector<std::vector<TaskId>> same(5, ident);
    const auto st = population_similarity_stats(same, ts);
    CHECK(std::abs(st.ave - 1.0) <= tol);
    CHECK(std::abs(st.std) <= tol);

    std::vector<TaskId> rev(ident.rbegin(), ident.rend());
    const std::vector<std::vector<TaskId>> pair{ident, rev};
    const auto sp = population_similarity_stats(pair, ts);
    CHECK(std::abs(sp.ave - individual_similarity(ident, rev, ts)) <= tol);
    CHECK(sp.std == 0.0);

    // Three individuals: stats of the three pairwise values.
    Rng rng(3);
    std::vector<TaskId> shuffled = ident;
    rng.shuffle(std::span<TaskId>(shuffled));
    const std::vector<std::vector<TaskId>> trio{ident, rev, shuffled};
    const double v1 = individual_similarity(ident, rev, ts);
    const double v2 = individual_similarity(ident, shuffled, ts);
    const double v3 = individual_similarity(rev, shuffled, ts);
    const double mean = (v1 + v2 + v3) / 3.0;
    const double sd = std::sqrt(((v1 - mean) * (v1 - mean) + (v2 - mean) * (v2 - mean) + (v3 - mean) * (v3 - mean)) / 2.0);
    const auto s3 = population_similarity_stats(trio, ts);
    CHECK(std::abs(s3.ave - mean) <= tol);
    CHECK(std::abs(s3.std - sd) <= tol);
    CHECK_THROWS(population_similarity_stats(std::vector<std::vector<TaskId>>{ident}, ts));
}
