#include "sgnp/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>
#include <thread>

#include "sgnp/oracle.hpp"

namespace sgnp {

std::string_view algorithm_name(Algorithm a) noexcept {
    switch (a) {
    case Algorithm::dsga: return "dsga";
    case Algorithm::dsga_wa: return "dsga-wa";
    case Algorithm::random: return "random";
    case Algorithm::greedy: return "greedy";
    case Algorithm::oracle: return "oracle";
    }
    return "?";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) noexcept {
    for (Algorithm a : {Algorithm::dsga, Algorithm::dsga_wa, Algorithm::random, Algorithm::greedy, Algorithm::oracle})
        if (algorithm_name(a) == name) return a;
    return std::nullopt;
}

RunRecord run_algorithm(const Instance& instance, Algorithm algorithm, const DsgaConfig& base) {
    RunRecord rec;
    rec.instance = instance.label;
    rec.algorithm = std::string(algorithm_name(algorithm));
    rec.seed = base.seed;
    const std::size_t budget = base.max_evaluations;

    const auto t0 = std::chrono::steady_clock::now();
    switch (algorithm) {
    case Algorithm::dsga:
    case Algorithm::dsga_wa: {
        DsgaConfig cfg = base;
        cfg.adaptive_operators = algorithm == Algorithm::dsga;
        EvolveResult r = evolve(instance, cfg);
        rec.best_fitness = r.best_fitness;
        rec.trace = std::move(r.history);
        rec.schedule = std::move(r.schedule);
        break;
    }
    case Algorithm::random: {
        SearchResult r = random_search(instance, budget, base.seed);
        rec.best_fitness = r.best_fitness;
        rec.trace = std::move(r.history);
        rec.schedule = std::move(r.schedule);
        break;
    }
    case Algorithm::greedy: {
        rec.schedule = greedy_profit(instance);
        rec.best_fitness = fitness(instance, rec.schedule);
        rec.trace.assign(budget, rec.best_fitness);
        break;
    }
    case Algorithm::oracle: {
        OracleResult r = exact_optimum(instance);
        rec.best_fitness = r.optimum;
        rec.schedule = std::move(r.schedule);
        rec.trace.assign(budget, rec.best_fitness);
        break;
    }
    }
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rec.valid = validate_schedule(instance, rec.schedule).ok() && fitness(instance, rec.schedule) == rec.best_fitness;
    return rec;
}

std::vector<SummaryRow> summarize(const std::vector<RunRecord>& records) {
    std::vector<SummaryRow> rows;
    std::vector<std::vector<std::vector<const RunRecord*>>> groups;
    for (const auto& r : records) {
        auto row = std::find_if(rows.begin(), rows.end(), [&](const SummaryRow& s) { return s.instance == r.instance; });
        if (row == rows.end()) {
            rows.push_back({r.instance, {}});
            groups.emplace_back();
            row = rows.end() - 1;
        }
        auto& row_groups = groups[static_cast<std::size_t>(row - rows.begin())];
        auto alg = std::find_if(row->algorithms.begin(), row->algorithms.end(),
                                [&](const AlgorithmSummary& a) { return a.algorithm == r.algorithm; });
        if (alg == row->algorithms.end()) {
            row->algorithms.push_back({r.algorithm});
            row_groups.emplace_back();
            alg = row->algorithms.end() - 1;
        }
        row_groups[static_cast<std::size_t>(alg - row->algorithms.begin())].push_back(&r);
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].algorithms.size(); ++j) {
            const auto& g = groups[i][j];
            AlgorithmSummary& s = rows[i].algorithms[j];
            s.runs = g.size();
            double sum = 0.0, secs = 0.0;
            s.best = g.front()->best_fitness;
            for (const auto* r : g) {
                sum += r->best_fitness;
                secs += r->seconds;
                s.best = std::max(s.best, r->best_fitness);
            }
            const double n = static_cast<double>(g.size());
            s.mean = sum / n;
            s.mean_seconds = secs / n;
            double ss = 0.0;
            for (const auto* r : g) ss += (r->best_fitness - s.mean) * (r->best_fitness - s.mean);
            s.stddev = g.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
        }
    }
    return rows;
}

std::vector<RunRecord> run_suite(const std::vector<SuiteEntry>& instances, const SuiteConfig& config) {
    struct Job {
        const Instance* instance;
        const std::string* name;
        Algorithm algorithm;
        std::uint64_t seed;
    };
    // Records are keyed by instance label; entries whose labels collide are
    // keyed by their path instead so summaries never pool distinct instances.
    std::map<std::string, std::size_t> label_uses;
    for (const auto& entry : instances) ++label_uses[entry.instance.label];
    std::vector<std::string> names;
    names.reserve(instances.size());
    for (const auto& entry : instances)
        names.push_back(label_uses[entry.instance.label] > 1 && !entry.path.empty() ? entry.path
                                                                                   : entry.instance.label);
    std::vector<Job> jobs;
    for (std::size_t k = 0; k < instances.size(); ++k)
        for (Algorithm a : config.algorithms)
            for (std::size_t r = 0; r < config.runs; ++r)
                jobs.push_back({&instances[k].instance, &names[k], a, config.base_seed + r});

    std::vector<RunRecord> records(jobs.size());
    auto work = [&](std::size_t i) {
        DsgaConfig cfg = config.dsga;
        cfg.seed = jobs[i].seed;
        records[i] = run_algorithm(*jobs[i].instance, jobs[i].algorithm, cfg);
        records[i].instance = *jobs[i].name;
    };
    const std::size_t workers = std::min(std::max<std::size_t>(1, config.parallel_runs), jobs.size());
    if (workers <= 1) {
        for (std::size_t i = 0; i < jobs.size(); ++i) work(i);
        return records;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t i = next++; i < jobs.size(); i = next++) work(i);
                } catch (...) {
                    errors[w] = std::current_exception();
                    next = jobs.size();
                }
            });
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return records;
}

namespace {

std::string num(double v) {
    std::ostringstream os;
    os << std::setprecision(10) << v;
    return os.str();
}

} // namespace

std::string summary_csv(const std::vector<SummaryRow>& rows) {
    std::ostringstream os;
    os << "instance,algorithm,runs,best,mean,std,mean_cpu_s\n";
    for (const auto& row : rows)
        for (const auto& a : row.algorithms)
            os << row.instance << ',' << a.algorithm << ',' << a.runs << ',' << num(a.best) << ',' << num(a.mean) << ','
               << num(a.stddev) << ',' << num(a.mean_seconds) << '\n';
    return os.str();
}

std::string runs_csv(const std::vector<RunRecord>& records) {
    std::ostringstream os;
    os << "instance,algorithm,seed,best_fitness,cpu_s,valid\n";
    for (const auto& r : records)
        os << r.instance << ',' << r.algorithm << ',' << r.seed << ',' << num(r.best_fitness) << ',' << num(r.seconds)
           << ',' << (r.valid ? 1 : 0) << '\n';
    return os.str();
}

std::string traces_csv(const std::vector<RunRecord>& records) {
    std::ostringstream os;
    os << "instance,algorithm,seed,evaluation,best_so_far\n";
    for (const auto& r : records)
        for (std::size_t i = 0; i < r.trace.size(); ++i)
            os << r.instance << ',' << r.algorithm << ',' << r.seed << ',' << (i + 1) << ',' << num(r.trace[i]) << '\n';
    return os.str();
}

} // namespace sgnp
