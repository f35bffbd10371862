// sgnp: generate, solve, benchmark and validate ground network plans.

#include <CLI11.hpp>

#include <cstdlib>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sgnp/bench.hpp"
#include "sgnp/dsga.hpp"
#include "sgnp/instance_io.hpp"
#include "sgnp/model.hpp"
#include "sgnp/oracle.hpp"

namespace fs = std::filesystem;

namespace {

constexpr const char* out_dir_env = "SGNP_OUT_DIR";

std::string default_out_dir() {
    const char* env = std::getenv(out_dir_env);
    return env && *env ? std::string(env) : std::string(".");
}

std::string join(const fs::path& dir, const std::string& name) { return (dir / name).string(); }

void ensure_dir(const std::string& dir) {
    if (!dir.empty()) fs::create_directories(dir);
}

// Failures that map to a specific exit code with a one-line message.
struct CliFailure {
    int code;
    std::string message;
};

sgnp::Instance read_instance(const std::string& path) {
    std::string text;
    try {
        text = sgnp::read_file(path);
    } catch (const std::exception& e) {
        throw CliFailure{1, "cannot read instance '" + path + "': " + e.what()};
    }
    try {
        return sgnp::load_instance(text);
    } catch (const sgnp::FormatError& e) {
        throw CliFailure{1, path + ": " + e.what()};
    }
}

struct GenerateArgs {
    std::int32_t tasks = 100;
    std::uint64_t seed = 1;
    std::int32_t index = 1;
    std::string config;
    std::string out;
};

int cmd_generate(const GenerateArgs& a, bool tasks_set, bool seed_set, bool index_set) {
    sgnp::GeneratorConfig cfg;
    if (!a.config.empty()) cfg = sgnp::load_config(sgnp::read_file(a.config));
    if (tasks_set || a.config.empty()) cfg.task_count = a.tasks;
    if (seed_set || a.config.empty()) cfg.seed = a.seed;
    if (index_set || a.config.empty()) cfg.label_index = a.index;
    if (const auto diags = sgnp::check_config(cfg); !diags.empty()) {
        for (const auto& d : diags) std::cerr << "config: " << d.path << ": " << d.message << '\n';
        return 2;
    }
    const sgnp::Instance inst = sgnp::generate_instance(cfg);
    ensure_dir(a.out);
    const std::string path = join(a.out, inst.label + ".json");
    sgnp::write_file_atomic(path, sgnp::save_instance(inst));
    const auto diags = sgnp::check_instance(inst);
    std::cout << path << ": " << inst.tasks.size() << " tasks, " << inst.windows.size() << " visible windows, "
              << inst.feeding_windows.size() << " feeding windows, total profit " << inst.total_profit() << ", "
              << diags.size() << " diagnostics\n";
    return diags.empty() ? 0 : 1;
}

struct SolveArgs {
    std::string instance;
    std::string algo = "dsga";
    std::uint64_t seed = 1;
    std::size_t evals = 5000;
    std::size_t pop = 10;
    std::size_t threads = 1;
    std::string out;
    std::string plan;
};

sgnp::Algorithm parse_algo_or_fail(const std::string& name) {
    if (auto a = sgnp::parse_algorithm(name)) return *a;
    throw CliFailure{2, "unknown algorithm '" + name + "' (expected dsga, dsga-wa, random, greedy or oracle)"};
}

sgnp::RunRecord run_or_fail(const sgnp::Instance& inst, sgnp::Algorithm algo, const sgnp::DsgaConfig& cfg) {
    try {
        return sgnp::run_algorithm(inst, algo, cfg);
    } catch (const sgnp::InstanceTooLarge& e) {
        throw CliFailure{3, e.what()};
    } catch (const std::invalid_argument& e) {
        throw CliFailure{2, e.what()};
    }
}

int cmd_solve(const SolveArgs& a) {
    const sgnp::Algorithm algo = parse_algo_or_fail(a.algo);
    const sgnp::Instance inst = read_instance(a.instance);
    sgnp::DsgaConfig cfg;
    cfg.seed = a.seed;
    cfg.max_evaluations = a.evals;
    cfg.population_size = a.pop;
    cfg.threads = a.threads;
    const sgnp::RunRecord rec = run_or_fail(inst, algo, cfg);

    std::string plan = a.plan;
    if (plan.empty()) {
        ensure_dir(a.out);
        plan = join(a.out, inst.label + "." + rec.algorithm + ".plan.json");
    }
    sgnp::write_file_atomic(plan, sgnp::save_schedule(inst, rec.schedule));
    sgnp::write_file_atomic(plan + ".metrics.csv", sgnp::runs_csv({rec}));
    std::cout << "instance " << inst.label << ", algorithm " << rec.algorithm << ", seed " << rec.seed
              << ": profit " << rec.best_fitness << " of " << inst.total_profit() << ", "
              << rec.schedule.placements.size() << "/" << inst.tasks.size() << " tasks, " << rec.seconds << " s, "
              << (rec.valid ? "valid" : "INVALID") << "\n"
              << "plan written to " << plan << '\n';
    return rec.valid ? 0 : 1;
}

struct BenchArgs {
    std::vector<std::string> instances;
    std::vector<std::string> algos;
    std::size_t runs = 10;
    std::uint64_t seed = 1;
    std::size_t evals = 5000;
    std::size_t pop = 10;
    std::size_t jobs = 1;
    std::string config;
    std::string out;
};

// Suite file: {"instances": [...], "algorithms": [...], "runs", "seed", "evals", "pop", "jobs"}.
// Relative instance paths are resolved against the suite file's directory.
void apply_suite_file(BenchArgs& a, const std::string& path, const CLI::App& app) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(sgnp::read_file(path));
    } catch (const std::exception& e) {
        throw CliFailure{2, "suite '" + path + "': " + e.what()};
    }
    const fs::path base = fs::path(path).parent_path();
    try {
        if (a.instances.empty() && doc.contains("instances"))
            for (const auto& p : doc.at("instances")) {
                fs::path ip = p.get<std::string>();
                a.instances.push_back((ip.is_absolute() ? ip : base / ip).string());
            }
        if (a.algos.empty() && doc.contains("algorithms")) a.algos = doc.at("algorithms").get<std::vector<std::string>>();
        auto take = [&](const char* key, const char* flag, auto& field) {
            if (doc.contains(key) && app.count(flag) == 0) field = doc.at(key).get<std::decay_t<decltype(field)>>();
        };
        take("runs", "--runs", a.runs);
        take("seed", "--seed", a.seed);
        take("evals", "--evals", a.evals);
        take("pop", "--pop", a.pop);
        take("jobs", "--jobs", a.jobs);
    } catch (const nlohmann::json::exception& e) {
        throw CliFailure{2, "suite '" + path + "': " + e.what()};
    }
}

int cmd_bench(BenchArgs a, const CLI::App& app) {
    if (!a.config.empty()) apply_suite_file(a, a.config, app);
    if (a.instances.empty()) throw CliFailure{2, "bench needs at least one instance (--instance or a suite file)"};
    if (a.algos.empty()) a.algos = {"dsga"};

    sgnp::SuiteConfig suite;
    suite.algorithms.clear();
    for (const auto& name : a.algos) suite.algorithms.push_back(parse_algo_or_fail(name));
    suite.runs = a.runs;
    suite.base_seed = a.seed;
    suite.dsga.max_evaluations = a.evals;
    suite.dsga.population_size = a.pop;
    suite.parallel_runs = a.jobs;

    std::vector<sgnp::SuiteEntry> entries;
    for (const auto& path : a.instances) {
        if (!fs::exists(path)) throw CliFailure{1, "suite references missing instance file '" + path + "'"};
        entries.push_back({path, read_instance(path)});
    }
    std::vector<sgnp::RunRecord> records;
    try {
        records = sgnp::run_suite(entries, suite);
    } catch (const sgnp::InstanceTooLarge& e) {
        throw CliFailure{3, e.what()};
    } catch (const std::invalid_argument& e) {
        throw CliFailure{2, e.what()};
    }
    const auto rows = sgnp::summarize(records);
    ensure_dir(a.out);
    const std::string summary = sgnp::summary_csv(rows);
    sgnp::write_file_atomic(join(a.out, "summary.csv"), summary);
    sgnp::write_file_atomic(join(a.out, "runs.csv"), sgnp::runs_csv(records));
    sgnp::write_file_atomic(join(a.out, "traces.csv"), sgnp::traces_csv(records));
    std::cout << summary << "wrote summary.csv, runs.csv, traces.csv to " << (a.out.empty() ? "." : a.out) << '\n';

    bool all_valid = true;
    for (const auto& r : records)
        if (!r.valid) {
            all_valid = false;
            std::cerr << "run " << r.instance << "/" << r.algorithm << "/" << r.seed << " produced an invalid plan\n";
        }
    return all_valid ? 0 : 1;
}

struct ValidateArgs {
    std::string instance;
    std::string plan;
};

int cmd_validate(const ValidateArgs& a) {
    std::string text;
    try {
        text = sgnp::read_file(a.instance);
    } catch (const std::exception& e) {
        throw CliFailure{1, "cannot read instance '" + a.instance + "': " + e.what()};
    }
    sgnp::Instance inst;
    try {
        inst = sgnp::load_instance(text);
    } catch (const sgnp::FormatError& e) {
        std::cout << a.instance << ": invalid: " << e.what() << '\n';
        return 1;
    }
    std::cout << a.instance << ": ok (" << inst.tasks.size() << " tasks)\n";
    if (a.plan.empty()) return 0;

    sgnp::Schedule schedule;
    try {
        schedule = sgnp::load_schedule(sgnp::read_file(a.plan));
    } catch (const std::exception& e) {
        std::cout << a.plan << ": invalid: " << e.what() << '\n';
        return 1;
    }
    try {
        const auto report = sgnp::validate_schedule(inst, schedule);
        for (const auto& v : report.violations) {
            std::cout << "constraint " << v.constraint << " ids";
            for (auto id : v.ids) std::cout << ' ' << id;
            std::cout << ": " << v.detail << '\n';
        }
        std::cout << a.plan << ": " << (report.ok() ? "feasible" : "infeasible") << ", profit "
                  << sgnp::fitness(inst, schedule) << ", " << report.violations.size() << " violations\n";
        return report.ok() ? 0 : 1;
    } catch (const sgnp::MalformedSchedule& e) {
        std::cout << a.plan << ": malformed: " << e.what() << '\n';
        return 1;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Satellite ground network planning with feed switching.\n"
                 "Output directory defaults to $" +
                 std::string(out_dir_env) + " or the current directory."};
    app.require_subcommand(1);
    const std::string out_default = default_out_dir();

    GenerateArgs gen;
    gen.out = out_default;
    auto* g = app.add_subcommand("generate", "Write a random instance file named <tasks>-<index>.json");
    g->add_option("--tasks", gen.tasks, "Number of tasks")->check(CLI::NonNegativeNumber)->capture_default_str();
    g->add_option("--seed", gen.seed, "Generator seed")->capture_default_str();
    g->add_option("--index", gen.index, "Running index B of the A-B label")->check(CLI::PositiveNumber)->capture_default_str();
    g->add_option("--config", gen.config, "Generator config file (JSON); flags given explicitly override it")
        ->check(CLI::ExistingFile);
    g->add_option("--out", gen.out, "Output directory")->capture_default_str();

    SolveArgs solve;
    solve.out = out_default;
    auto* s = app.add_subcommand("solve", "Solve one instance and write the plan plus a metrics record");
    s->add_option("--instance", solve.instance, "Instance file")->required();
    s->add_option("--algo", solve.algo, "dsga | dsga-wa | random | greedy | oracle")->capture_default_str();
    s->add_option("--seed", solve.seed, "Solver seed")->capture_default_str();
    s->add_option("--evals", solve.evals, "Evaluation budget")->check(CLI::PositiveNumber)->capture_default_str();
    s->add_option("--pop", solve.pop, "Population size")->check(CLI::Range(2, 1'000'000))->capture_default_str();
    s->add_option("--threads", solve.threads, "Decode threads (results do not depend on it)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    s->add_option("--out", solve.out, "Output directory for <label>.<algo>.plan.json")->capture_default_str();
    s->add_option("--plan", solve.plan, "Explicit plan file path (overrides --out)");

    BenchArgs bench;
    bench.out = out_default;
    auto* b = app.add_subcommand("bench", "Repeated seeded runs; writes summary.csv, runs.csv and traces.csv");
    b->add_option("--instance", bench.instances, "Instance file (repeatable)");
    b->add_option("--algo", bench.algos, "Algorithm (repeatable), default dsga");
    b->add_option("--runs", bench.runs, "Runs per instance and algorithm")->check(CLI::PositiveNumber)->capture_default_str();
    b->add_option("--seed", bench.seed, "Base seed; run r uses seed + r")->capture_default_str();
    b->add_option("--evals", bench.evals, "Evaluation budget per run")->check(CLI::PositiveNumber)->capture_default_str();
    b->add_option("--pop", bench.pop, "Population size")->check(CLI::Range(2, 1'000'000))->capture_default_str();
    b->add_option("--jobs", bench.jobs, "Runs executed in parallel")->check(CLI::PositiveNumber)->capture_default_str();
    b->add_option("--config", bench.config, "Suite file (JSON) with instances, algorithms, runs, seed, evals, pop, jobs")
        ->check(CLI::ExistingFile);
    b->add_option("--out", bench.out, "Output directory")->capture_default_str();

    ValidateArgs val;
    auto* v = app.add_subcommand("validate", "Check an instance file and optionally a plan against it");
    v->add_option("--instance", val.instance, "Instance file")->required();
    v->add_option("--plan", val.plan, "Plan file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (g->parsed()) return cmd_generate(gen, g->count("--tasks") > 0, g->count("--seed") > 0, g->count("--index") > 0);
        if (s->parsed()) return cmd_solve(solve);
        if (b->parsed()) return cmd_bench(bench, *b);
        if (v->parsed()) return cmd_validate(val);
    } catch (const CliFailure& f) {
        std::cerr << "error: " << f.message << '\n';
        return f.code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
