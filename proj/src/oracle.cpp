#include "sgnp/oracle.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>
#include <tuple>

#include "sgnp/decoder.hpp"
#include "sgnp/rng.hpp"

namespace sgnp {

namespace {

using PlacementKey = std::tuple<TaskId, WindowId, WindowId, Time>;

class BranchAndBound {
  public:
    explicit BranchAndBound(const Instance& instance) : inst_(instance), ctx_(instance) {
        order_.resize(instance.tasks.size());
        std::iota(order_.begin(), order_.end(), TaskId{0});
        std::stable_sort(order_.begin(), order_.end(), [&](TaskId a, TaskId b) {
            return instance.tasks[static_cast<std::size_t>(a)].profit >
                   instance.tasks[static_cast<std::size_t>(b)].profit;
        });
    }

    OracleResult solve() {
        std::vector<char> used(inst_.tasks.size(), 0);
        std::vector<Placement> path;
        search(DecodeState(ctx_), used, 0.0, path);
        OracleResult r;
        r.optimum = best_;
        r.schedule.placements = best_path_;
        std::vector<char> placed(inst_.tasks.size(), 0);
        for (const auto& p : best_path_) placed[static_cast<std::size_t>(p.task)] = 1;
        for (std::size_t k = 0; k < placed.size(); ++k)
            if (!placed[k]) r.schedule.unscheduled.push_back(static_cast<TaskId>(k));
        r.nodes = nodes_;
        return r;
    }

  private:
    struct Option {
        Placement placement;
        std::size_t piece;
    };

    void search(const DecodeState& state, std::vector<char>& used, double profit, std::vector<Placement>& path) {
        ++nodes_;
        if (profit > best_) {
            best_ = profit;
            best_path_ = path;
        }

        // The same set of placements reached in another order leaves the
        // same pool and timelines behind.
        std::vector<PlacementKey> key;
        key.reserve(path.size());
        for (const auto& p : path) key.emplace_back(p.task, p.window, p.feeding_window.value_or(-1), p.start);
        std::sort(key.begin(), key.end());
        if (!seen_.insert(std::move(key)).second) return;

        std::vector<std::pair<TaskId, std::vector<Option>>> branches;
        double reachable = 0.0;
        for (TaskId id : order_) {
            if (used[static_cast<std::size_t>(id)]) continue;
            const Task& task = inst_.tasks[static_cast<std::size_t>(id)];
            std::vector<Option> options;
            const auto [first, last] = state.candidate_range(task);
            for (std::size_t i = first; i < last; ++i)
                for (PlacementMode mode : {PlacementMode::direct, PlacementMode::feed_switch})
                    if (auto p = state.try_place(task, i, mode)) options.push_back({*p, i});
            if (options.empty()) continue;
            reachable += task.profit;
            branches.emplace_back(id, std::move(options));
        }
        if (profit + reachable <= best_) return;

        for (auto& [id, options] : branches) {
            used[static_cast<std::size_t>(id)] = 1;
            for (const auto& opt : options) {
                DecodeState child = state;
                child.commit(opt.placement, opt.piece);
                path.push_back(opt.placement);
                search(child, used, profit + inst_.tasks[static_cast<std::size_t>(id)].profit, path);
                path.pop_back();
            }
            used[static_cast<std::size_t>(id)] = 0;
        }
    }

    const Instance& inst_;
    DecoderContext ctx_;
    std::vector<TaskId> order_;
    std::set<std::vector<PlacementKey>> seen_;
    double best_ = 0.0;
    std::vector<Placement> best_path_;
    std::uint64_t nodes_ = 0;
};

} // namespace

OracleResult exact_optimum(const Instance& instance) {
    if (instance.tasks.size() > exact_task_limit)
        throw InstanceTooLarge("exact_optimum enumerates task orders and is limited to " +
                               std::to_string(exact_task_limit) + " tasks; this instance has " +
                               std::to_string(instance.tasks.size()) +
                               ". Use the dsga, random or greedy solver for larger instances.");
    return BranchAndBound(instance).solve();
}

SearchResult random_search(const Instance& instance, std::size_t budget, std::uint64_t seed) {
    const DecoderContext ctx(instance);
    Rng rng(seed);
    SearchResult out;
    out.history.reserve(budget);
    std::vector<TaskId> perm(instance.tasks.size());
    bool have = false;
    for (std::size_t b = 0; b < budget; ++b) {
        std::iota(perm.begin(), perm.end(), TaskId{0});
        rng.shuffle(std::span<TaskId>(perm));
        Schedule s = decode(ctx, perm);
        const double f = fitness(instance, s);
        if (!have || f > out.best_fitness) {
            have = true;
            out.best_fitness = f;
            out.best = perm;
            out.schedule = std::move(s);
        }
        out.history.push_back(out.best_fitness);
    }
    return out;
}

std::vector<TaskId> greedy_order(const Instance& instance) {
    std::vector<TaskId> order(instance.tasks.size());
    std::iota(order.begin(), order.end(), TaskId{0});
    std::stable_sort(order.begin(), order.end(), [&](TaskId a, TaskId b) {
        return instance.tasks[static_cast<std::size_t>(a)].profit > instance.tasks[static_cast<std::size_t>(b)].profit;
    });
    return order;
}

Schedule greedy_profit(const Instance& instance) { return decode(instance, greedy_order(instance)); }

} // namespace sgnp
