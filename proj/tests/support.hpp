#pragma once

// Shared helpers for the test executables: a small instance builder and an
// independent, deliberately naive feasibility checker used as a second
// opinion next to validate_schedule.

#include <algorithm>
#include <cstdint>
#include <set>
#include <vector>

#include "sgnp/instance_io.hpp"
#include "sgnp/model.hpp"
#include "sgnp/rng.hpp"

namespace sgnp::testing {

/// Builds hand-made instances. Satellites and stations get ids in call order.
class Builder {
  public:
    Builder() {
        inst_.label = "hand";
        inst_.horizon_start = 0;
        inst_.horizon_end = 10'000;
        inst_.timing = {0, 0, 0};
    }

    Builder& horizon(Time end) {
        inst_.horizon_end = end;
        return *this;
    }
    Builder& timing(Duration alpha, Duration beta, Duration gamma) {
        inst_.timing = {alpha, beta, gamma};
        return *this;
    }
    std::int32_t satellite(std::int32_t antennas = 1) {
        const auto id = static_cast<std::int32_t>(inst_.satellites.size());
        inst_.satellites.push_back({id, antennas});
        return id;
    }
    std::int32_t station(std::int32_t antennas = 1, bool feeding = false) {
        const auto id = static_cast<std::int32_t>(inst_.stations.size());
        inst_.stations.push_back({id, antennas, feeding});
        return id;
    }
    TaskId task(Time est, Time let, Duration d, double profit) {
        const auto id = static_cast<TaskId>(inst_.tasks.size());
        inst_.tasks.push_back({id, est, let, d, profit});
        return id;
    }
    WindowId window(std::int32_t sat, std::int32_t sat_antenna, std::int32_t station, std::int32_t station_antenna,
                    Time start, Time end) {
        const auto id = static_cast<WindowId>(inst_.windows.size());
        inst_.windows.push_back({id, {OwnerKind::satellite, sat, sat_antenna}, ground(station, station_antenna),
                                 start, end});
        return id;
    }
    WindowId feeding_window(std::int32_t sat, std::int32_t sat_antenna, std::int32_t station,
                            std::int32_t station_antenna, Time start, Time end) {
        const auto id = static_cast<WindowId>(inst_.feeding_windows.size());
        inst_.feeding_windows.push_back({id, {OwnerKind::satellite, sat, sat_antenna},
                                         ground(station, station_antenna), start, end});
        return id;
    }

    const Instance& get() const { return inst_; }
    Instance build() const { return inst_; }

  private:
    AntennaRef ground(std::int32_t station, std::int32_t antenna) const {
        const bool feeding = inst_.stations.at(static_cast<std::size_t>(station)).feeding;
        return {feeding ? OwnerKind::feeding_ground_station : OwnerKind::ground_station, station, antenna};
    }
    Instance inst_;
};

/// Small, crowded generated instance: a 3000 s horizon with short windows,
/// topology and timing varied by seed.
inline Instance crowded_instance(std::uint64_t seed, std::int32_t tasks) {
    Rng knobs(seed ^ 0x5eedULL);
    GeneratorConfig c;
    c.task_count = tasks;
    c.seed = seed;
    c.satellite_count = static_cast<std::int32_t>(knobs.uniform_int(1, 3));
    c.antennas_per_satellite = static_cast<std::int32_t>(knobs.uniform_int(1, 2));
    c.station_count = static_cast<std::int32_t>(knobs.uniform_int(1, 2));
    c.antennas_per_station = static_cast<std::int32_t>(knobs.uniform_int(1, 2));
    c.feeding_station_count = static_cast<std::int32_t>(knobs.uniform_int(0, 1));
    c.horizon_length = 3000;
    c.window_length = {60, 300};
    c.window_gap = {100, 600};
    c.feed_overlap_probability = 0.7;
    c.timing = {knobs.uniform_int(0, 60), knobs.uniform_int(0, 40), knobs.uniform_int(0, 60)};
    return generate_instance(c);
}

/// Constraint numbers violated by a schedule, computed from first principles
/// with a plain all-pairs scan. Shares no code with validate_schedule.
inline std::set<int> naive_violations(const Instance& inst, const Schedule& s) {
    std::set<int> out;
    struct Use {
        TaskId task;
        std::int64_t key;   // resource identity
        Time from, to;
    };
    std::vector<Use> sat_ant, gnd_ant, sat, sta;
    auto sat_key = [](const AntennaRef& r) { return std::int64_t{r.owner} * 1000 + r.antenna; };
    auto gnd_key = [](const AntennaRef& r) { return std::int64_t{r.owner} * 1000 + r.antenna; };

    std::vector<int> count(inst.tasks.size(), 0);
    for (const auto& p : s.placements) {
        ++count[static_cast<std::size_t>(p.task)];
        const Task& t = inst.tasks[static_cast<std::size_t>(p.task)];
        const TimeWindow& w = inst.windows[static_cast<std::size_t>(p.window)];
        if (p.end > t.let) out.insert(2);
        if (p.start < t.est) out.insert(5);
        if (p.start >= t.let) out.insert(6);
        if (p.start < w.start) out.insert(3);
        sat_ant.push_back({p.task, sat_key(w.satellite_antenna), p.start, p.end});
        sat.push_back({p.task, w.satellite_antenna.owner, p.start, p.end});
        if (!p.feeding_window) {
            if (p.start > w.end) out.insert(3);
            if (p.end > w.end) out.insert(4);
            gnd_ant.push_back({p.task, gnd_key(w.ground_antenna), p.start, p.end});
            sta.push_back({p.task, w.ground_antenna.owner, p.start, p.end});
        } else {
            const TimeWindow& f = inst.feeding_windows[static_cast<std::size_t>(*p.feeding_window)];
            if (p.start >= w.end) out.insert(3);
            if (w.end - f.start < inst.timing.beta) out.insert(11);
            if (p.end < w.end || p.end > f.end || !(f.satellite_antenna == w.satellite_antenna)) out.insert(12);
            const Time feed_from = std::max(p.start, f.start);
            gnd_ant.push_back({p.task, gnd_key(w.ground_antenna), p.start, w.end});
            gnd_ant.push_back({p.task, gnd_key(f.ground_antenna), feed_from, p.end});
            if (w.ground_antenna.owner == f.ground_antenna.owner) {
                if (!(w.end <= feed_from || p.end <= p.start)) out.insert(10);
            }
            sta.push_back({p.task, w.ground_antenna.owner, p.start, w.end});
            sta.push_back({p.task, f.ground_antenna.owner, feed_from, p.end});
        }
    }
    for (int c : count)
        if (c > 1) out.insert(13);
    for (TaskId u : s.unscheduled)
        if (count[static_cast<std::size_t>(u)] > 0) out.insert(13);

    auto scan = [&](const std::vector<Use>& uses, Duration gap, int number) {
        for (std::size_t i = 0; i < uses.size(); ++i)
            for (std::size_t j = i + 1; j < uses.size(); ++j) {
                const Use& a = uses[i];
                const Use& b = uses[j];
                if (a.key != b.key || a.task == b.task) continue;
                const bool apart = a.to + gap <= b.from || b.to + gap <= a.from;
                if (!apart) out.insert(number);
            }
    };
    scan(sat_ant, inst.timing.alpha, 7);
    scan(gnd_ant, inst.timing.gamma, 8);
    scan(sat, 0, 9);
    scan(sta, 0, 10);
    return out;
}

} // namespace sgnp::testing
