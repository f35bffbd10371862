#include "sgnp/model.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <tuple>

namespace sgnp {

namespace {

std::string indexed(const char* field, std::size_t i) {
    return std::string(field) + "[" + std::to_string(i) + "]";
}

void check_antenna(const Instance& inst, const AntennaRef& ref, bool want_ground,
                   const std::string& path, std::vector<Diagnostic>& out) {
    if (want_ground != ref.is_ground()) {
        out.push_back({path, want_ground ? "expected a ground station antenna"
                                         : "expected a satellite antenna"});
        return;
    }
    if (!want_ground) {
        if (ref.owner < 0 || static_cast<std::size_t>(ref.owner) >= inst.satellites.size()) {
            out.push_back({path + ".satellite", "unknown satellite " + std::to_string(ref.owner)});
            return;
        }
        const auto& sat = inst.satellites[static_cast<std::size_t>(ref.owner)];
        if (ref.antenna < 0 || ref.antenna >= sat.antennas)
            out.push_back({path + ".antenna", "antenna index " + std::to_string(ref.antenna) +
                                                  " outside satellite's " +
                                                  std::to_string(sat.antennas) + " antennas"});
        return;
    }
    if (ref.owner < 0 || static_cast<std::size_t>(ref.owner) >= inst.stations.size()) {
        out.push_back({path + ".station", "unknown ground station " + std::to_string(ref.owner)});
        return;
    }
    const auto& st = inst.stations[static_cast<std::size_t>(ref.owner)];
    if (ref.antenna < 0 || ref.antenna >= st.antennas)
        out.push_back({path + ".antenna", "antenna index " + std::to_string(ref.antenna) +
                                              " outside station's " + std::to_string(st.antennas) +
                                              " antennas"});
    const bool kind_feeding = ref.kind == OwnerKind::feeding_ground_station;
    if (kind_feeding != st.feeding)
        out.push_back({path, "owner kind does not match the station's feeding flag"});
}

void check_window(const Instance& inst, const TimeWindow& w, std::size_t i, const char* field,
                  std::vector<Diagnostic>& out) {
    const auto path = indexed(field, i);
    if (w.id != static_cast<WindowId>(i))
        out.push_back({path + ".id", "window ids must equal their position"});
    if (w.start >= w.end) out.push_back({path, "window start must precede its end"});
    if (w.start < inst.horizon_start || w.end > inst.horizon_end)
        out.push_back({path, "window lies outside the horizon"});
    check_antenna(inst, w.satellite_antenna, false, path + ".satellite_antenna", out);
    check_antenna(inst, w.ground_antenna, true, path + ".ground_antenna", out);
}

} // namespace

double Instance::total_profit() const noexcept {
    return std::accumulate(tasks.begin(), tasks.end(), 0.0,
                           [](double acc, const Task& t) { return acc + t.profit; });
}

std::vector<Diagnostic> check_instance(const Instance& inst) {
    std::vector<Diagnostic> out;
    if (inst.horizon_end <= inst.horizon_start)
        out.push_back({"horizon", "horizon end must be after its start"});

    const TimingParams& tp = inst.timing;
    if (tp.alpha < 0) out.push_back({"timing.alpha", "must be non-negative"});
    if (tp.beta < 0) out.push_back({"timing.beta", "must be non-negative"});
    if (tp.gamma < 0) out.push_back({"timing.gamma", "must be non-negative"});

    for (std::size_t i = 0; i < inst.satellites.size(); ++i) {
        const auto& s = inst.satellites[i];
        if (s.id != static_cast<std::int32_t>(i))
            out.push_back({indexed("satellites", i) + ".id", "satellite ids must equal their position"});
        if (s.antennas < 1)
            out.push_back({indexed("satellites", i) + ".antennas", "at least one antenna required"});
    }
    for (std::size_t i = 0; i < inst.stations.size(); ++i) {
        const auto& g = inst.stations[i];
        if (g.id != static_cast<std::int32_t>(i))
            out.push_back({indexed("ground_stations", i) + ".id", "station ids must equal their position"});
        if (g.antennas < 1)
            out.push_back({indexed("ground_stations", i) + ".antennas", "at least one antenna required"});
    }

    for (std::size_t i = 0; i < inst.tasks.size(); ++i) {
        const auto& t = inst.tasks[i];
        const auto path = indexed("tasks", i);
        if (t.id != static_cast<TaskId>(i)) out.push_back({path + ".id", "task ids must equal their position"});
        if (t.duration <= 0) out.push_back({path + ".duration", "task " + std::to_string(t.id) + ": duration must be positive"});
        if (!(t.profit >= 0.0)) out.push_back({path + ".profit", "task " + std::to_string(t.id) + ": profit must be non-negative"});
        if (t.est + t.duration > t.let)
            out.push_back({path + ".let", "task " + std::to_string(t.id) +
                                              " cannot fit: est + duration exceeds let"});
    }

    for (std::size_t i = 0; i < inst.windows.size(); ++i)
        check_window(inst, inst.windows[i], i, "windows", out);
    for (std::size_t i = 0; i < inst.feeding_windows.size(); ++i) {
        const auto& w = inst.feeding_windows[i];
        check_window(inst, w, i, "feeding_windows", out);
        if (w.ground_antenna.kind != OwnerKind::feeding_ground_station)
            out.push_back({indexed("feeding_windows", i) + ".ground_antenna",
                           "feeding window must use an antenna of a feeding station"});
    }
    return out;
}

bool ValidationReport::has(int constraint_number) const noexcept {
    return std::any_of(violations.begin(), violations.end(),
                       [&](const Violation& v) { return v.constraint == constraint_number; });
}

double fitness(const Instance& instance, const Schedule& schedule) {
    double total = 0.0;
    for (const auto& p : schedule.placements) {
        if (p.task < 0 || static_cast<std::size_t>(p.task) >= instance.tasks.size())
            throw MalformedSchedule("placement refers to unknown task " + std::to_string(p.task));
        total += instance.tasks[static_cast<std::size_t>(p.task)].profit;
    }
    return total;
}

BusyInterval visible_leg(const Instance& instance, const Placement& p) {
    if (!p.feed_switch()) return {p.start, p.end};
    return {p.start, instance.windows[static_cast<std::size_t>(p.window)].end};
}

BusyInterval feeding_leg(const Instance& instance, const Placement& p) {
    const auto& f = instance.feeding_windows[static_cast<std::size_t>(*p.feeding_window)];
    return {std::max(p.start, f.start), p.end};
}

ResourceIndex::ResourceIndex(const Instance& instance) {
    sat_offset_.reserve(instance.satellites.size());
    for (const auto& s : instance.satellites) {
        sat_offset_.push_back(sat_antenna_total_);
        sat_antenna_total_ += static_cast<std::size_t>(s.antennas);
    }
    station_offset_.reserve(instance.stations.size());
    for (const auto& g : instance.stations) {
        station_offset_.push_back(ground_antenna_total_);
        ground_antenna_total_ += static_cast<std::size_t>(g.antennas);
    }
}

std::size_t ResourceIndex::satellite_antenna(const AntennaRef& ref) const {
    return sat_offset_.at(static_cast<std::size_t>(ref.owner)) + static_cast<std::size_t>(ref.antenna);
}

std::size_t ResourceIndex::ground_antenna(const AntennaRef& ref) const {
    return station_offset_.at(static_cast<std::size_t>(ref.owner)) + static_cast<std::size_t>(ref.antenna);
}

namespace {

struct Leg {
    TaskId task;
    BusyInterval busy;
};

// Pairwise check of every leg on one resource; reports each incompatible pair once.
void check_resource(std::vector<Leg>& legs, Duration gap, int number, const char* what,
                    std::vector<Violation>& out) {
    std::sort(legs.begin(), legs.end(), [](const Leg& a, const Leg& b) {
        return std::tie(a.busy.start, a.busy.end, a.task) < std::tie(b.busy.start, b.busy.end, b.task);
    });
    for (std::size_t i = 0; i < legs.size(); ++i) {
        for (std::size_t j = i + 1; j < legs.size(); ++j) {
            if (legs[j].busy.start >= legs[i].busy.end + gap) break;
            if (legs[i].task == legs[j].task) continue;
            if (compatible(legs[i].busy, legs[j].busy, gap)) continue;
            std::ostringstream msg;
            msg << what << ": [" << legs[i].busy.start << "," << legs[i].busy.end << "] and ["
                << legs[j].busy.start << "," << legs[j].busy.end << "] need separation " << gap;
            out.push_back({number, {legs[i].task, legs[j].task}, msg.str()});
        }
    }
}

} // namespace

ValidationReport validate_schedule(const Instance& inst, const Schedule& schedule) {
    ValidationReport report;
    auto& out = report.violations;
    const ResourceIndex index(inst);

    // Structural preconditions first; these are caller errors, not violations.
    for (const auto& p : schedule.placements) {
        if (p.task < 0 || static_cast<std::size_t>(p.task) >= inst.tasks.size())
            throw MalformedSchedule("placement refers to unknown task " + std::to_string(p.task));
        if (p.window < 0 || static_cast<std::size_t>(p.window) >= inst.windows.size())
            throw MalformedSchedule("task " + std::to_string(p.task) + " refers to unknown window " +
                                    std::to_string(p.window));
        if (p.feeding_window && (*p.feeding_window < 0 ||
                                 static_cast<std::size_t>(*p.feeding_window) >= inst.feeding_windows.size()))
            throw MalformedSchedule("task " + std::to_string(p.task) + " refers to unknown feeding window " +
                                    std::to_string(*p.feeding_window));
        if (p.end != p.start + inst.tasks[static_cast<std::size_t>(p.task)].duration)
            throw MalformedSchedule("task " + std::to_string(p.task) + ": end is not start + duration");
    }
    for (TaskId id : schedule.unscheduled)
        if (id < 0 || static_cast<std::size_t>(id) >= inst.tasks.size())
            throw MalformedSchedule("unscheduled list refers to unknown task " + std::to_string(id));

    std::vector<int> seen(inst.tasks.size(), 0);
    for (const auto& p : schedule.placements) ++seen[static_cast<std::size_t>(p.task)];
    for (TaskId id : schedule.unscheduled) ++seen[static_cast<std::size_t>(id)];
    for (std::size_t k = 0; k < seen.size(); ++k)
        if (seen[k] > 1)
            out.push_back({constraint::execute_once, {static_cast<std::int64_t>(k)},
                           "task appears " + std::to_string(seen[k]) + " times"});

    std::vector<std::vector<Leg>> sat_antenna(index.satellite_antenna_count());
    std::vector<std::vector<Leg>> ground_antenna(index.ground_antenna_count());
    std::vector<std::vector<Leg>> satellite(inst.satellites.size());
    std::vector<std::vector<Leg>> station(inst.stations.size());

    for (const auto& p : schedule.placements) {
        const Task& t = inst.tasks[static_cast<std::size_t>(p.task)];
        const VisibleWindow& w = inst.windows[static_cast<std::size_t>(p.window)];
        const std::vector<std::int64_t> who{p.task};

        if (p.start < t.est) out.push_back({constraint::earliest_start, who, "starts before est"});
        if (p.end > t.let) out.push_back({constraint::latest_end, who, "ends after let"});
        if (p.start >= t.let) out.push_back({constraint::start_before_let, who, "starts at or after let"});
        if (p.start < w.start) out.push_back({constraint::window_start, who, "starts before its window"});

        if (!p.feed_switch()) {
            if (p.start > w.end) out.push_back({constraint::window_start, who, "starts after its window"});
            if (p.end > w.end) out.push_back({constraint::window_end, who, "ends after its window"});
        } else {
            const FeedingWindow& f = inst.feeding_windows[static_cast<std::size_t>(*p.feeding_window)];
            if (p.start >= w.end)
                out.push_back({constraint::window_start, who, "feed-switched task starts after its window"});
            if (f.satellite_antenna != w.satellite_antenna)
                out.push_back({constraint::feed_end, who, "feeding window uses another satellite antenna"});
            if (feed_overlap(w, f) < inst.timing.beta)
                out.push_back({constraint::feed_overlap, {w.id, f.id},
                               "window overlap " + std::to_string(feed_overlap(w, f)) + " below beta " +
                                   std::to_string(inst.timing.beta)});
            if (p.end < w.end || p.end > f.end)
                out.push_back({constraint::feed_end, who, "feed-switched end outside [VTW.end, FVTW.end]"});

            const BusyInterval feed = feeding_leg(inst, p);
            ground_antenna[index.ground_antenna(f.ground_antenna)].push_back({p.task, feed});
            station[static_cast<std::size_t>(f.ground_antenna.owner)].push_back({p.task, feed});
            if (f.ground_antenna.owner == w.ground_antenna.owner &&
                !compatible(visible_leg(inst, p), feed, 0))
                out.push_back({constraint::station_busy, who, "both legs on one station overlap"});
        }

        const BusyInterval task_span{p.start, p.end};
        const BusyInterval ground = visible_leg(inst, p);
        sat_antenna[index.satellite_antenna(w.satellite_antenna)].push_back({p.task, task_span});
        satellite[static_cast<std::size_t>(w.satellite_antenna.owner)].push_back({p.task, task_span});
        ground_antenna[index.ground_antenna(w.ground_antenna)].push_back({p.task, ground});
        station[static_cast<std::size_t>(w.ground_antenna.owner)].push_back({p.task, ground});
    }

    for (auto& legs : sat_antenna)
        check_resource(legs, inst.timing.alpha, constraint::satellite_gap, "satellite antenna", out);
    for (auto& legs : ground_antenna)
        check_resource(legs, inst.timing.gamma, constraint::ground_gap, "ground antenna", out);
    for (auto& legs : satellite)
        check_resource(legs, 0, constraint::satellite_busy, "satellite", out);
    for (auto& legs : station)
        check_resource(legs, 0, constraint::station_busy, "ground station", out);
    return report;
}

} // namespace sgnp
