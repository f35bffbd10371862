#pragma once

/// @file model.hpp
/// @brief Domain types for ground network planning with feed switching,
/// the profit objective and the schedule feasibility checker.
///
/// Time is integer seconds measured from the horizon start. Every entity list
/// in an Instance is indexed by id: satellite, station, task and window ids are
/// their positions in the respective vector.

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sgnp {

using Time = std::int64_t;
using Duration = std::int64_t;
using TaskId = std::int32_t;
using WindowId = std::int32_t;

/// Global timing parameters.
struct TimingParams {
    Duration alpha = 60; ///< satellite antenna attitude adjustment time
    Duration beta = 30;  ///< minimum VTW/FVTW overlap needed to feed-switch
    Duration gamma = 30; ///< ground antenna task-switch interval

    bool operator==(const TimingParams&) const = default;
};

enum class OwnerKind : std::uint8_t { satellite, ground_station, feeding_ground_station };

struct AntennaRef {
    OwnerKind kind = OwnerKind::satellite;
    std::int32_t owner = 0;
    std::int32_t antenna = 0;

    bool is_ground() const noexcept { return kind != OwnerKind::satellite; }
    auto operator<=>(const AntennaRef&) const = default;
};

struct Task {
    TaskId id = 0;
    Time est = 0;          ///< earliest allowed start
    Time let = 0;          ///< latest allowed end
    Duration duration = 1;
    double profit = 0.0;

    bool operator==(const Task&) const = default;
};

/// Satellite-to-ground visibility. Also used for feeding windows, whose ground
/// antenna sits on a feeding station.
struct TimeWindow {
    WindowId id = 0;
    AntennaRef satellite_antenna;
    AntennaRef ground_antenna;
    Time start = 0;
    Time end = 0;

    Duration length() const noexcept { return end - start; }
    bool operator==(const TimeWindow&) const = default;
};

using VisibleWindow = TimeWindow;
using FeedingWindow = TimeWindow;

struct Satellite {
    std::int32_t id = 0;
    std::int32_t antennas = 1;
    bool operator==(const Satellite&) const = default;
};

struct GroundStation {
    std::int32_t id = 0;
    std::int32_t antennas = 1;
    bool feeding = false;
    bool operator==(const GroundStation&) const = default;
};

struct Instance {
    std::string label;
    Time horizon_start = 0;
    Time horizon_end = 0;
    TimingParams timing;
    std::vector<Satellite> satellites;
    std::vector<GroundStation> stations;
    std::vector<Task> tasks;
    std::vector<VisibleWindow> windows;
    std::vector<FeedingWindow> feeding_windows;

    std::size_t task_count() const noexcept { return tasks.size(); }
    double total_profit() const noexcept;
    bool operator==(const Instance&) const = default;
};

/// One structural problem found in an instance, located by a field path such
/// as `tasks[3].let`.
struct Diagnostic {
    std::string path;
    std::string message;
};

/// Checks every Instance invariant. An empty result means the instance is valid.
std::vector<Diagnostic> check_instance(const Instance& instance);

struct Placement {
    TaskId task = 0;
    WindowId window = 0;
    std::optional<WindowId> feeding_window; ///< set iff the task feed-switches
    Time start = 0;
    Time end = 0;

    bool feed_switch() const noexcept { return feeding_window.has_value(); }
    bool operator==(const Placement&) const = default;
};

struct Schedule {
    std::vector<Placement> placements;
    std::vector<TaskId> unscheduled;

    bool operator==(const Schedule&) const = default;
};

/// Raised when a schedule refers to entities the instance does not have, or a
/// placement's end is not start + duration.
class MalformedSchedule : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Total profit of placed tasks.
double fitness(const Instance& instance, const Schedule& schedule);

/// Constraint numbers reported by validate_schedule.
namespace constraint {
inline constexpr int latest_end = 2;       // st + d <= let
inline constexpr int window_start = 3;     // start inside the visible window
inline constexpr int window_end = 4;       // non-feed end inside the visible window
inline constexpr int earliest_start = 5;   // st >= est
inline constexpr int start_before_let = 6; // st < let
inline constexpr int satellite_gap = 7;    // alpha between tasks on a satellite antenna
inline constexpr int ground_gap = 8;       // gamma between tasks on a ground antenna
inline constexpr int satellite_busy = 9;   // one link per satellite at a time
inline constexpr int station_busy = 10;    // one link per ground station at a time
inline constexpr int feed_overlap = 11;    // VTW/FVTW overlap >= beta
inline constexpr int feed_end = 12;        // VTW.end <= et <= FVTW.end
inline constexpr int execute_once = 13;    // each task at most once
} // namespace constraint

struct Violation {
    int constraint = 0;
    std::vector<std::int64_t> ids; ///< offending task ids (window ids for 11)
    std::string detail;

    bool operator==(const Violation&) const = default;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const noexcept { return violations.empty(); }
    bool has(int constraint_number) const noexcept;
    bool operator==(const ValidationReport&) const = default;
};

/// Checks every placement against the model constraints. Violations are
/// collected, never thrown; only references to unknown entities throw.
ValidationReport validate_schedule(const Instance& instance, const Schedule& schedule);

/// Interval an entity is occupied by a placement. `end` may equal `start`.
struct BusyInterval {
    Time start = 0;
    Time end = 0;
};

/// Flat numbering of antennas, satellites and stations used by timelines.
class ResourceIndex {
  public:
    explicit ResourceIndex(const Instance& instance);

    std::size_t satellite_antenna(const AntennaRef& ref) const;
    std::size_t ground_antenna(const AntennaRef& ref) const;
    std::size_t satellite_antenna_count() const noexcept { return sat_antenna_total_; }
    std::size_t ground_antenna_count() const noexcept { return ground_antenna_total_; }

  private:
    std::vector<std::size_t> sat_offset_;
    std::vector<std::size_t> station_offset_;
    std::size_t sat_antenna_total_ = 0;
    std::size_t ground_antenna_total_ = 0;
};

/// Two busy intervals on one resource are compatible when one ends at least
/// `gap` before the other starts.
constexpr bool compatible(const BusyInterval& a, const BusyInterval& b, Duration gap) noexcept {
    return a.end + gap <= b.start || b.end + gap <= a.start;
}

/// Overlap of a visible window with a feeding window, measured as
/// VTW.end - FVTW.start.
constexpr Duration feed_overlap(const VisibleWindow& vtw, const FeedingWindow& fvtw) noexcept {
    return vtw.end - fvtw.start;
}

/// Occupation of the ground antenna of a placement's visible window.
/// A feed-switched task holds it until the visible window closes.
BusyInterval visible_leg(const Instance& instance, const Placement& p);

/// Occupation of the feeding antenna: from the later of task start and
/// feeding window start, to task end.
BusyInterval feeding_leg(const Instance& instance, const Placement& p);

} // namespace sgnp
