#pragma once

/// @file instance_io.hpp
/// @brief Instance generator, instance/plan file format and load-time validation.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sgnp/model.hpp"
#include "sgnp/rng.hpp"

namespace sgnp {

inline constexpr int instance_format_version = 1;

struct DurationRange {
    Duration low = 0;
    Duration high = 0;
};

/// Parameters of the random instance generator. Defaults describe the
/// 24-hour scenario with normally distributed task durations (mean 55 s,
/// std 45 s) and integer profits uniform in [1, 19].
struct GeneratorConfig {
    std::int32_t task_count = 100;
    std::int32_t satellite_count = 5;
    std::int32_t antennas_per_satellite = 2;
    std::int32_t station_count = 3;
    std::int32_t antennas_per_station = 2;
    std::int32_t feeding_station_count = 1;
    std::int32_t antennas_per_feeding_station = 2;
    Duration horizon_length = 86'400;
    double duration_mean = 55.0;
    double duration_std = 45.0;
    std::int64_t profit_low = 1;
    std::int64_t profit_high = 19;
    DurationRange window_length{300, 900};
    DurationRange window_gap{10'800, 21'600};
    double feed_overlap_probability = 0.3;
    TimingParams timing;
    std::int32_t label_index = 1;
    std::uint64_t seed = 1;
};

/// Raised when a generator config cannot produce an instance.
class GenerationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// "A-B": instance size A and running index B.
struct InstanceLabel {
    std::int32_t size = 0;
    std::int32_t index = 1;

    std::string str() const { return std::to_string(size) + "-" + std::to_string(index); }
    static InstanceLabel parse(std::string_view text);
};

/// Draws task durations. `raw` is the rounded normal deviate; `draw` clips it
/// into [1, cap].
class DurationSampler {
  public:
    DurationSampler(double mean, double stddev, Duration cap, Rng rng)
        : mean_(mean), stddev_(stddev), cap_(cap), rng_(rng) {}

    double raw() { return std::round(rng_.normal(mean_, stddev_)); }
    Duration draw();

  private:
    double mean_;
    double stddev_;
    Duration cap_;
    Rng rng_;
};

std::vector<Diagnostic> check_config(const GeneratorConfig& config);

/// Pure function of the config, seed included. Throws GenerationError.
///
/// Regular stations come first, feeding stations last; regular station j
/// forwards through feeding station j mod feeding-count. Visible windows are
/// laid out per (satellite antenna, regular-station antenna) pair, feeding
/// windows are spawned from the tail of visible windows.
Instance generate_instance(const GeneratorConfig& config);

/// Raised by load functions. `path()` names the offending field, `line()` is
/// set for syntax errors.
class FormatError : public std::runtime_error {
  public:
    FormatError(std::string path, std::string message, int line = 0);
    const std::string& path() const noexcept { return path_; }
    int line() const noexcept { return line_; }

  private:
    std::string path_;
    int line_;
};

/// Canonical text form of an instance.
std::string save_instance(const Instance& instance);
/// Parses and validates; throws FormatError on syntax or invariant problems.
Instance load_instance(std::string_view text);

std::string save_schedule(const Instance& instance, const Schedule& schedule);
Schedule load_schedule(std::string_view text);

std::string save_config(const GeneratorConfig& config);
GeneratorConfig load_config(std::string_view text);

std::string read_file(const std::string& path);
/// Writes to a temporary sibling and renames it into place.
void write_file_atomic(const std::string& path, std::string_view contents);

} // namespace sgnp
