#include "sgnp/instance_io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace sgnp {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------- labels

InstanceLabel InstanceLabel::parse(std::string_view text) {
    const auto dash = text.find('-');
    InstanceLabel label;
    auto parse_int = [&](std::string_view part, std::int32_t& out) {
        const auto* first = part.data();
        const auto* last = part.data() + part.size();
        const auto [ptr, ec] = std::from_chars(first, last, out);
        return ec == std::errc{} && ptr == last && !part.empty();
    };
    if (dash == std::string_view::npos || !parse_int(text.substr(0, dash), label.size) ||
        !parse_int(text.substr(dash + 1), label.index) || label.size < 0 || label.index < 1)
        throw std::invalid_argument("instance label must look like A-B, got '" + std::string(text) + "'");
    return label;
}

// ---------------------------------------------------------------- generator

Duration DurationSampler::draw() {
    const double x = raw();
    return std::clamp(static_cast<Duration>(x), Duration{1}, cap_);
}

std::vector<Diagnostic> check_config(const GeneratorConfig& c) {
    std::vector<Diagnostic> out;
    auto positive = [&](std::int64_t v, const char* name) {
        if (v < 1) out.push_back({name, "must be at least 1"});
    };
    if (c.task_count < 0) out.push_back({"task_count", "must be non-negative"});
    positive(c.satellite_count, "satellite_count");
    positive(c.antennas_per_satellite, "antennas_per_satellite");
    positive(c.station_count, "station_count");
    positive(c.antennas_per_station, "antennas_per_station");
    if (c.feeding_station_count < 0) out.push_back({"feeding_station_count", "must be non-negative"});
    if (c.feeding_station_count > 0) positive(c.antennas_per_feeding_station, "antennas_per_feeding_station");
    positive(c.horizon_length, "horizon_length");
    if (!(c.duration_std >= 0.0)) out.push_back({"duration_std", "must be non-negative"});
    if (c.profit_low < 0 || c.profit_low > c.profit_high)
        out.push_back({"profit_low", "need 0 <= profit_low <= profit_high"});
    if (c.window_length.low < 1 || c.window_length.low > c.window_length.high)
        out.push_back({"window_length", "need 1 <= low <= high"});
    if (c.window_gap.low < 0 || c.window_gap.low > c.window_gap.high)
        out.push_back({"window_gap", "need 0 <= low <= high"});
    if (!(c.feed_overlap_probability >= 0.0 && c.feed_overlap_probability <= 1.0))
        out.push_back({"feed_overlap_probability", "must lie in [0, 1]"});
    if (c.horizon_length < c.window_length.low)
        out.push_back({"horizon_length", "horizon is shorter than one window"});
    if (c.timing.alpha < 0 || c.timing.beta < 0 || c.timing.gamma < 0)
        out.push_back({"timing", "alpha, beta and gamma must be non-negative"});
    if (c.label_index < 1) out.push_back({"label_index", "must be at least 1"});
    return out;
}

Instance generate_instance(const GeneratorConfig& c) {
    if (const auto diags = check_config(c); !diags.empty())
        throw GenerationError("invalid generator config: " + diags.front().path + ": " + diags.front().message);

    Instance inst;
    inst.label = InstanceLabel{c.task_count, c.label_index}.str();
    inst.horizon_start = 0;
    inst.horizon_end = c.horizon_length;
    inst.timing = c.timing;

    for (std::int32_t i = 0; i < c.satellite_count; ++i)
        inst.satellites.push_back({i, c.antennas_per_satellite});
    for (std::int32_t j = 0; j < c.station_count; ++j)
        inst.stations.push_back({j, c.antennas_per_station, false});
    for (std::int32_t j = 0; j < c.feeding_station_count; ++j)
        inst.stations.push_back({c.station_count + j, c.antennas_per_feeding_station, true});

    const Time horizon = c.horizon_length;

    Rng window_rng = Rng::stream(c.seed, "windows");
    for (const auto& sat : inst.satellites) {
        for (std::int32_t m = 0; m < sat.antennas; ++m) {
            for (std::int32_t j = 0; j < c.station_count; ++j) {
                for (std::int32_t n = 0; n < c.antennas_per_station; ++n) {
                    Time t = window_rng.uniform_int(0, c.window_gap.high);
                    for (;;) {
                        const Duration len = window_rng.uniform_int(c.window_length.low, c.window_length.high);
                        if (t + len > horizon) break;
                        TimeWindow w;
                        w.id = static_cast<WindowId>(inst.windows.size());
                        w.satellite_antenna = {OwnerKind::satellite, sat.id, m};
                        w.ground_antenna = {OwnerKind::ground_station, j, n};
                        w.start = t;
                        w.end = t + len;
                        inst.windows.push_back(w);
                        t = w.end + window_rng.uniform_int(c.window_gap.low, c.window_gap.high);
                    }
                }
            }
        }
    }

    if (c.feeding_station_count > 0) {
        Rng feed_rng = Rng::stream(c.seed, "feeds");
        // Feeding windows on one (satellite antenna, feeding antenna) pair stay disjoint.
        std::vector<std::pair<std::pair<AntennaRef, AntennaRef>, BusyInterval>> taken;
        for (const auto& w : inst.windows) {
            if (!feed_rng.bernoulli(c.feed_overlap_probability)) continue;
            const Duration third = std::max<Duration>(1, w.length() / 3);
            const Time fs = feed_rng.uniform_int(w.end - third, w.end - 1);
            const Time fe = std::min(horizon, w.end + feed_rng.uniform_int(c.window_length.low, c.window_length.high));
            const std::int32_t station = c.station_count + w.ground_antenna.owner % c.feeding_station_count;
            const std::int32_t antenna =
                static_cast<std::int32_t>(feed_rng.below(static_cast<std::uint64_t>(c.antennas_per_feeding_station)));
            if (fe <= w.end) continue;
            const AntennaRef ground{OwnerKind::feeding_ground_station, station, antenna};
            const bool same_pair_clash = std::any_of(taken.begin(), taken.end(), [&](const auto& entry) {
                return entry.first == std::pair{w.satellite_antenna, ground} && !compatible(entry.second, {fs, fe}, 0);
            });
            if (same_pair_clash) continue;
            TimeWindow f;
            f.id = static_cast<WindowId>(inst.feeding_windows.size());
            f.satellite_antenna = w.satellite_antenna;
            f.ground_antenna = ground;
            f.start = fs;
            f.end = fe;
            inst.feeding_windows.push_back(f);
            taken.push_back({{w.satellite_antenna, ground}, {fs, fe}});
        }
    }

    Rng time_rng = Rng::stream(c.seed, "task-times");
    Rng profit_rng = Rng::stream(c.seed, "profits");
    DurationSampler durations(c.duration_mean, c.duration_std, std::max<Duration>(1, horizon / 4),
                              Rng::stream(c.seed, "durations"));
    inst.tasks.reserve(static_cast<std::size_t>(c.task_count));
    for (std::int32_t k = 0; k < c.task_count; ++k) {
        Task t;
        t.id = k;
        t.duration = durations.draw();
        t.profit = static_cast<double>(profit_rng.uniform_int(c.profit_low, c.profit_high));
        t.est = time_rng.uniform_int(0, std::max<Time>(0, horizon - 4 * t.duration));
        t.let = std::min(horizon, t.est + time_rng.uniform_int(2 * t.duration, 8 * t.duration));
        inst.tasks.push_back(t);
    }
    return inst;
}

// ---------------------------------------------------------------- format

FormatError::FormatError(std::string path, std::string message, int line)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message
                                  : (path.empty() ? message : path + ": " + message)),
      path_(std::move(path)),
      line_(line) {}

namespace {

int line_of(std::string_view text, std::size_t byte) {
    byte = std::min(byte, text.size());
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

Json parse_document(std::string_view text) {
    try {
        return Json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError("", e.what(), line_of(text, e.byte));
    }
}

const Json& field(const Json& obj, const char* key, const std::string& path) {
    if (!obj.is_object()) throw FormatError(path, "expected an object");
    const auto it = obj.find(key);
    if (it == obj.end()) throw FormatError(path.empty() ? key : path + "." + key, "missing field");
    return *it;
}

template <typename T>
T get(const Json& obj, const char* key, const std::string& path) {
    const Json& v = field(obj, key, path);
    const std::string where = path.empty() ? key : path + "." + key;
    try {
        if constexpr (std::is_same_v<T, bool>) {
            if (!v.is_boolean()) throw FormatError(where, "expected a boolean");
        } else if constexpr (std::is_integral_v<T>) {
            if (!v.is_number_integer()) throw FormatError(where, "expected an integer");
        } else if constexpr (std::is_floating_point_v<T>) {
            if (!v.is_number()) throw FormatError(where, "expected a number");
        } else {
            if (!v.is_string()) throw FormatError(where, "expected a string");
        }
        return v.get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(where, e.what());
    }
}

template <typename T>
T get_or(const Json& obj, const char* key, const std::string& path, T fallback) {
    return obj.contains(key) ? get<T>(obj, key, path) : fallback;
}

const Json& array_field(const Json& obj, const char* key, const std::string& path) {
    const Json& v = field(obj, key, path);
    if (!v.is_array()) throw FormatError(path.empty() ? key : path + "." + key, "expected an array");
    return v;
}

void check_header(const Json& doc, const char* kind) {
    if (get<std::string>(doc, "format", "") != kind)
        throw FormatError("format", std::string("expected '") + kind + "'");
    if (get<int>(doc, "format_version", "") != instance_format_version)
        throw FormatError("format_version",
                          "unsupported version (this build reads " + std::to_string(instance_format_version) + ")");
}

// Top-level keys on their own lines, array elements one per line.
std::string render(const Json& doc) {
    std::ostringstream os;
    os << "{\n";
    std::size_t i = 0;
    for (auto it = doc.begin(); it != doc.end(); ++it, ++i) {
        os << "  " << Json(it.key()).dump() << ": ";
        const Json& v = it.value();
        if (v.is_array() && !v.empty()) {
            os << "[\n";
            for (std::size_t k = 0; k < v.size(); ++k)
                os << "    " << v[k].dump() << (k + 1 < v.size() ? ",\n" : "\n");
            os << "  ]";
        } else {
            os << v.dump();
        }
        os << (i + 1 < doc.size() ? ",\n" : "\n");
    }
    os << "}\n";
    return os.str();
}

Json window_json(const TimeWindow& w) {
    Json j;
    j["id"] = w.id;
    j["satellite"] = w.satellite_antenna.owner;
    j["satellite_antenna"] = w.satellite_antenna.antenna;
    j["station"] = w.ground_antenna.owner;
    j["station_antenna"] = w.ground_antenna.antenna;
    j["start"] = w.start;
    j["end"] = w.end;
    return j;
}

TimeWindow window_from(const Json& j, const std::string& path, const std::vector<GroundStation>& stations) {
    TimeWindow w;
    w.id = get<WindowId>(j, "id", path);
    w.satellite_antenna = {OwnerKind::satellite, get<std::int32_t>(j, "satellite", path),
                           get<std::int32_t>(j, "satellite_antenna", path)};
    const auto station = get<std::int32_t>(j, "station", path);
    const bool feeding = station >= 0 && static_cast<std::size_t>(station) < stations.size() &&
                         stations[static_cast<std::size_t>(station)].feeding;
    w.ground_antenna = {feeding ? OwnerKind::feeding_ground_station : OwnerKind::ground_station, station,
                        get<std::int32_t>(j, "station_antenna", path)};
    w.start = get<Time>(j, "start", path);
    w.end = get<Time>(j, "end", path);
    return w;
}

std::string at(const char* key, std::size_t i) { return std::string(key) + "[" + std::to_string(i) + "]"; }

} // namespace

std::string save_instance(const Instance& inst) {
    Json doc;
    doc["format"] = "sgnp-instance";
    doc["format_version"] = instance_format_version;
    doc["label"] = inst.label;
    doc["time_unit"] = "s";
    doc["horizon"] = {{"start", inst.horizon_start}, {"end", inst.horizon_end}};
    doc["timing"] = {{"alpha", inst.timing.alpha}, {"beta", inst.timing.beta}, {"gamma", inst.timing.gamma}};
    doc["satellites"] = Json::array();
    for (const auto& s : inst.satellites) doc["satellites"].push_back({{"id", s.id}, {"antennas", s.antennas}});
    doc["ground_stations"] = Json::array();
    for (const auto& g : inst.stations)
        doc["ground_stations"].push_back({{"id", g.id}, {"antennas", g.antennas}, {"feeding", g.feeding}});
    doc["tasks"] = Json::array();
    for (const auto& t : inst.tasks)
        doc["tasks"].push_back(
            {{"id", t.id}, {"est", t.est}, {"let", t.let}, {"duration", t.duration}, {"profit", t.profit}});
    doc["windows"] = Json::array();
    for (const auto& w : inst.windows) doc["windows"].push_back(window_json(w));
    doc["feeding_windows"] = Json::array();
    for (const auto& w : inst.feeding_windows) doc["feeding_windows"].push_back(window_json(w));
    return render(doc);
}

Instance load_instance(std::string_view text) {
    const Json doc = parse_document(text);
    check_header(doc, "sgnp-instance");
    if (const auto unit = get_or<std::string>(doc, "time_unit", "", "s"); unit != "s")
        throw FormatError("time_unit", "only seconds ('s') are supported");

    Instance inst;
    inst.label = get_or<std::string>(doc, "label", "", "");
    const Json& horizon = field(doc, "horizon", "");
    inst.horizon_start = get<Time>(horizon, "start", "horizon");
    inst.horizon_end = get<Time>(horizon, "end", "horizon");
    const Json& timing = field(doc, "timing", "");
    inst.timing = {get<Duration>(timing, "alpha", "timing"), get<Duration>(timing, "beta", "timing"),
                   get<Duration>(timing, "gamma", "timing")};

    const Json& sats = array_field(doc, "satellites", "");
    for (std::size_t i = 0; i < sats.size(); ++i) {
        const auto p = at("satellites", i);
        inst.satellites.push_back({get<std::int32_t>(sats[i], "id", p), get<std::int32_t>(sats[i], "antennas", p)});
    }
    const Json& stations = array_field(doc, "ground_stations", "");
    for (std::size_t i = 0; i < stations.size(); ++i) {
        const auto p = at("ground_stations", i);
        inst.stations.push_back({get<std::int32_t>(stations[i], "id", p),
                                 get<std::int32_t>(stations[i], "antennas", p),
                                 get<bool>(stations[i], "feeding", p)});
    }
    const Json& tasks = array_field(doc, "tasks", "");
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const auto p = at("tasks", i);
        inst.tasks.push_back({get<TaskId>(tasks[i], "id", p), get<Time>(tasks[i], "est", p),
                              get<Time>(tasks[i], "let", p), get<Duration>(tasks[i], "duration", p),
                              get<double>(tasks[i], "profit", p)});
    }
    const Json& windows = array_field(doc, "windows", "");
    for (std::size_t i = 0; i < windows.size(); ++i)
        inst.windows.push_back(window_from(windows[i], at("windows", i), inst.stations));
    const Json& feeds = array_field(doc, "feeding_windows", "");
    for (std::size_t i = 0; i < feeds.size(); ++i)
        inst.feeding_windows.push_back(window_from(feeds[i], at("feeding_windows", i), inst.stations));

    if (const auto diags = check_instance(inst); !diags.empty()) {
        std::string msg = diags.front().message;
        if (diags.size() > 1) msg += " (and " + std::to_string(diags.size() - 1) + " more problems)";
        throw FormatError(diags.front().path, msg);
    }
    return inst;
}

std::string save_schedule(const Instance& inst, const Schedule& schedule) {
    Json doc;
    doc["format"] = "sgnp-plan";
    doc["format_version"] = instance_format_version;
    doc["instance"] = inst.label;
    doc["fitness"] = fitness(inst, schedule);
    doc["placements"] = Json::array();
    for (const auto& p : schedule.placements) {
        Json j;
        j["task"] = p.task;
        j["window"] = p.window;
        j["feeding_window"] = p.feeding_window ? Json(*p.feeding_window) : Json(nullptr);
        j["start"] = p.start;
        j["end"] = p.end;
        doc["placements"].push_back(std::move(j));
    }
    doc["unscheduled"] = Json::array();
    for (TaskId id : schedule.unscheduled) doc["unscheduled"].push_back(id);
    return render(doc);
}

Schedule load_schedule(std::string_view text) {
    const Json doc = parse_document(text);
    check_header(doc, "sgnp-plan");
    Schedule s;
    const Json& placements = array_field(doc, "placements", "");
    for (std::size_t i = 0; i < placements.size(); ++i) {
        const auto p = at("placements", i);
        const Json& j = placements[i];
        Placement pl;
        pl.task = get<TaskId>(j, "task", p);
        pl.window = get<WindowId>(j, "window", p);
        if (const Json& f = field(j, "feeding_window", p); !f.is_null())
            pl.feeding_window = get<WindowId>(j, "feeding_window", p);
        pl.start = get<Time>(j, "start", p);
        pl.end = get<Time>(j, "end", p);
        s.placements.push_back(pl);
    }
    const Json& unscheduled = array_field(doc, "unscheduled", "");
    for (std::size_t i = 0; i < unscheduled.size(); ++i) {
        if (!unscheduled[i].is_number_integer()) throw FormatError(at("unscheduled", i), "expected an integer");
        s.unscheduled.push_back(unscheduled[i].get<TaskId>());
    }
    return s;
}

std::string save_config(const GeneratorConfig& c) {
    Json doc;
    doc["task_count"] = c.task_count;
    doc["satellite_count"] = c.satellite_count;
    doc["antennas_per_satellite"] = c.antennas_per_satellite;
    doc["station_count"] = c.station_count;
    doc["antennas_per_station"] = c.antennas_per_station;
    doc["feeding_station_count"] = c.feeding_station_count;
    doc["antennas_per_feeding_station"] = c.antennas_per_feeding_station;
    doc["horizon_length"] = c.horizon_length;
    doc["duration_mean"] = c.duration_mean;
    doc["duration_std"] = c.duration_std;
    doc["profit_low"] = c.profit_low;
    doc["profit_high"] = c.profit_high;
    doc["window_length"] = {c.window_length.low, c.window_length.high};
    doc["window_gap"] = {c.window_gap.low, c.window_gap.high};
    doc["feed_overlap_probability"] = c.feed_overlap_probability;
    doc["timing"] = {{"alpha", c.timing.alpha}, {"beta", c.timing.beta}, {"gamma", c.timing.gamma}};
    doc["label_index"] = c.label_index;
    doc["seed"] = c.seed;
    return doc.dump(2) + "\n";
}

GeneratorConfig load_config(std::string_view text) {
    const Json doc = parse_document(text);
    if (!doc.is_object()) throw FormatError("", "expected an object");
    GeneratorConfig c;
    c.task_count = get_or(doc, "task_count", "", c.task_count);
    c.satellite_count = get_or(doc, "satellite_count", "", c.satellite_count);
    c.antennas_per_satellite = get_or(doc, "antennas_per_satellite", "", c.antennas_per_satellite);
    c.station_count = get_or(doc, "station_count", "", c.station_count);
    c.antennas_per_station = get_or(doc, "antennas_per_station", "", c.antennas_per_station);
    c.feeding_station_count = get_or(doc, "feeding_station_count", "", c.feeding_station_count);
    c.antennas_per_feeding_station = get_or(doc, "antennas_per_feeding_station", "", c.antennas_per_feeding_station);
    c.horizon_length = get_or(doc, "horizon_length", "", c.horizon_length);
    c.duration_mean = get_or(doc, "duration_mean", "", c.duration_mean);
    c.duration_std = get_or(doc, "duration_std", "", c.duration_std);
    c.profit_low = get_or(doc, "profit_low", "", c.profit_low);
    c.profit_high = get_or(doc, "profit_high", "", c.profit_high);
    auto range = [&](const char* key, DurationRange r) {
        if (!doc.contains(key)) return r;
        const Json& v = doc[key];
        if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() || !v[1].is_number_integer())
            throw FormatError(key, "expected [low, high] integers");
        return DurationRange{v[0].get<Duration>(), v[1].get<Duration>()};
    };
    c.window_length = range("window_length", c.window_length);
    c.window_gap = range("window_gap", c.window_gap);
    c.feed_overlap_probability = get_or(doc, "feed_overlap_probability", "", c.feed_overlap_probability);
    if (doc.contains("timing")) {
        const Json& t = doc["timing"];
        c.timing.alpha = get_or(t, "alpha", "timing", c.timing.alpha);
        c.timing.beta = get_or(t, "beta", "timing", c.timing.beta);
        c.timing.gamma = get_or(t, "gamma", "timing", c.timing.gamma);
    }
    c.label_index = get_or(doc, "label_index", "", c.label_index);
    c.seed = get_or(doc, "seed", "", c.seed);
    return c;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file_atomic(const std::string& path, std::string_view contents) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    fs::rename(tmp, target);
}

} // namespace sgnp
