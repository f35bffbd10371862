#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "sgnp/instance_io.hpp"
#include "sgnp/model.hpp"
#include "sgnp/rng.hpp"
#include "support.hpp"

using namespace sgnp;
using sgnp::testing::Builder;
using sgnp::testing::naive_violations;

namespace {

std::set<int> numbers(const ValidationReport& r) {
    std::set<int> out;
    for (const auto& v : r.violations) out.insert(v.constraint);
    return out;
}

// One satellite with two antennas, one regular station with two antennas,
// one feeding station with one antenna.
Builder basic() {
    Builder b;
    b.satellite(2);
    b.station(2);
    b.station(1, true);
    return b;
}

} // namespace

TEST_CASE("fitness sums the profit of placed tasks") {
    Builder b = basic();
    b.task(0, 100, 10, 5);
    b.task(0, 100, 10, 2);
    b.task(0, 100, 10, 9);
    b.task(0, 100, 10, 7);
    b.window(0, 0, 0, 0, 0, 1000);
    const Instance inst = b.build();

    CHECK(fitness(inst, Schedule{}) == 0.0);
    CHECK(fitness(inst, Schedule{{{3, 0, std::nullopt, 0, 10}}, {}}) == 7.0);
    Schedule three{{{0, 0, std::nullopt, 0, 10}, {1, 0, std::nullopt, 20, 30}, {2, 0, std::nullopt, 40, 50}}, {3}};
    CHECK(fitness(inst, three) == 16.0);
}

TEST_CASE("empty schedule has no violations") {
    Builder b = basic();
    b.task(0, 100, 10, 1);
    b.window(0, 0, 0, 0, 0, 100);
    CHECK(validate_schedule(b.get(), Schedule{}).ok());
}

TEST_CASE("attitude gap on one satellite antenna") {
    Builder b = basic();
    b.timing(5, 0, 0);
    b.task(0, 100, 10, 1);
    b.task(0, 100, 8, 1);
    b.window(0, 0, 0, 0, 0, 100);
    b.window(0, 0, 0, 1, 0, 100);
    // [0,10] and [12,20] on satellite antenna 0 but different ground antennas.
    Schedule s{{{0, 0, std::nullopt, 0, 10}, {1, 1, std::nullopt, 12, 20}}, {}};
    const auto report = validate_schedule(b.get(), s);
    CHECK(report.has(constraint::satellite_gap));
    REQUIRE(!report.violations.empty());
    const auto& v = report.violations.front();
    CHECK(v.constraint == constraint::satellite_gap);
    CHECK(v.ids == std::vector<std::int64_t>{0, 1});
    CHECK(naive_violations(b.get(), s).count(7) == 1);

    // With a gap of exactly alpha the pair is fine.
    Schedule ok{{{0, 0, std::nullopt, 0, 10}, {1, 1, std::nullopt, 15, 23}}, {}};
    CHECK(!validate_schedule(b.get(), ok).has(constraint::satellite_gap));
}

TEST_CASE("feed placement with too little overlap") {
    Builder b = basic();
    b.timing(0, 10, 0);
    b.task(0, 200, 60, 1);
    b.window(0, 0, 0, 0, 0, 50);
    b.feeding_window(0, 0, 1, 0, 45, 120);
    Schedule s{{{0, 0, 0, 0, 60}}, {}};
    const auto report = validate_schedule(b.get(), s);
    CHECK(report.has(constraint::feed_overlap));
    for (const auto& v : report.violations)
        if (v.constraint == constraint::feed_overlap) CHECK(v.ids == std::vector<std::int64_t>{0, 0});
    CHECK(naive_violations(b.get(), s) == numbers(report));
}

TEST_CASE("each constraint is reported") {
    Builder b = basic();
    b.timing(10, 5, 10);
    b.task(100, 200, 20, 1);   // 0
    b.task(0, 1000, 20, 1);    // 1
    b.task(0, 1000, 20, 1);    // 2
    b.window(0, 0, 0, 0, 100, 300); // 0
    b.window(0, 1, 0, 1, 100, 300); // 1
    b.window(0, 0, 0, 0, 500, 600); // 2
    b.feeding_window(0, 0, 1, 0, 580, 700); // 0, bound-compatible with window 2
    b.feeding_window(0, 1, 1, 0, 580, 700); // 1, other satellite antenna
    const Instance& inst = b.get();

    auto only = [&](const Schedule& s) { return numbers(validate_schedule(inst, s)); };

    SUBCASE("latest end and start before let") {
        CHECK(only({{{0, 0, std::nullopt, 190, 210}}, {}}) == std::set<int>{2});
        CHECK(only({{{0, 0, std::nullopt, 200, 220}}, {}}) == std::set<int>{2, 6});
    }
    SUBCASE("earliest start") { CHECK(only({{{0, 0, std::nullopt, 99, 119}}, {}}) == std::set<int>{3, 5}); }
    SUBCASE("window start and end") {
        CHECK(only({{{1, 2, std::nullopt, 490, 510}}, {}}) == std::set<int>{3});
        CHECK(only({{{1, 2, std::nullopt, 590, 610}}, {}}) == std::set<int>{4});
    }
    SUBCASE("ground gap") {
        // Two tasks 5 s apart on one window: both the antenna gaps (10) are missed.
        Schedule s{{{1, 0, std::nullopt, 100, 120}, {2, 0, std::nullopt, 125, 145}}, {}};
        const auto got = only(s);
        CHECK(got.count(8) == 1);
        CHECK(got.count(7) == 1);
    }
    SUBCASE("satellite and station exclusivity across antennas") {
        Schedule s{{{1, 0, std::nullopt, 100, 120}, {2, 1, std::nullopt, 110, 130}}, {}};
        CHECK(only(s) == std::set<int>{9, 10});
    }
    SUBCASE("feed end and foreign feeding window") {
        CHECK(only({{{1, 2, 0, 590, 610}}, {}}).empty());
        CHECK(only({{{1, 2, 1, 590, 610}}, {}}) == std::set<int>{12});
        Builder late = b;
        late.task(0, 1000, 200, 1); // 3: 590 + 200 = 790 > FVTW end 700
        CHECK(numbers(validate_schedule(late.get(), {{{3, 2, 0, 590, 790}}, {}})) == std::set<int>{12});
    }
    SUBCASE("feed start must lie inside the visible window") {
        CHECK(only({{{1, 2, 0, 600, 620}}, {}}).count(3) == 1);
    }
    SUBCASE("executed once") {
        CHECK(only({{{1, 0, std::nullopt, 100, 120}, {1, 2, std::nullopt, 500, 520}}, {}}).count(13) == 1);
        CHECK(only({{{1, 0, std::nullopt, 100, 120}}, {1}}).count(13) == 1);
    }
}

TEST_CASE("feed-switched legs share a station without overlapping") {
    Builder b;
    b.satellite(1);
    b.station(2, true); // a feeding station can also host the visible window in hand-made instances
    b.timing(0, 0, 0);
    b.task(0, 1000, 40, 1);
    b.window(0, 0, 0, 0, 0, 100);
    b.feeding_window(0, 0, 0, 1, 80, 200);
    // Visible leg [90,100], feeding leg [90,130] on the same station overlap.
    const Schedule s{{{0, 0, 0, 90, 130}}, {}};
    CHECK(validate_schedule(b.get(), s).has(constraint::station_busy));
    CHECK(naive_violations(b.get(), s).count(10) == 1);
}

TEST_CASE("malformed schedules throw") {
    Builder b = basic();
    b.task(0, 100, 10, 1);
    b.window(0, 0, 0, 0, 0, 100);
    const Instance& inst = b.get();
    CHECK_THROWS_AS(validate_schedule(inst, {{{5, 0, std::nullopt, 0, 10}}, {}}), MalformedSchedule);
    CHECK_THROWS_AS(validate_schedule(inst, {{{0, 3, std::nullopt, 0, 10}}, {}}), MalformedSchedule);
    CHECK_THROWS_AS(validate_schedule(inst, {{{0, 0, 2, 0, 10}}, {}}), MalformedSchedule);
    CHECK_THROWS_AS(validate_schedule(inst, {{{0, 0, std::nullopt, 0, 11}}, {}}), MalformedSchedule);
    CHECK_THROWS_AS(validate_schedule(inst, {{}, {9}}), MalformedSchedule);
}

TEST_CASE("instance diagnostics name the offending field") {
    Builder b = basic();
    b.task(0, 100, 10, 1);
    b.window(0, 0, 0, 0, 0, 100);
    CHECK(check_instance(b.get()).empty());

    auto first_path = [](const Instance& inst) {
        const auto d = check_instance(inst);
        return d.empty() ? std::string{} : d.front().path;
    };
    Instance bad = b.build();
    bad.tasks[0].let = 5;
    CHECK(first_path(bad) == "tasks[0].let");
    CHECK(check_instance(bad).front().message.find("task 0") != std::string::npos);

    bad = b.build();
    bad.windows[0].end = 20'000;
    CHECK(first_path(bad) == "windows[0]");

    bad = b.build();
    bad.windows[0].satellite_antenna.antenna = 2;
    CHECK(first_path(bad) == "windows[0].satellite_antenna.antenna");

    bad = b.build();
    bad.feeding_windows.push_back({0, {OwnerKind::satellite, 0, 0}, {OwnerKind::ground_station, 0, 0}, 10, 20});
    CHECK(first_path(bad) == "feeding_windows[0].ground_antenna");

    bad = b.build();
    bad.tasks[0].id = 4;
    CHECK(first_path(bad) == "tasks[0].id");
}

TEST_CASE("validator agrees with an independent checker on random schedules") {
    Rng rng(2024);
    for (int round = 0; round < 400; ++round) {
        Builder b;
        b.timing(rng.uniform_int(0, 20), rng.uniform_int(0, 20), rng.uniform_int(0, 20));
        b.horizon(2000);
        const auto sats = static_cast<std::int32_t>(rng.uniform_int(1, 2));
        for (std::int32_t s = 0; s < sats; ++s) b.satellite(static_cast<std::int32_t>(rng.uniform_int(1, 2)));
        b.station(static_cast<std::int32_t>(rng.uniform_int(1, 2)));
        b.station(static_cast<std::int32_t>(rng.uniform_int(1, 2)));
        b.station(1, true);
        const int n = static_cast<int>(rng.uniform_int(1, 8));
        for (int k = 0; k < n; ++k) {
            const Time est = rng.uniform_int(0, 1500);
            const Duration d = rng.uniform_int(1, 80);
            b.task(est, std::min<Time>(2000, est + d + rng.uniform_int(0, 200)), d, 1 + rng.uniform_int(0, 9));
        }
        const Instance& shape = b.get();
        auto sat_ant = [&](std::int32_t& s, std::int32_t& a) {
            s = static_cast<std::int32_t>(rng.below(shape.satellites.size()));
            a = static_cast<std::int32_t>(rng.below(static_cast<std::uint64_t>(shape.satellites[static_cast<std::size_t>(s)].antennas)));
        };
        for (int w = 0; w < 6; ++w) {
            std::int32_t s, a;
            sat_ant(s, a);
            const auto st = static_cast<std::int32_t>(rng.uniform_int(0, 1));
            const auto ga = static_cast<std::int32_t>(rng.below(static_cast<std::uint64_t>(shape.stations[static_cast<std::size_t>(st)].antennas)));
            const Time start = rng.uniform_int(0, 1700);
            b.window(s, a, st, ga, start, start + rng.uniform_int(20, 300));
        }
        for (int f = 0; f < 3; ++f) {
            std::int32_t s, a;
            sat_ant(s, a);
            const Time start = rng.uniform_int(0, 1700);
            b.feeding_window(s, a, 2, 0, start, start + rng.uniform_int(20, 300));
        }
        const Instance inst = b.build();
        REQUIRE(check_instance(inst).empty());

        Schedule s;
        for (const auto& t : inst.tasks) {
            if (rng.bernoulli(0.2)) {
                s.unscheduled.push_back(t.id);
                continue;
            }
            Placement p;
            p.task = t.id;
            p.window = static_cast<WindowId>(rng.below(inst.windows.size()));
            const auto& w = inst.windows[static_cast<std::size_t>(p.window)];
            if (rng.bernoulli(0.3)) p.feeding_window = static_cast<WindowId>(rng.below(inst.feeding_windows.size()));
            p.start = rng.bernoulli(0.5) ? std::max(t.est, w.start) + rng.uniform_int(-5, 5)
                                         : w.end - t.duration + rng.uniform_int(-5, 30);
            p.end = p.start + t.duration;
            s.placements.push_back(p);
            if (rng.bernoulli(0.05)) s.unscheduled.push_back(t.id);
        }
        const auto report = validate_schedule(inst, s);
        CHECK(numbers(report) == naive_violations(inst, s));
    }
}
