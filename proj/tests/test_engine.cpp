#include <doctest.h>

#include <random>
#include <vector>

#include "gfrsim/engine.h"
#include "gfrsim/sim_time.h"

using namespace gfrsim;

namespace {

// Records (kind, time) pairs so dispatch order is observable.
struct Recorder : EventTarget {
    Engine& engine;
    std::vector<std::pair<std::uint32_t, SimTime>> log;
    explicit Recorder(Engine& e) : engine(e) {}
    void on_event(std::uint32_t kind) override { log.emplace_back(kind, engine.now()); }
};

}  // namespace

TEST_CASE("events at the same due time dispatch in insertion order") {
    Engine e;
    Recorder r(e);
    e.schedule(100, &r, 1);
    e.schedule(100, &r, 2);
    e.schedule(50, &r, 3);
    e.schedule(100, &r, 4);
    CHECK(e.run_until(200) == 4);
    REQUIRE(r.log.size() == 4);
    CHECK(r.log[0].first == 3);
    CHECK(r.log[1].first == 1);
    CHECK(r.log[2].first == 2);
    CHECK(r.log[3].first == 4);
}

TEST_CASE("an event due now dispatches before any event due one tick later") {
    Engine e;
    Recorder r(e);
    e.schedule(1, &r, 9);  // due = now + 1
    e.schedule(0, &r, 7);  // due = now
    e.run_until(10);
    REQUIRE(r.log.size() == 2);
    CHECK(r.log[0].first == 7);
    CHECK(r.log[1].first == 9);
}

TEST_CASE("cancelled events never fire") {
    Engine e;
    Recorder r(e);
    EventHandle h = e.schedule(10, &r, 1);
    e.schedule(20, &r, 2);
    e.cancel(h);
    CHECK(e.run_until(100) == 1);
    REQUIRE(r.log.size() == 1);
    CHECK(r.log[0].first == 2);
}

TEST_CASE("run_until with an empty queue returns 0 and advances the clock") {
    Engine e;
    CHECK(e.run_until(from_sec_int(20)) == 0);
    CHECK(e.now() == from_sec_int(20));
}

TEST_CASE("one event inside the horizon counts once") {
    Engine e;
    Recorder r(e);
    e.schedule(from_sec_int(5), &r, 1);
    CHECK(e.run_until(from_sec_int(20)) == 1);
    CHECK(e.now() == from_sec_int(20));
}

TEST_CASE("scheduling in the past is fatal") {
    Engine e;
    Recorder r(e);
    e.schedule(5, &r, 1);
    e.run_until(10);
    CHECK_THROWS_AS(e.schedule(5, &r, 2), std::logic_error);
}

TEST_CASE("clock is monotone across dispatches") {
    Engine e;
    Recorder r(e);
    std::mt19937_64 rng(7);
    for (int i = 0; i < 1000; ++i) e.schedule(rng() % 100000, &r, 1);
    e.run_until(200000);
    SimTime prev = 0;
    for (auto& [kind, t] : r.log) {
        CHECK(t >= prev);
        prev = t;
    }
}

TEST_CASE("no event loss: every uncancelled event fires exactly once") {
    Engine e;
    Recorder r(e);
    std::mt19937_64 rng(42);
    std::vector<EventHandle> handles;
    const int n = 5000;
    for (int i = 0; i < n; ++i) handles.push_back(e.schedule(rng() % 1000000, &r, i));
    int cancelled = 0;
    for (int i = 0; i < n; i += 3) {
        e.cancel(handles[i]);
        ++cancelled;
    }
    CHECK(e.run_until(2000000) == static_cast<std::uint64_t>(n - cancelled));
    std::vector<bool> seen(n, false);
    for (auto& [kind, t] : r.log) {
        CHECK(!seen[kind]);
        seen[kind] = true;
    }
}

TEST_CASE("identical schedules give identical traces") {
    auto run = [] {
        Engine e;
        Recorder r(e);
        std::mt19937_64 rng(99);
        for (int i = 0; i < 2000; ++i) e.schedule(rng() % 500000, &r, i % 17);
        e.run_until(1000000);
        return e.trace_hash();
    };
    CHECK(run() == run());
}

TEST_CASE("cell serialization times") {
    // 424 bits per cell over the line rate, rounded to the nearest tick.
    CHECK(cell_time(LinkConfig{155.52e6, 0}) == 2726);
    CHECK(cell_time(LinkConfig{149.7e6, 0}) == 2832);
    CHECK(cell_time(LinkConfig{2 * 155.52e6, 0}) == 1363);
    CHECK_THROWS_AS(cell_time(LinkConfig{0.0, 0}), std::invalid_argument);
}

TEST_CASE("rate intervals never truncate to zero") {
    CHECK(interval_from_rate(1e12) == 1);
    CHECK(interval_from_rate(4e9) == 1);  // would round to 0.25 ticks
    CHECK(interval_from_rate(1.0) == kNsPerSec);
}
