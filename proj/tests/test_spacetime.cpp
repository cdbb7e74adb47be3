#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qpv/spacetime.hpp"

using namespace qpv;

TEST_CASE("light_time") {
    CHECK(light_time({0, 0, 0}, {kSpeedOfLight, 0, 0}) == 1.0);
    CHECK(light_time({5, 5, 5}, {5, 5, 5}) == 0.0);

    SUBCASE("round trip at d = 3e5 m") {
        const double d = 3.0e5;
        const double rt = 2.0 * light_time({0, 0, 0}, {d, 0, 0});
        CHECK(rt == doctest::Approx(2.0 * d / kSpeedOfLight).epsilon(1e-15));
        CHECK(rt == doctest::Approx(2.00138456e-3).epsilon(1e-7));
    }
}

TEST_CASE("geometry validation") {
    SUBCASE("duplicate ids are rejected") {
        std::vector<Station> stations = {
            {"V1", {1, 0, 0}, StationRole::verifier},
            {"V1", {0, 1, 0}, StationRole::verifier},
        };
        CHECK_THROWS_AS(ScenarioGeometry(std::move(stations), {0, 0, 0}),
                        std::invalid_argument);
    }

    SUBCASE("equidistant mode rejects unequal distances") {
        std::vector<Station> stations = {
            {"V1", {1000.0, 0, 0}, StationRole::verifier},
            {"V2", {0, 2000.0, 0}, StationRole::verifier},
        };
        CHECK_THROWS_AS(ScenarioGeometry(std::move(stations), {0, 0, 0}, true),
                        std::invalid_argument);
    }

    SUBCASE("ring and tetrahedron helpers satisfy equidistant mode") {
        const ScenarioGeometry ring = make_ring_scenario(5, 3.0e5);
        CHECK(ring.verifier_ids().size() == 5);
        for (const auto& id : ring.verifier_ids()) {
            CHECK(std::abs(ring.distance_to_claimed(id) - 3.0e5) < kEquidistantTolM);
        }
        const ScenarioGeometry tetra = make_tetrahedron_scenario(3.0e5);
        CHECK(tetra.verifier_ids().size() == 4);
        for (const auto& id : tetra.verifier_ids()) {
            CHECK(std::abs(tetra.distance_to_claimed(id) - 3.0e5) < kEquidistantTolM);
        }
    }
}

TEST_CASE("schedule_simultaneous_arrival") {
    SUBCASE("equidistant geometry: target d/c puts every emit at 0") {
        const ScenarioGeometry geo = make_ring_scenario(3, 3.0e5);
        const double target = light_time({3.0e5, 0, 0}, {0, 0, 0});
        const auto emits = schedule_simultaneous_arrival(geo, geo.verifier_ids(), target);
        for (double e : emits) {
            CHECK(std::abs(e) < 1e-15);
        }
    }

    SUBCASE("staggered emits: verifiers at 1c and 2c metres, target 2 s") {
        std::vector<Station> stations = {
            {"V1", {kSpeedOfLight, 0, 0}, StationRole::verifier},
            {"V2", {2.0 * kSpeedOfLight, 0, 0}, StationRole::verifier},
        };
        const ScenarioGeometry geo(std::move(stations), {0, 0, 0});
        const auto emits = schedule_simultaneous_arrival(geo, {"V1", "V2"}, 2.0);
        CHECK(emits[0] == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(emits[1] == doctest::Approx(0.0).epsilon(1e-15));
    }

    SUBCASE("single verifier emits at target - d/c") {
        const ScenarioGeometry geo = make_ring_scenario(1, 3.0e5);
        const double lt = 3.0e5 / kSpeedOfLight;
        const auto emits = schedule_simultaneous_arrival(geo, geo.verifier_ids(), 3.0 * lt);
        CHECK(emits[0] == doctest::Approx(2.0 * lt).epsilon(1e-14));
    }

    SUBCASE("unreachable target is rejected") {
        const ScenarioGeometry geo = make_ring_scenario(1, 3.0e5);
        CHECK_THROWS_AS(schedule_simultaneous_arrival(geo, geo.verifier_ids(), 1e-9),
                        std::invalid_argument);
    }
}

namespace {

ScenarioGeometry two_station_geometry() {
    std::vector<Station> stations = {
        {"A", {0, 0, 0}, StationRole::verifier},
        {"B", {kSpeedOfLight, 0, 0}, StationRole::prover},
        {"C", {kSpeedOfLight, 0, 0}, StationRole::verifier},
    };
    return ScenarioGeometry(std::move(stations), {0, 0, 0});
}

}  // namespace

TEST_CASE("event loop") {
    SUBCASE("no events, empty log") {
        EventSimulator sim(two_station_geometry());
        CHECK(sim.run().empty());
    }

    SUBCASE("equal arrival times break ties by (receiver, sender)") {
        auto run_once = [] {
            EventSimulator sim(two_station_geometry());
            // Both arrive at B/C (same position) at t = 1.
            sim.send("A", "C", "x", ClassicalBits{{1}}, 0.0);
            sim.send("A", "B", "x", ClassicalBits{{0}}, 0.0);
            return sim.run();
        };
        const auto log1 = run_once();
        const auto log2 = run_once();
        REQUIRE(log1.size() == 2);
        CHECK(log1[0].receiver == "B");
        CHECK(log1[1].receiver == "C");
        for (std::size_t i = 0; i < log1.size(); ++i) {
            CHECK(log1[i].receiver == log2[i].receiver);
            CHECK(log1[i].arrival_time_s == log2[i].arrival_time_s);
        }
    }

    SUBCASE("zero processing delay: response emitted at request arrival") {
        EventSimulator sim(two_station_geometry());
        sim.send("A", "B", "ping", ClassicalBits{{1}}, 0.25);
        sim.on_receive("B", [](const SignalEvent& ev, EventSimulator& s) {
            s.send("B", "A", "pong", ClassicalBits{{1}}, ev.arrival_time_s);
        });
        const auto log = sim.run();
        REQUIRE(log.size() == 2);
        CHECK(log[1].emit_time_s == log[0].arrival_time_s);
        CHECK(log[1].arrival_time_s == doctest::Approx(2.25).epsilon(1e-15));
    }

    SUBCASE("arrival always trails emission by the light time") {
        EventSimulator sim(two_station_geometry());
        sim.send("A", "B", "x", ClassicalBits{{1}}, 0.5);
        const auto log = sim.run();
        CHECK(log[0].arrival_time_s == 1.5);
    }

    SUBCASE("scheduling into the past aborts the run") {
        EventSimulator sim(two_station_geometry());
        sim.send("A", "B", "x", ClassicalBits{{1}}, 1.0);
        sim.on_receive("B", [](const SignalEvent& ev, EventSimulator& s) {
            s.send("B", "A", "bad", ClassicalBits{{1}}, ev.arrival_time_s - 0.5);
        });
        CHECK_THROWS_AS(sim.run(), CausalityError);
    }

    SUBCASE("negative emit before the run is rejected") {
        EventSimulator sim(two_station_geometry());
        CHECK_THROWS_AS(sim.send("A", "B", "x", ClassicalBits{{1}}, -1.0), CausalityError);
    }

    SUBCASE("causality invariant over a fan-out of events") {
        EventSimulator sim(two_station_geometry());
        sim.send("A", "B", "seed", ClassicalBits{{1}}, 0.0);
        int depth = 0;
        sim.on_receive("B", [&depth](const SignalEvent& ev, EventSimulator& s) {
            if (depth++ < 3) {
                s.send("B", "A", "r" + std::to_string(depth), ClassicalBits{{1}},
                       ev.arrival_time_s + 0.1);
            }
        });
        sim.on_receive("A", [](const SignalEvent& ev, EventSimulator& s) {
            if (ev.kind != "seed") {
                s.send("A", "B", "fwd_" + ev.kind, ClassicalBits{{1}}, ev.arrival_time_s);
            }
        });
        const auto log = sim.run();
        double prev = 0.0;
        for (const auto& ev : log) {
            CHECK(ev.arrival_time_s >= ev.emit_time_s);
            CHECK(ev.arrival_time_s >= prev);
            prev = ev.arrival_time_s;
        }
    }
}

TEST_CASE("observed_round_trip") {
    const double d = 3.0e5;
    std::vector<Station> stations = {
        {"V1", {d, 0, 0}, StationRole::verifier},
        {"P", {0, 0, 0}, StationRole::prover},
        {"E", {0.5 * d, 0, 0}, StationRole::adversary},
    };
    const ScenarioGeometry geo(std::move(stations), {0, 0, 0});

    SUBCASE("honest responder: exactly 2d/c") {
        EventSimulator sim(geo);
        sim.send("V1", "P", "cipher", ClassicalBits{{1}}, 0.0);
        sim.on_receive("P", [](const SignalEvent& ev, EventSimulator& s) {
            s.send("P", ev.sender, "response", ClassicalBits{{1}}, ev.arrival_time_s);
        });
        const auto log = sim.run();
        const auto rt = observed_round_trip(log, "V1");
        REQUIRE(rt.has_value());
        CHECK(*rt == 2.0 * (d / kSpeedOfLight));
    }

    SUBCASE("interceptor halfway: exactly 2 d_E / c") {
        EventSimulator sim(geo);
        sim.send("V1", "E", "cipher", ClassicalBits{{1}}, 0.0);
        sim.on_receive("E", [](const SignalEvent& ev, EventSimulator& s) {
            s.send("E", ev.sender, "response", ClassicalBits{{1}}, ev.arrival_time_s);
        });
        const auto rt = observed_round_trip(sim.run(), "V1");
        REQUIRE(rt.has_value());
        CHECK(*rt == doctest::Approx(2.0 * (0.5 * d) / kSpeedOfLight).epsilon(1e-15));
    }

    SUBCASE("no response reads as timeout") {
        EventSimulator sim(geo);
        sim.send("V1", "P", "cipher", ClassicalBits{{1}}, 0.0);
        CHECK(!observed_round_trip(sim.run(), "V1").has_value());
    }
}
