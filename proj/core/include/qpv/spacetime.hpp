#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qpv/constants.hpp"
#include "qpv/keys.hpp"

namespace qpv {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend constexpr Vec3 operator+(Vec3 a, Vec3 b) noexcept {
        return {a.x + b.x, a.y + b.y, a.z + b.z};
    }
    friend constexpr Vec3 operator-(Vec3 a, Vec3 b) noexcept {
        return {a.x - b.x, a.y - b.y, a.z - b.z};
    }
    friend constexpr Vec3 operator*(double k, Vec3 v) noexcept {
        return {k * v.x, k * v.y, k * v.z};
    }
    friend bool operator==(const Vec3&, const Vec3&) = default;
};

double norm(const Vec3& v) noexcept;
double distance_m(const Vec3& a, const Vec3& b) noexcept;

// One-way light travel time |a-b| / c, seconds.
double light_time(const Vec3& a, const Vec3& b) noexcept;

enum class StationRole { verifier, prover, adversary };

struct Station {
    std::string id;
    Vec3 position;                    // metres
    StationRole role = StationRole::verifier;
    double processing_delay_s = 0.0;  // 0 = idealized instant processing
};

// Stations plus the position the prover claims. Validates ids and, in
// equidistant mode, that every verifier sits at the same distance from the
// claimed position (within kEquidistantTolM).
class ScenarioGeometry {
public:
    ScenarioGeometry(std::vector<Station> stations, Vec3 claimed_position,
                     bool equidistant_mode = false,
                     double timing_tolerance_s = kDefaultTimingToleranceS);

    const std::vector<Station>& stations() const noexcept { return stations_; }
    const Station& station(const std::string& id) const;
    bool has_station(const std::string& id) const noexcept;
    std::vector<std::string> verifier_ids() const;

    Vec3 claimed_position() const noexcept { return claimed_; }
    bool equidistant_mode() const noexcept { return equidistant_; }
    double timing_tolerance_s() const noexcept { return timing_tolerance_s_; }

    double distance(const std::string& a, const std::string& b) const;
    double distance_to_claimed(const std::string& id) const;

    // Value-semantic extension; validates the combined station set.
    ScenarioGeometry with_station(Station extra) const;

private:
    std::vector<Station> stations_;
    std::map<std::string, std::size_t> index_;
    Vec3 claimed_;
    bool equidistant_;
    double timing_tolerance_s_;
};

// N verifiers on a ring of radius d around the claimed position (origin).
// Equidistant by construction.
ScenarioGeometry make_ring_scenario(int n_verifiers, double d,
                                    double timing_tolerance_s = kDefaultTimingToleranceS);

// Four verifiers on regular-tetrahedron vertices at distance d from the
// claimed position: non-coplanar, so timing constraints pin all three
// coordinates.
ScenarioGeometry make_tetrahedron_scenario(double d,
                                           double timing_tolerance_s = kDefaultTimingToleranceS);

struct ClassicalBits {
    std::vector<std::uint8_t> bits;
};

// What travels on a signal: classical bits or a quantum register. The
// simulator never inspects payloads.
using Payload = std::variant<ClassicalBits, PublicKeyRegister, CipherRegister>;

struct SignalEvent {
    std::uint64_t seq = 0;  // enqueue order, last-resort tie break
    std::string sender;
    std::string receiver;
    std::string kind;  // protocol-level label, e.g. "cipher" or "response"
    double emit_time_s = 0.0;
    double arrival_time_s = 0.0;  // always emit + distance/c
    Payload payload;
};

// Thrown when a handler tries to schedule into the past.
class CausalityError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Deterministic single-threaded event loop over light-speed signals.
// Events are processed in non-decreasing arrival time; simultaneous
// arrivals are ordered by (receiver id, sender id), then enqueue order.
class EventSimulator {
public:
    using Handler = std::function<void(const SignalEvent&, EventSimulator&)>;

    explicit EventSimulator(ScenarioGeometry geometry);

    const ScenarioGeometry& geometry() const noexcept { return geometry_; }
    double now() const noexcept { return now_; }

    void on_receive(const std::string& station_id, Handler handler);

    // Schedules a signal; arrival is computed from station geometry. Before
    // run(): emit >= 0. During run(): emit >= now (no past scheduling).
    void send(const std::string& from, const std::string& to, std::string kind,
              Payload payload, double emit_time_s);

    // Drains the queue and returns the complete ordered log. Single-shot.
    std::vector<SignalEvent> run();

private:
    ScenarioGeometry geometry_;
    std::vector<SignalEvent> pending_;
    std::map<std::string, Handler> handlers_;
    double now_ = 0.0;
    bool running_ = false;
    bool finished_ = false;
    std::uint64_t next_seq_ = 0;
};

// Emit times that make every verifier's signal arrive at the claimed
// position at target_arrival. Throws when the target is unreachable
// (earlier than the largest one-way light time).
std::vector<double> schedule_simultaneous_arrival(const ScenarioGeometry& geometry,
                                                  const std::vector<std::string>& verifier_ids,
                                                  double target_arrival_s);

// Round trip seen by a verifier: arrival of its response minus emission of
// its request. std::nullopt = timed out (no response in the log).
std::optional<double> observed_round_trip(const std::vector<SignalEvent>& log,
                                          const std::string& verifier_id,
                                          const std::string& request_kind = "cipher",
                                          const std::string& response_kind = "response");

}  // namespace qpv
