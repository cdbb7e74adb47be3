#include "qpv/spacetime.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <stdexcept>

namespace qpv {

double norm(const Vec3& v) noexcept {
    return std::hypot(v.x, v.y, v.z);
}

double distance_m(const Vec3& a, const Vec3& b) noexcept {
    return norm(a - b);
}

double light_time(const Vec3& a, const Vec3& b) noexcept {
    return distance_m(a, b) / kSpeedOfLight;
}

namespace {

bool finite(const Vec3& v) {
    return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

}  // namespace

ScenarioGeometry::ScenarioGeometry(std::vector<Station> stations, Vec3 claimed_position,
                                   bool equidistant_mode, double timing_tolerance_s)
    : stations_(std::move(stations)),
      claimed_(claimed_position),
      equidistant_(equidistant_mode),
      timing_tolerance_s_(timing_tolerance_s) {
    if (stations_.empty()) {
        throw std::invalid_argument("ScenarioGeometry: needs at least one station");
    }
    if (!finite(claimed_)) {
        throw std::invalid_argument("ScenarioGeometry: claimed position must be finite");
    }
    if (!(timing_tolerance_s_ >= 0.0) || !std::isfinite(timing_tolerance_s_)) {
        throw std::invalid_argument("ScenarioGeometry: timing tolerance must be >= 0");
    }
    for (std::size_t i = 0; i < stations_.size(); ++i) {
        const Station& st = stations_[i];
        if (st.id.empty()) {
            throw std::invalid_argument("ScenarioGeometry: station id must be non-empty");
        }
        if (!finite(st.position) || !std::isfinite(st.processing_delay_s) ||
            st.processing_delay_s < 0.0) {
            throw std::invalid_argument("ScenarioGeometry: bad station " + st.id);
        }
        if (!index_.emplace(st.id, i).second) {
            throw std::invalid_argument("ScenarioGeometry: duplicate station id " + st.id);
        }
    }
    if (equidistant_) {
        std::optional<double> d0;
        for (const Station& st : stations_) {
            if (st.role != StationRole::verifier) continue;
            const double d = distance_m(st.position, claimed_);
            if (!d0) {
                d0 = d;
            } else if (std::abs(d - *d0) > kEquidistantTolM) {
                throw std::invalid_argument(
                    "ScenarioGeometry: equidistant mode but verifier distances differ");
            }
        }
    }
}

const Station& ScenarioGeometry::station(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) {
        throw std::invalid_argument("ScenarioGeometry: unknown station " + id);
    }
    return stations_[it->second];
}

bool ScenarioGeometry::has_station(const std::string& id) const noexcept {
    return index_.count(id) != 0;
}

std::vector<std::string> ScenarioGeometry::verifier_ids() const {
    std::vector<std::string> ids;
    for (const Station& st : stations_) {
        if (st.role == StationRole::verifier) {
            ids.push_back(st.id);
        }
    }
    return ids;
}

double ScenarioGeometry::distance(const std::string& a, const std::string& b) const {
    return distance_m(station(a).position, station(b).position);
}

double ScenarioGeometry::distance_to_claimed(const std::string& id) const {
    return distance_m(station(id).position, claimed_);
}

ScenarioGeometry ScenarioGeometry::with_station(Station extra) const {
    std::vector<Station> all = stations_;
    all.push_back(std::move(extra));
    return ScenarioGeometry(std::move(all), claimed_, equidistant_, timing_tolerance_s_);
}

ScenarioGeometry make_ring_scenario(int n_verifiers, double d, double timing_tolerance_s) {
    if (n_verifiers < 1) {
        throw std::invalid_argument("make_ring_scenario: need at least one verifier");
    }
    if (!(d > 0.0)) {
        throw std::invalid_argument("make_ring_scenario: d must be positive");
    }
    std::vector<Station> stations;
    for (int k = 0; k < n_verifiers; ++k) {
        const double phi = 2.0 * std::numbers::pi * k / n_verifiers;
        stations.push_back({"V" + std::to_string(k + 1),
                            {d * std::cos(phi), d * std::sin(phi), 0.0},
                            StationRole::verifier});
    }
    return ScenarioGeometry(std::move(stations), Vec3{0.0, 0.0, 0.0}, true, timing_tolerance_s);
}

ScenarioGeometry make_tetrahedron_scenario(double d, double timing_tolerance_s) {
    if (!(d > 0.0)) {
        throw std::invalid_argument("make_tetrahedron_scenario: d must be positive");
    }
    const double a = d / std::sqrt(3.0);
    const std::vector<Vec3> verts = {
        {a, a, a}, {a, -a, -a}, {-a, a, -a}, {-a, -a, a}};
    std::vector<Station> stations;
    for (std::size_t k = 0; k < verts.size(); ++k) {
        stations.push_back({"V" + std::to_string(k + 1), verts[k], StationRole::verifier});
    }
    return ScenarioGeometry(std::move(stations), Vec3{0.0, 0.0, 0.0}, true, timing_tolerance_s);
}

EventSimulator::EventSimulator(ScenarioGeometry geometry) : geometry_(std::move(geometry)) {}

void EventSimulator::on_receive(const std::string& station_id, Handler handler) {
    if (!geometry_.has_station(station_id)) {
        throw std::invalid_argument("EventSimulator: unknown station " + station_id);
    }
    handlers_[station_id] = std::move(handler);
}

void EventSimulator::send(const std::string& from, const std::string& to, std::string kind,
                          Payload payload, double emit_time_s) {
    const Station& sender = geometry_.station(from);
    const Station& receiver = geometry_.station(to);
    if (!std::isfinite(emit_time_s) || emit_time_s < 0.0) {
        throw CausalityError("send: emit time must be finite and non-negative");
    }
    if (running_ && emit_time_s < now_) {
        throw CausalityError("send: handler scheduled an event before current time");
    }
    SignalEvent ev;
    ev.seq = next_seq_++;
    ev.sender = from;
    ev.receiver = to;
    ev.kind = std::move(kind);
    ev.emit_time_s = emit_time_s;
    ev.arrival_time_s = emit_time_s + light_time(sender.position, receiver.position);
    ev.payload = std::move(payload);
    pending_.push_back(std::move(ev));
}

std::vector<SignalEvent> EventSimulator::run() {
    if (finished_) {
        throw std::logic_error("EventSimulator: run() is single-shot");
    }
    running_ = true;

    // (arrival, receiver, sender, seq) index ordering into pending_.
    auto later = [this](std::size_t lhs, std::size_t rhs) {
        const SignalEvent& a = pending_[lhs];
        const SignalEvent& b = pending_[rhs];
        if (a.arrival_time_s != b.arrival_time_s) return a.arrival_time_s > b.arrival_time_s;
        if (a.receiver != b.receiver) return a.receiver > b.receiver;
        if (a.sender != b.sender) return a.sender > b.sender;
        return a.seq > b.seq;
    };
    std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(later)> queue(later);
    std::size_t enqueued = 0;
    std::vector<SignalEvent> log;

    for (;;) {
        while (enqueued < pending_.size()) {
            queue.push(enqueued++);
        }
        if (queue.empty()) break;
        const std::size_t slot = queue.top();
        queue.pop();
        const SignalEvent ev = pending_[slot];  // copy; handlers may grow pending_
        now_ = ev.arrival_time_s;
        log.push_back(ev);
        auto it = handlers_.find(ev.receiver);
        if (it != handlers_.end() && it->second) {
            it->second(ev, *this);
        }
    }

    running_ = false;
    finished_ = true;
    return log;
}

std::vector<double> schedule_simultaneous_arrival(const ScenarioGeometry& geometry,
                                                  const std::vector<std::string>& verifier_ids,
                                                  double target_arrival_s) {
    double max_lt = 0.0;
    for (const auto& id : verifier_ids) {
        max_lt = std::max(max_lt, light_time(geometry.station(id).position,
                                             geometry.claimed_position()));
    }
    if (target_arrival_s < max_lt) {
        throw std::invalid_argument(
            "schedule_simultaneous_arrival: target earlier than farthest light time");
    }
    std::vector<double> emits;
    emits.reserve(verifier_ids.size());
    for (const auto& id : verifier_ids) {
        emits.push_back(target_arrival_s -
                        light_time(geometry.station(id).position, geometry.claimed_position()));
    }
    return emits;
}

std::optional<double> observed_round_trip(const std::vector<SignalEvent>& log,
                                          const std::string& verifier_id,
                                          const std::string& request_kind,
                                          const std::string& response_kind) {
    std::optional<double> emit;
    for (const SignalEvent& ev : log) {
        if (!emit && ev.kind == request_kind && ev.sender == verifier_id) {
            emit = ev.emit_time_s;
        }
        if (emit && ev.kind == response_kind && ev.receiver == verifier_id) {
            return ev.arrival_time_s - *emit;
        }
    }
    return std::nullopt;
}

}  // namespace qpv
