#include "qpv/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace qpv {

namespace {

// Real-plane depolarizer: with probability p a transit qubit is replaced by
// a uniformly random rotation state, whose average is the maximally mixed
// state. Plumbing knob; off by default.
CipherRegister depolarize(const CipherRegister& cipher, double p, Rng& rng) {
    if (p <= 0.0) return cipher;
    std::vector<QubitState> qubits = detail::RegisterAccess::qubits(cipher);
    for (QubitState& q : qubits) {
        if (rng.uniform_double() < p) {
            q = QubitState::at_angle(Angle{rng.uniform_double() * 2.0 * std::numbers::pi});
        }
    }
    return detail::RegisterAccess::make_cipher(std::move(qubits), cipher.custody());
}

std::size_t mismatch_count(const Message& a, const Message& b) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        n += a.bit(i) != b.bit(i) ? 1 : 0;
    }
    return n;
}

}  // namespace

void ProtocolConfig::validate() const {
    if (T < 1) {
        throw std::invalid_argument("ProtocolConfig: T must be at least 1");
    }
    if (t < 1 || t > 62) {
        throw std::invalid_argument("ProtocolConfig: t must be in [1, 62]");
    }
    const auto verifiers = geometry.verifier_ids();
    if (verifiers.empty()) {
        throw std::invalid_argument("ProtocolConfig: geometry has no verifier stations");
    }
    if (message_lengths.empty()) {
        throw std::invalid_argument("ProtocolConfig: message_lengths must not be empty");
    }
    if (message_lengths.size() != 1 && message_lengths.size() != verifiers.size()) {
        throw std::invalid_argument(
            "ProtocolConfig: message_lengths must have one entry or one per verifier");
    }
    for (std::size_t r : message_lengths) {
        if (r < 1 || r > static_cast<std::size_t>(T)) {
            throw std::invalid_argument("ProtocolConfig: message length out of [1, T]");
        }
    }
    if (!(depolarizing_probability >= 0.0) || !(depolarizing_probability <= 1.0)) {
        throw std::invalid_argument("ProtocolConfig: depolarizing probability out of [0, 1]");
    }
}

std::size_t ProtocolConfig::message_length_for(std::size_t verifier_index) const {
    return message_lengths.size() == 1 ? message_lengths.front()
                                       : message_lengths.at(verifier_index);
}

std::size_t ProtocolConfig::total_message_bits() const {
    std::size_t sum = 0;
    for (std::size_t k = 0; k < verifier_count(); ++k) {
        sum += message_length_for(k);
    }
    return sum;
}

std::pair<ScenarioGeometry, std::string> ensure_prover_station(const ScenarioGeometry& geometry) {
    for (const Station& st : geometry.stations()) {
        if (st.role == StationRole::prover) {
            return {geometry, st.id};
        }
    }
    std::string id = "P";
    for (int n = 1; geometry.has_station(id); ++n) {
        id = "P_" + std::to_string(n);
    }
    return {geometry.with_station({id, geometry.claimed_position(), StationRole::prover}),
            id};
}

ProtocolTranscript run_honest(const ProtocolConfig& config) {
    config.validate();
    Rng root(config.seed);
    Rng rng_key = root.split();
    Rng rng_messages = root.split();
    Rng rng_decode = root.split();
    Rng rng_noise = root.split();

    const std::vector<std::string> verifiers = config.geometry.verifier_ids();
    const std::size_t n = verifiers.size();

    auto [secret, pk] = keygen(config.T, config.t, rng_key);
    auto copies = copy_public_key(pk, n);

    auto [geo, prover_id] = ensure_prover_station(config.geometry);

    // Key distribution: the prover ships one copy to each verifier. This
    // leg runs on its own clock, before the challenge phase.
    std::map<std::string, PublicKeyRegister> delivered;
    EventSimulator sim_keys(geo);
    for (std::size_t k = 0; k < n; ++k) {
        sim_keys.send(prover_id, verifiers[k], "public_key", copies[k].handover(), 0.0);
    }
    for (const auto& v : verifiers) {
        sim_keys.on_receive(v, [&delivered](const SignalEvent& ev, EventSimulator&) {
            if (ev.kind != "public_key") return;
            delivered.emplace(ev.receiver, std::get<PublicKeyRegister>(ev.payload));
        });
    }
    std::vector<SignalEvent> key_log = sim_keys.run();

    // Per-verifier message and decode streams, split in verifier order.
    std::vector<Message> sent;
    std::map<std::string, Rng> decode_rng;
    std::map<std::string, std::size_t> r_for;
    for (std::size_t k = 0; k < n; ++k) {
        Rng mk = rng_messages.split();
        sent.push_back(Message::random(config.message_length_for(k), mk));
        decode_rng.emplace(verifiers[k], rng_decode.split());
        r_for[verifiers[k]] = config.message_length_for(k);
    }

    // Challenge phase: encrypted messages timed to arrive together at the
    // claimed position. In equidistant geometry every emit time is 0.
    double target = 0.0;
    for (const auto& v : verifiers) {
        target = std::max(target,
                          light_time(geo.station(v).position, geo.claimed_position()));
    }
    const std::vector<double> emits = schedule_simultaneous_arrival(geo, verifiers, target);

    EventSimulator sim(geo);
    for (std::size_t k = 0; k < n; ++k) {
        CipherRegister cipher = encrypt(delivered.at(verifiers[k]), sent[k], config.convention);
        cipher = depolarize(cipher, config.depolarizing_probability, rng_noise);
        sim.send(verifiers[k], prover_id, "cipher", cipher.handover(), emits[k]);
    }
    sim.on_receive(prover_id, [&](const SignalEvent& ev, EventSimulator& s) {
        if (ev.kind != "cipher") return;
        const auto& cipher = std::get<CipherRegister>(ev.payload);
        Message decoded =
            decrypt_and_decode(cipher, secret, r_for.at(ev.sender), decode_rng.at(ev.sender));
        const double emit =
            ev.arrival_time_s + s.geometry().station(ev.receiver).processing_delay_s;
        s.send(ev.receiver, ev.sender, "response", ClassicalBits{decoded.bits()}, emit);
    });
    std::map<std::string, std::pair<double, Message>> responses;
    for (const auto& v : verifiers) {
        sim.on_receive(v, [&responses](const SignalEvent& ev, EventSimulator&) {
            if (ev.kind != "response") return;
            const auto& bits = std::get<ClassicalBits>(ev.payload);
            responses.emplace(ev.receiver, std::make_pair(ev.arrival_time_s, Message(bits.bits)));
        });
    }
    std::vector<SignalEvent> challenge_log = sim.run();

    ProtocolTranscript transcript;
    bool all_ok = true;
    for (std::size_t k = 0; k < n; ++k) {
        VerifierRecord rec;
        rec.id = verifiers[k];
        rec.sent = sent[k];
        rec.emit_time_s = emits[k];
        rec.expected_round_trip_s =
            2.0 * light_time(geo.station(verifiers[k]).position, geo.claimed_position());
        auto it = responses.find(verifiers[k]);
        if (it != responses.end()) {
            rec.receipt_time_s = it->second.first;
            rec.response = it->second.second;
            rec.observed_round_trip_s = *rec.receipt_time_s - rec.emit_time_s;
            rec.identity_ok = rec.response->size() == rec.sent.size() &&
                              mismatch_count(*rec.response, rec.sent) <=
                                  config.identity_error_budget;
            rec.timing_ok = std::abs(*rec.observed_round_trip_s - rec.expected_round_trip_s) <=
                            geo.timing_tolerance_s();
        }
        all_ok = all_ok && rec.accepted();
        transcript.verifiers.push_back(std::move(rec));
    }
    transcript.overall_accept = all_ok;
    transcript.key_distribution_log = std::move(key_log);
    transcript.challenge_log = std::move(challenge_log);
    return transcript;
}

}  // namespace qpv
