#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qpv/attack_types.hpp"
#include "qpv/keys.hpp"
#include "qpv/spacetime.hpp"

namespace qpv {

// Everything one verification round needs: key sizes, per-verifier message
// lengths, geometry, seed, and the cipher convention.
struct ProtocolConfig {
    int T = 32;
    int t = 10;
    // One entry = same length for every verifier; otherwise one per verifier
    // in geometry.verifier_ids() order.
    std::vector<std::size_t> message_lengths = {16};
    ScenarioGeometry geometry = make_ring_scenario(3, 3.0e5);
    std::uint64_t seed = 0;
    CipherConvention convention = CipherConvention::quarter_turn;
    // Channel plumbing, both 0 by default: probability that a cipher qubit
    // is scrambled in transit (replaced by a uniformly random state), and
    // how many wrong bits a verifier tolerates before rejecting identity.
    double depolarizing_probability = 0.0;
    std::size_t identity_error_budget = 0;

    void validate() const;
    std::size_t verifier_count() const { return geometry.verifier_ids().size(); }
    std::size_t message_length_for(std::size_t verifier_index) const;
    std::size_t total_message_bits() const;
};

struct VerifierRecord {
    std::string id;
    Message sent = Message::zeros(1);
    double emit_time_s = 0.0;
    double expected_round_trip_s = 0.0;
    std::optional<Message> response;          // nullopt = timeout
    std::optional<double> receipt_time_s;
    std::optional<double> observed_round_trip_s;
    bool identity_ok = false;
    bool timing_ok = false;

    bool accepted() const noexcept { return identity_ok && timing_ok; }
};

// Timestamped record of one run. Overall acceptance requires every verifier
// to pass both the identity and the timing check.
struct ProtocolTranscript {
    std::vector<VerifierRecord> verifiers;
    bool overall_accept = false;
    std::vector<SignalEvent> key_distribution_log;
    std::vector<SignalEvent> challenge_log;
};

// Geometry guaranteed to contain a prover-role station (an existing one is
// reused; otherwise one is added at the claimed position). Returns the
// geometry and the prover's station id.
std::pair<ScenarioGeometry, std::string> ensure_prover_station(const ScenarioGeometry& geometry);

// Full honest round: keygen, public-key copy distribution, simultaneous
// encrypted challenges, decrypt/measure/respond, per-verifier verdicts.
ProtocolTranscript run_honest(const ProtocolConfig& config);

// Runs the protocol with the named attack injected. The transcript reflects
// one simulated round including the adversary's events; the report
// aggregates spec.trials independent trials.
std::pair<ProtocolTranscript, AttackReport> run_with_adversary(const ProtocolConfig& config,
                                                               const AttackSpec& spec);

}  // namespace qpv
