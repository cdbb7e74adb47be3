#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qpv/qubit.hpp"
#include "qpv/spacetime.hpp"

namespace qpv {

// How an interceptor produces its response bits.
struct GuessPolicy {
    enum class Kind { uniform, measure } kind = Kind::uniform;
    Angle measurement_angle{};  // basis used when kind == measure
};

// Declarative description of one attack run. Validation is per strategy;
// see attack_registry() for the strategy catalogue.
struct AttackSpec {
    std::string strategy;          // "noop" | "guess" | "spoof" | "collude" | "estimate"
    std::vector<Vec3> positions;   // spoof: exactly one; collude: >= 2 unless auto-placed
    std::uint64_t trials = 1;
    GuessPolicy policy{};
    int measurement_grid = 16;     // projective basis angles in [0, pi)
    int copies = 1;                // public-key copies per qubit (estimate)
    bool auto_place_colluders = false;
    double colluder_offset_rad = 0.3;  // angular displacement for auto placement
};

struct StrategyInfo {
    std::string name;
    std::string summary;
};

const std::vector<StrategyInfo>& attack_registry();
bool is_known_strategy(const std::string& name);

struct VerifierDetection {
    std::string id;
    std::uint64_t timing_rejects = 0;
    std::uint64_t identity_rejects = 0;
};

// Outcome of a batch of attack trials. success = the full protocol would
// have accepted the adversary on that trial.
struct AttackReport {
    std::string strategy;
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;
    double success_probability = 0.0;
    double ci_low = 0.0;   // Wilson 95% interval; always brackets the estimate
    double ci_high = 0.0;
    std::optional<double> theoretical_bound;
    bool timing_feasible = false;  // timing checks passable from the attack positions
    std::vector<VerifierDetection> detection;
    std::vector<std::uint8_t> outcomes;       // per-trial 0/1
    std::map<std::string, double> metrics;    // strategy-specific extras
};

// Wilson score interval for a binomial proportion at ~95% confidence.
std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t trials);

}  // namespace qpv
