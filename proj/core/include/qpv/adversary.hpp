#pragma once

#include <cstdint>
#include <vector>

#include "qpv/attack_types.hpp"
#include "qpv/density.hpp"
#include "qpv/protocol.hpp"

namespace qpv {

// Average cipher state over all 2^t key values for message bit m:
// rho_m = 2^-t * sum_s |psi(s*theta_t + m*pi/2)><psi(...)|. Exact
// enumeration; equally spaced angles average both mixtures to I/2, which is
// what makes a single intercepted cipher qubit worthless.
DensityMatrix2 cipher_mixtures(int t, int m);

// Optimal single-shot discrimination probability of two equally likely
// states: 1/2 + trace_distance/2.
double helstrom_guess_bound(const DensityMatrix2& r0, const DensityMatrix2& r1);

// Empirical per-bit success of intercept, measure at a fixed basis, and
// guess, over fresh single-use keys. 1/2 in expectation for every basis.
double per_bit_guess_success(int t, Angle basis, std::uint64_t trials, Rng& rng);

// ---- key estimation from public-key copies --------------------------------

struct AngleEstimate {
    double angle_rad = 0.0;
    std::uint64_t samples = 0;       // key qubits decoded at this basis
    std::uint64_t correct = 0;
    double success = 0.0;
    double empirical_mi_bits = 0.0;  // one outcome vs key value, from counts
    double exact_success = 0.0;      // enumerated Bayes success, same basis
    double exact_mi_bits = 0.0;      // enumerated mutual information
};

struct KeyEstimationResult {
    std::vector<AngleEstimate> per_angle;
    double best_success = 0.0;
    double best_angle_rad = 0.0;
    double grid_optimal_exact = 0.0;  // max enumerated success over a fine grid
    AttackReport report;
};

// Measure `copies` copies of each public-key qubit in each grid basis and
// Bayes-decode s_i. trials = fresh keygens of length T per basis angle, so
// each angle sees trials*T decoded qubits. Grid resolution must be >= 2.
KeyEstimationResult key_estimation_attack(int t, int T, int copies, int grid_resolution,
                                          std::uint64_t trials, Rng& rng);

// Enumerated Bayes success probability of `copies` measurements at a fixed
// basis (the brute-force route the sampled attack is checked against).
double exact_estimation_success(int t, int copies, Angle basis);

// Enumerated mutual information, bits, between one measurement outcome and
// a uniform key value at the given basis. Never exceeds 1.
double exact_outcome_mutual_information(int t, Angle basis);

// Max of exact_estimation_success over a fine basis grid.
double optimal_estimation_success(int t, int copies, int fine_grid = 2048);

// ---- position attacks ------------------------------------------------------

// Intercept every verifier's challenge at one position and answer
// immediately with bits chosen by `policy`.
AttackReport spoof_position_attack(const ProtocolConfig& config, const Vec3& position,
                                   const GuessPolicy& policy, std::uint64_t trials);

// Multiple interceptors; each verifier's challenge is answered by the
// colluder whose round trip is closest to that verifier's expectation.
// A single position degenerates to spoof_position_attack.
AttackReport colluding_attack(const ProtocolConfig& config, const std::vector<Vec3>& positions,
                              std::uint64_t trials);

// One colluder per verifier on the sphere |C - V_k| = d_k, rotated
// offset_rad away from the direction toward the claimed position; its own
// verifier's timing check passes exactly. offset 0 puts every colluder at
// the claimed position itself.
std::vector<Vec3> construct_feasible_colluders(const ScenarioGeometry& geometry,
                                               double offset_rad);

}  // namespace qpv
