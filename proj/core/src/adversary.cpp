#include "qpv/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

namespace qpv {

namespace {

constexpr int kMaxEnumeratedT = 24;  // 2^t enumeration guard
constexpr double kHalfPi = std::numbers::pi / 2.0;

double binary_entropy_bits(double p) {
    double h = 0.0;
    if (p > 0.0) h -= p * std::log2(p);
    if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
    return h;
}

double binomial_coefficient(int k, int n1) {
    double c = 1.0;
    for (int i = 1; i <= n1; ++i) {
        c *= static_cast<double>(k - n1 + i) / static_cast<double>(i);
    }
    return c;
}

// P(outcome 1) when |psi(s*theta)> is measured in the basis rotated by beta.
double outcome_one_probability(std::uint64_t s, double step, double basis) {
    const double delta = std::sin(static_cast<double>(s) * step - basis);
    return delta * delta;
}

void check_t(int t) {
    if (t < 1 || t > kMaxEnumeratedT) {
        throw std::invalid_argument("adversary analysis: t must be in [1, 24] (2^t enumeration)");
    }
}

// Estimation builds per-value decode/count tables, so the practical range
// is tighter than the plain mixture enumerations.
void check_estimation_t(int t) {
    if (t < 1 || t > 16) {
        throw std::invalid_argument("key estimation: t must be in [1, 16] (2^t hypothesis table)");
    }
}

}  // namespace

const std::vector<StrategyInfo>& attack_registry() {
    static const std::vector<StrategyInfo> registry = {
        {"noop", "no interference; behaves exactly like an honest round"},
        {"guess", "answer from the claimed position with guessed bits"},
        {"spoof", "intercept and answer from one chosen position"},
        {"collude", "several interceptors; closest-in-timing colluder answers each verifier"},
        {"estimate", "measure public-key copies over a basis grid and Bayes-decode the key"},
    };
    return registry;
}

bool is_known_strategy(const std::string& name) {
    const auto& reg = attack_registry();
    return std::any_of(reg.begin(), reg.end(),
                       [&](const StrategyInfo& s) { return s.name == name; });
}

std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t trials) {
    if (trials == 0) {
        return {0.0, 1.0};
    }
    const double z = 1.959963984540054;  // ~95%
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

DensityMatrix2 cipher_mixtures(int t, int m) {
    check_t(t);
    if (m < 0 || m > 1) {
        throw std::invalid_argument("cipher_mixtures: message bit must be 0 or 1");
    }
    const double step = theta_step(t).radians;
    const double offset = static_cast<double>(m) * kHalfPi;
    const std::uint64_t count = std::uint64_t{1} << t;
    MixtureAccumulator acc;
    for (std::uint64_t s = 0; s < count; ++s) {
        acc.add(QubitState::at_angle(Angle{static_cast<double>(s) * step + offset}));
    }
    return acc.normalized();
}

double helstrom_guess_bound(const DensityMatrix2& r0, const DensityMatrix2& r1) {
    return 0.5 + 0.5 * trace_distance(r0, r1);
}

double per_bit_guess_success(int t, Angle basis, std::uint64_t trials, Rng& rng) {
    check_t(t);
    if (trials < 1) {
        throw std::invalid_argument("per_bit_guess_success: trials must be >= 1");
    }
    const double step = theta_step(t).radians;
    const std::uint64_t count = std::uint64_t{1} << t;
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < trials; ++i) {
        const std::uint64_t s = rng.uniform_below(count);
        const int m = rng.bit();
        const QubitState cipher =
            QubitState::at_angle(Angle{static_cast<double>(s) * step + m * kHalfPi});
        const int outcome = measure_in_basis(cipher, basis, rng);
        // Any fixed outcome->bit rule performs identically; use the identity.
        hits += (outcome == m) ? 1 : 0;
    }
    return static_cast<double>(hits) / static_cast<double>(trials);
}

namespace {

// n1 (count of 1-outcomes among k) -> most likely key value, ties to the
// smallest s. The binomial coefficient is constant in s and drops out.
std::vector<std::uint64_t> bayes_decode_table(int t, int copies, double basis) {
    const double step = theta_step(t).radians;
    const std::uint64_t count = std::uint64_t{1} << t;
    std::vector<std::uint64_t> table(static_cast<std::size_t>(copies) + 1, 0);
    for (int n1 = 0; n1 <= copies; ++n1) {
        double best = -1.0;
        std::uint64_t best_s = 0;
        for (std::uint64_t s = 0; s < count; ++s) {
            const double p = outcome_one_probability(s, step, basis);
            const double like =
                std::pow(p, n1) * std::pow(1.0 - p, copies - n1);
            if (like > best) {
                best = like;
                best_s = s;
            }
        }
        table[static_cast<std::size_t>(n1)] = best_s;
    }
    return table;
}

}  // namespace

double exact_estimation_success(int t, int copies, Angle basis) {
    check_estimation_t(t);
    if (copies < 1 || copies > 64) {
        throw std::invalid_argument("exact_estimation_success: copies must be in [1, 64]");
    }
    const double step = theta_step(t).radians;
    const std::uint64_t count = std::uint64_t{1} << t;
    const auto table = bayes_decode_table(t, copies, basis.radians);
    // P(correct) = 2^-t * sum_{n1} Binom(n1; copies, p_{decode(n1)}).
    double total = 0.0;
    for (int n1 = 0; n1 <= copies; ++n1) {
        const std::uint64_t s = table[static_cast<std::size_t>(n1)];
        const double p = outcome_one_probability(s, step, basis.radians);
        total += binomial_coefficient(copies, n1) * std::pow(p, n1) *
                 std::pow(1.0 - p, copies - n1);
    }
    return total / static_cast<double>(count);
}

double exact_outcome_mutual_information(int t, Angle basis) {
    check_t(t);
    const double step = theta_step(t).radians;
    const std::uint64_t count = std::uint64_t{1} << t;
    double p_bar = 0.0;
    double h_cond = 0.0;
    for (std::uint64_t s = 0; s < count; ++s) {
        const double p = outcome_one_probability(s, step, basis.radians);
        p_bar += p;
        h_cond += binary_entropy_bits(p);
    }
    p_bar /= static_cast<double>(count);
    h_cond /= static_cast<double>(count);
    return binary_entropy_bits(p_bar) - h_cond;
}

double optimal_estimation_success(int t, int copies, int fine_grid) {
    if (fine_grid < 2) {
        throw std::invalid_argument("optimal_estimation_success: grid must be >= 2");
    }
    double best = 0.0;
    for (int g = 0; g < fine_grid; ++g) {
        const Angle basis{std::numbers::pi * g / fine_grid};
        best = std::max(best, exact_estimation_success(t, copies, basis));
    }
    return best;
}

KeyEstimationResult key_estimation_attack(int t, int T, int copies, int grid_resolution,
                                          std::uint64_t trials, Rng& rng) {
    check_estimation_t(t);
    if (T < 1) {
        throw std::invalid_argument("key_estimation_attack: T must be >= 1");
    }
    if (copies < 1 || copies > 64) {
        throw std::invalid_argument("key_estimation_attack: copies must be in [1, 64]");
    }
    if (grid_resolution < 2) {
        throw std::invalid_argument("key_estimation_attack: grid resolution must be >= 2");
    }
    if (trials < 1) {
        throw std::invalid_argument("key_estimation_attack: trials must be >= 1");
    }

    const double step = theta_step(t).radians;
    const std::uint64_t count = std::uint64_t{1} << t;
    KeyEstimationResult result;

    for (int g = 0; g < grid_resolution; ++g) {
        const double basis = std::numbers::pi * g / grid_resolution;
        const auto table = bayes_decode_table(t, copies, basis);

        AngleEstimate est;
        est.angle_rad = basis;
        // Joint outcome/value counts for the single-measurement mutual
        // information; every copy's outcome is one sample.
        std::vector<std::uint64_t> joint0(count, 0), joint1(count, 0);

        // Each trial re-keys: copies are of fresh, single-use registers.
        for (std::uint64_t trial = 0; trial < trials; ++trial) {
            PrivateKey key = keygen(T, t, rng).first;
            for (int i = 0; i < T; ++i) {
                const std::uint64_t s = key.s(static_cast<std::size_t>(i));
                const QubitState psi = QubitState::at_angle(Angle{static_cast<double>(s) * step});
                int ones = 0;
                for (int c = 0; c < copies; ++c) {
                    const int b = measure_in_basis(psi, Angle{basis}, rng);
                    ones += b;
                    (b ? joint1 : joint0)[s] += 1;
                }
                const std::uint64_t decoded = table[static_cast<std::size_t>(ones)];
                est.samples += 1;
                est.correct += (decoded == s) ? 1 : 0;
            }
        }

        est.success = static_cast<double>(est.correct) / static_cast<double>(est.samples);
        est.exact_success = exact_estimation_success(t, copies, Angle{basis});
        est.exact_mi_bits = exact_outcome_mutual_information(t, Angle{basis});

        // Plug-in mutual information from the joint counts.
        std::uint64_t total = 0;
        for (std::uint64_t s = 0; s < count; ++s) total += joint0[s] + joint1[s];
        double mi = 0.0;
        const double n = static_cast<double>(total);
        std::uint64_t ones_total = 0;
        for (std::uint64_t s = 0; s < count; ++s) ones_total += joint1[s];
        const double pb[2] = {1.0 - static_cast<double>(ones_total) / n,
                              static_cast<double>(ones_total) / n};
        for (std::uint64_t s = 0; s < count; ++s) {
            const double ps = static_cast<double>(joint0[s] + joint1[s]) / n;
            if (ps == 0.0) continue;
            const std::uint64_t cells[2] = {joint0[s], joint1[s]};
            for (int b = 0; b < 2; ++b) {
                if (cells[b] == 0) continue;
                const double pbs = static_cast<double>(cells[b]) / n;
                mi += pbs * std::log2(pbs / (pb[b] * ps));
            }
        }
        est.empirical_mi_bits = mi;

        if (est.success > result.best_success) {
            result.best_success = est.success;
            result.best_angle_rad = basis;
        }
        result.per_angle.push_back(est);
    }

    result.grid_optimal_exact = optimal_estimation_success(t, copies);

    AttackReport& rep = result.report;
    rep.strategy = "estimate";
    rep.trials = trials * static_cast<std::uint64_t>(T);
    for (const auto& est : result.per_angle) {
        if (est.angle_rad == result.best_angle_rad) {
            rep.successes = est.correct;
        }
    }
    rep.success_probability = result.best_success;
    std::tie(rep.ci_low, rep.ci_high) = wilson_interval(rep.successes, rep.trials);
    rep.theoretical_bound = result.grid_optimal_exact;
    rep.timing_feasible = true;  // not a timing attack
    rep.metrics["best_angle_rad"] = result.best_angle_rad;
    rep.metrics["grid_optimal_exact"] = result.grid_optimal_exact;
    double max_mi = 0.0;
    for (const auto& est : result.per_angle) max_mi = std::max(max_mi, est.empirical_mi_bits);
    rep.metrics["max_empirical_mi_bits"] = max_mi;
    rep.metrics["holevo_limit_bits"] = 1.0;
    return result;
}

// ---- intercept engine (guess / spoof / collude) ----------------------------

namespace {

struct TimingPlan {
    std::vector<std::string> verifier_ids;
    std::vector<std::size_t> assigned;  // colluder index per verifier
    std::vector<double> expected_rt_s;
    std::vector<double> attack_rt_s;
    std::vector<bool> timing_ok;
    bool all_ok = true;
    double max_error_s = 0.0;
};

TimingPlan assess_timing(const ScenarioGeometry& geometry, const std::vector<Vec3>& positions) {
    TimingPlan plan;
    plan.verifier_ids = geometry.verifier_ids();
    for (const auto& v : plan.verifier_ids) {
        const Vec3 vp = geometry.station(v).position;
        const double expected = 2.0 * light_time(vp, geometry.claimed_position());
        std::size_t best = 0;
        double best_err = std::numeric_limits<double>::infinity();
        double best_rt = 0.0;
        for (std::size_t j = 0; j < positions.size(); ++j) {
            const double rt = 2.0 * light_time(vp, positions[j]);
            const double err = std::abs(rt - expected);
            if (err < best_err) {
                best_err = err;
                best = j;
                best_rt = rt;
            }
        }
        const bool ok = best_err <= geometry.timing_tolerance_s();
        plan.assigned.push_back(best);
        plan.expected_rt_s.push_back(expected);
        plan.attack_rt_s.push_back(best_rt);
        plan.timing_ok.push_back(ok);
        plan.all_ok = plan.all_ok && ok;
        plan.max_error_s = std::max(plan.max_error_s, best_err);
    }
    return plan;
}

std::string unique_station_id(const ScenarioGeometry& geometry, const std::string& base) {
    if (!geometry.has_station(base)) return base;
    for (int n = 1;; ++n) {
        std::string id = base + "_" + std::to_string(n);
        if (!geometry.has_station(id)) return id;
    }
}

// One fully simulated round with interceptors in place of the prover. The
// verdict structure matches run_honest; only the responder differs.
ProtocolTranscript simulate_intercept_round(const ProtocolConfig& config,
                                            const std::vector<Vec3>& positions,
                                            const GuessPolicy& policy, const TimingPlan& plan) {
    Rng root(config.seed);
    Rng rng_key = root.split();
    Rng rng_messages = root.split();
    Rng rng_guess = root.split();

    const std::vector<std::string> verifiers = config.geometry.verifier_ids();
    const std::size_t n = verifiers.size();

    auto [secret, pk] = keygen(config.T, config.t, rng_key);
    (void)secret;  // the honest key owner is out of the loop from here on
    auto copies = copy_public_key(pk, n);

    auto [geo_honest, prover_id] = ensure_prover_station(config.geometry);

    std::map<std::string, PublicKeyRegister> delivered;
    EventSimulator sim_keys(geo_honest);
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

    // Interceptor stations join the challenge-phase geometry.
    ScenarioGeometry geo = geo_honest;
    std::vector<std::string> adversary_ids;
    for (std::size_t j = 0; j < positions.size(); ++j) {
        std::string id = unique_station_id(geo, "E" + std::to_string(j + 1));
        geo = geo.with_station({id, positions[j], StationRole::adversary});
        adversary_ids.push_back(std::move(id));
    }

    std::vector<Message> sent;
    std::map<std::string, std::size_t> r_for;
    for (std::size_t k = 0; k < n; ++k) {
        Rng mk = rng_messages.split();
        sent.push_back(Message::random(config.message_length_for(k), mk));
        r_for[verifiers[k]] = config.message_length_for(k);
    }

    double target = 0.0;
    for (const auto& v : verifiers) {
        target = std::max(target,
                          light_time(geo.station(v).position, geo.claimed_position()));
    }
    const std::vector<double> emits = schedule_simultaneous_arrival(geo, verifiers, target);

    EventSimulator sim(geo);
    for (std::size_t k = 0; k < n; ++k) {
        CipherRegister cipher = encrypt(delivered.at(verifiers[k]), sent[k], config.convention);
        // Captured in flight: the challenge reaches the interceptor instead
        // of the claimed position.
        sim.send(verifiers[k], adversary_ids[plan.assigned[k]], "cipher", cipher.handover(),
                 emits[k]);
    }
    auto interceptor = [&](const SignalEvent& ev, EventSimulator& s) {
        if (ev.kind != "cipher") return;
        const auto& cipher = std::get<CipherRegister>(ev.payload);
        const std::size_t r = r_for.at(ev.sender);
        std::vector<std::uint8_t> guess(r);
        for (std::size_t i = 0; i < r; ++i) {
            if (policy.kind == GuessPolicy::Kind::measure) {
                guess[i] = static_cast<std::uint8_t>(
                    measure_register_qubit(cipher, i, policy.measurement_angle, rng_guess));
            } else {
                guess[i] = static_cast<std::uint8_t>(rng_guess.bit());
            }
        }
        // Zero processing delay: the response leaves the moment the
        // challenge arrives.
        s.send(ev.receiver, ev.sender, "response", ClassicalBits{std::move(guess)},
               ev.arrival_time_s);
    };
    for (const auto& id : adversary_ids) {
        sim.on_receive(id, interceptor);
    }
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
        rec.expected_round_trip_s = plan.expected_rt_s[k];
        auto it = responses.find(verifiers[k]);
        if (it != responses.end()) {
            rec.receipt_time_s = it->second.first;
            rec.response = it->second.second;
            rec.observed_round_trip_s = *rec.receipt_time_s - rec.emit_time_s;
            std::size_t wrong = 0;
            for (std::size_t i = 0; i < rec.sent.size(); ++i) {
                wrong += rec.response->bit(i) != rec.sent.bit(i) ? 1 : 0;
            }
            rec.identity_ok = rec.response->size() == rec.sent.size() &&
                              wrong <= config.identity_error_budget;
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

// Aggregates many trials of the intercept attack without re-running the
// event loop: the timing verdicts are deterministic per scenario, so only
// the identity game is re-sampled (fresh single-use key, fresh message,
// fresh guesses each trial).
AttackReport run_intercept_trials(const ProtocolConfig& config, const TimingPlan& plan,
                                  const GuessPolicy& policy, std::uint64_t trials,
                                  const std::string& strategy) {
    Rng root(config.seed);
    Rng rng_key = root.split();
    Rng rng_messages = root.split();
    Rng rng_guess = root.split();

    const std::size_t n = plan.verifier_ids.size();
    const double step = theta_step(config.t).radians;
    const std::uint64_t key_count = std::uint64_t{1} << config.t;
    const double unit =
        config.convention == CipherConvention::literal_pi ? std::numbers::pi : kHalfPi;

    AttackReport report;
    report.strategy = strategy;
    report.trials = trials;
    report.timing_feasible = plan.all_ok;
    report.outcomes.reserve(trials);
    for (const auto& id : plan.verifier_ids) {
        report.detection.push_back({id, 0, 0});
    }

    for (std::uint64_t trial = 0; trial < trials; ++trial) {
        bool accepted = plan.all_ok;
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t wrong = 0;
            const std::size_t r = config.message_length_for(k);
            for (std::size_t i = 0; i < r; ++i) {
                const int m = rng_messages.bit();
                int guess;
                if (policy.kind == GuessPolicy::Kind::measure) {
                    const std::uint64_t s = rng_key.uniform_below(key_count);
                    const QubitState cipher = QubitState::at_angle(
                        Angle{static_cast<double>(s) * step + m * unit});
                    guess = measure_in_basis(cipher, policy.measurement_angle, rng_guess);
                } else {
                    guess = rng_guess.bit();
                }
                wrong += (guess == m) ? 0 : 1;
            }
            const bool identity_ok = wrong <= config.identity_error_budget;
            report.detection[k].identity_rejects += identity_ok ? 0 : 1;
            report.detection[k].timing_rejects += plan.timing_ok[k] ? 0 : 1;
            accepted = accepted && identity_ok;
        }
        report.outcomes.push_back(accepted ? 1 : 0);
        report.successes += accepted ? 1 : 0;
    }

    report.success_probability =
        static_cast<double>(report.successes) / static_cast<double>(trials);
    std::tie(report.ci_low, report.ci_high) = wilson_interval(report.successes, report.trials);
    // Guessing law: per verifier, P(at most b of r bits wrong) at p = 1/2.
    double bound = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        const int r = static_cast<int>(config.message_length_for(k));
        double acc = 0.0;
        for (int j = 0; j <= static_cast<int>(config.identity_error_budget) && j <= r; ++j) {
            acc += binomial_coefficient(r, j);
        }
        bound *= acc * std::exp2(-static_cast<double>(r));
    }
    report.theoretical_bound = plan.all_ok ? bound : 0.0;
    report.metrics["max_timing_error_s"] = plan.max_error_s;
    report.metrics["total_message_bits"] = static_cast<double>(config.total_message_bits());
    return report;
}

AttackReport intercept_attack(const ProtocolConfig& config, const std::vector<Vec3>& positions,
                              const GuessPolicy& policy, std::uint64_t trials,
                              const std::string& strategy) {
    config.validate();
    if (positions.empty()) {
        throw std::invalid_argument("intercept attack: needs at least one position");
    }
    if (trials < 1) {
        throw std::invalid_argument("intercept attack: trials must be >= 1");
    }
    const TimingPlan plan = assess_timing(config.geometry, positions);
    return run_intercept_trials(config, plan, policy, trials, strategy);
}

}  // namespace

AttackReport spoof_position_attack(const ProtocolConfig& config, const Vec3& position,
                                   const GuessPolicy& policy, std::uint64_t trials) {
    return intercept_attack(config, {position}, policy, trials, "spoof");
}

AttackReport colluding_attack(const ProtocolConfig& config, const std::vector<Vec3>& positions,
                              std::uint64_t trials) {
    return intercept_attack(config, positions, GuessPolicy{}, trials, "collude");
}

std::vector<Vec3> construct_feasible_colluders(const ScenarioGeometry& geometry,
                                               double offset_rad) {
    std::vector<Vec3> out;
    for (const auto& id : geometry.verifier_ids()) {
        const Vec3 vp = geometry.station(id).position;
        const Vec3 to_claim = geometry.claimed_position() - vp;
        const double d = norm(to_claim);
        if (!(d > 0.0)) {
            out.push_back(geometry.claimed_position());
            continue;
        }
        const Vec3 u = (1.0 / d) * to_claim;
        // Unit vector orthogonal to u, built from the least-aligned axis.
        const double ax = std::abs(u.x), ay = std::abs(u.y), az = std::abs(u.z);
        Vec3 axis{0.0, 0.0, 1.0};
        if (ax <= ay && ax <= az) {
            axis = {1.0, 0.0, 0.0};
        } else if (ay <= az) {
            axis = {0.0, 1.0, 0.0};
        }
        const double along = axis.x * u.x + axis.y * u.y + axis.z * u.z;
        Vec3 w = axis - along * u;
        w = (1.0 / norm(w)) * w;
        out.push_back(vp + d * (std::cos(offset_rad) * u) + d * (std::sin(offset_rad) * w));
    }
    return out;
}

std::pair<ProtocolTranscript, AttackReport> run_with_adversary(const ProtocolConfig& config,
                                                               const AttackSpec& spec) {
    config.validate();
    if (!is_known_strategy(spec.strategy)) {
        std::string names;
        for (const auto& s : attack_registry()) {
            names += names.empty() ? s.name : ", " + s.name;
        }
        throw std::invalid_argument("unknown attack strategy '" + spec.strategy +
                                    "' (known: " + names + ")");
    }
    if (spec.trials < 1) {
        throw std::invalid_argument("AttackSpec: trials must be >= 1");
    }

    if (spec.strategy == "noop") {
        ProtocolTranscript transcript = run_honest(config);
        AttackReport report;
        report.strategy = "noop";
        report.trials = spec.trials;
        for (const auto& rec : transcript.verifiers) {
            report.detection.push_back({rec.id, 0, 0});
        }
        Rng seeds(config.seed);
        for (std::uint64_t trial = 0; trial < spec.trials; ++trial) {
            ProtocolTranscript ts = transcript;
            if (trial > 0) {
                ProtocolConfig cfg = config;
                cfg.seed = seeds.next_u64();
                ts = run_honest(cfg);
            }
            report.outcomes.push_back(ts.overall_accept ? 1 : 0);
            report.successes += ts.overall_accept ? 1 : 0;
            for (std::size_t k = 0; k < ts.verifiers.size(); ++k) {
                report.detection[k].timing_rejects += ts.verifiers[k].timing_ok ? 0 : 1;
                report.detection[k].identity_rejects += ts.verifiers[k].identity_ok ? 0 : 1;
            }
        }
        report.success_probability =
            static_cast<double>(report.successes) / static_cast<double>(report.trials);
        std::tie(report.ci_low, report.ci_high) = wilson_interval(report.successes, report.trials);
        report.theoretical_bound = 1.0;
        report.timing_feasible = true;
        return {std::move(transcript), std::move(report)};
    }

    if (spec.strategy == "estimate") {
        Rng rng(config.seed);
        KeyEstimationResult res = key_estimation_attack(
            config.t, config.T, spec.copies, spec.measurement_grid, spec.trials, rng);
        return {ProtocolTranscript{}, std::move(res.report)};
    }

    std::vector<Vec3> positions;
    if (spec.strategy == "guess") {
        positions = {config.geometry.claimed_position()};
    } else if (spec.strategy == "spoof") {
        if (spec.positions.size() != 1) {
            throw std::invalid_argument("spoof: exactly one adversary position required");
        }
        positions = spec.positions;
    } else {  // collude
        if (spec.auto_place_colluders) {
            positions = construct_feasible_colluders(config.geometry, spec.colluder_offset_rad);
        } else {
            positions = spec.positions;
        }
        if (positions.size() < 2) {
            throw std::invalid_argument("collude: needs at least two positions (or --auto-colluders)");
        }
    }

    const TimingPlan plan = assess_timing(config.geometry, positions);
    ProtocolTranscript transcript = simulate_intercept_round(config, positions, spec.policy, plan);
    AttackReport report =
        run_intercept_trials(config, plan, spec.policy, spec.trials, spec.strategy);
    return {std::move(transcript), std::move(report)};
}

}  // namespace qpv
