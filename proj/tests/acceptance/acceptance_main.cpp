// Acceptance suite: every release gate in one binary, one PASS/FAIL line
// per criterion. Exits with the number of failed criteria.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qpv/adversary.hpp"
#include "qpv/json_io.hpp"
#include "qpv/protocol.hpp"

namespace fs = std::filesystem;
using namespace qpv;

namespace {

constexpr double kPi = std::numbers::pi;
const std::string kCli = QPV_CLI_PATH;
const std::string kScenarios = QPV_SCENARIO_DIR;

int run_cli(const std::string& args) {
    const std::string cmd = kCli + " " + args + " >/dev/null 2>&1";
    return WEXITSTATUS(std::system(cmd.c_str()));
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) return "<missing: " + p.string() + ">";
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

struct Scratch {
    fs::path path;
    Scratch() {
        path = fs::temp_directory_path() / ("qpv_acceptance_" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~Scratch() { fs::remove_all(path); }
};

// 1. Honest completeness: 1000 seeded runs accept with exact round trips.
bool criterion_honest_completeness(std::string& detail) {
    const auto start = std::chrono::steady_clock::now();
    const double d = 3.0e5;
    const double expected_rt = 2.0 * d / kSpeedOfLight;  // direct arithmetic
    ProtocolConfig config;
    config.T = 32;
    config.t = 10;
    config.message_lengths = {16};
    config.geometry = make_ring_scenario(3, d);

    std::uint64_t accepts = 0;
    double worst_rel = 0.0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        config.seed = seed;
        const ProtocolTranscript ts = run_honest(config);
        accepts += ts.overall_accept ? 1 : 0;
        for (const auto& rec : ts.verifiers) {
            if (!rec.observed_round_trip_s) return false;
            worst_rel = std::max(worst_rel,
                                 std::abs(*rec.observed_round_trip_s - expected_rt) / expected_rt);
        }
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ostringstream os;
    os << accepts << "/1000 accepts, max relative rt error " << worst_rel << ", " << secs << " s";
    detail = os.str();
    return accepts == 1000 && worst_rel < 1e-12 && secs < 10.0;
}

// 2. Cipher round trip: 10,000 random messages across (T, t, r) grids.
bool criterion_cipher_round_trip(std::string& detail) {
    Rng rng(20260808);
    const int Ts[] = {1, 2, 8, 32, 64};
    const int ts[] = {1, 2, 6, 10, 16};
    std::uint64_t total = 0, errors = 0;
    for (int T : Ts) {
        for (int t : ts) {
            const std::size_t rs[] = {1, static_cast<std::size_t>((T + 1) / 2),
                                      static_cast<std::size_t>(T)};
            for (std::size_t r : rs) {
                for (int rep = 0; rep < 140; ++rep) {
                    Rng kr = rng.split();
                    Rng mr = rng.split();
                    Rng dr = rng.split();
                    const auto [key, pk] = keygen(T, t, kr);
                    const Message m = Message::random(r, mr);
                    const Message decoded = decrypt_and_decode(encrypt(pk, m), key, r, dr);
                    ++total;
                    errors += (decoded == m) ? 0 : 1;
                }
            }
        }
    }
    std::ostringstream os;
    os << errors << " errors over " << total << " messages";
    detail = os.str();
    return total >= 10000 && errors == 0;
}

// 3. Neighbor distance equals sin(pi/2^t) for t = 1..20, strictly falling.
bool criterion_neighbor_distance(std::string& detail) {
    Rng rng(7);
    double prev = 2.0;
    double worst = 0.0;
    for (int t = 1; t <= 20; ++t) {
        const double step = theta_step(t).radians;
        const double closed_form = std::sin(step);
        // State route, stable form: for unit vectors,
        // sqrt(1 - <a|b>^2) == |a0 b1 - a1 b0|.
        const std::uint64_t samples[] = {0, 1, rng.uniform_below(std::uint64_t{1} << t),
                                         (std::uint64_t{1} << t) - 1};
        for (std::uint64_t s : samples) {
            const QubitState a = QubitState::at_angle(Angle{static_cast<double>(s) * step});
            const QubitState b = QubitState::at_angle(Angle{static_cast<double>(s + 1) * step});
            const double dist = std::abs(a.a0 * b.a1 - a.a1 * b.a0);
            worst = std::max(worst, std::abs(dist - closed_form));
            if (t <= 12) {
                // The literal sqrt(1 - overlap^2) is well-conditioned here.
                const double ov = overlap(a, b);
                worst = std::max(worst, std::abs(std::sqrt(1.0 - ov * ov) - closed_form));
            }
        }
        if (!(neighbor_distance(t) == closed_form)) return false;
        if (!(closed_form < prev)) return false;
        prev = closed_form;
    }
    std::ostringstream os;
    os << "max |state route - sin(pi/2^t)| = " << worst;
    detail = os.str();
    return worst < 1e-12;
}

// 4. Perfect ciphertext secrecy: rho_0 = rho_1, Helstrom 1/2, per-bit 1/2.
bool criterion_perfect_secrecy(std::string& detail) {
    double worst_td = 0.0, worst_hel = 0.0;
    for (int t = 1; t <= 12; ++t) {
        const DensityMatrix2 rho0 = cipher_mixtures(t, 0);
        const DensityMatrix2 rho1 = cipher_mixtures(t, 1);
        const double td = trace_distance(rho0, rho1);
        worst_td = std::max(worst_td, td);
        worst_hel = std::max(worst_hel, std::abs(helstrom_guess_bound(rho0, rho1) - 0.5));
    }

    Rng rng(314159);
    const std::uint64_t n = 100000;
    const double sigma = std::sqrt(static_cast<double>(n) * 0.25);
    double worst_bias = 0.0;
    for (int g = 0; g < 16; ++g) {
        const double success = per_bit_guess_success(10, Angle{kPi * g / 16.0}, n, rng);
        worst_bias = std::max(worst_bias, std::abs(success - 0.5) * static_cast<double>(n));
    }
    std::ostringstream os;
    os << "max trace distance " << worst_td << ", max |helstrom-0.5| " << worst_hel
       << ", worst per-bit deviation " << worst_bias / sigma << " sigma";
    detail = os.str();
    return worst_td < 1e-12 && worst_hel < 1e-12 && worst_bias <= kMonteCarloSigmas * sigma;
}

// 5. Guess-attack acceptance follows the binomial law at 8 message bits.
bool criterion_guess_acceptance(std::string& detail) {
    ProtocolConfig config;
    config.T = 8;
    config.t = 6;
    config.message_lengths = {4};
    config.geometry = make_ring_scenario(2, 3.0e5);
    config.seed = 424242;
    AttackSpec spec;
    spec.strategy = "guess";
    spec.trials = 100000;
    const AttackReport report = run_with_adversary(config, spec).second;
    const double p = std::exp2(-8.0);
    const double n = static_cast<double>(report.trials);
    const double sigma = std::sqrt(n * p * (1.0 - p));
    const double deviation = std::abs(static_cast<double>(report.successes) - p * n);
    std::ostringstream os;
    os << report.successes << "/" << report.trials << " accepted, expectation " << p * n
       << ", deviation " << deviation / sigma << " sigma";
    detail = os.str();
    return report.timing_feasible && deviation <= kMonteCarloSigmas * sigma;
}

// 6. Holevo ceiling: one bit max per outcome; sampled attack never beats the
// enumerated optimum at t <= 4.
bool criterion_holevo_ceiling(std::string& detail) {
    Rng rng(555);
    double max_mi = 0.0;
    double worst_sigma = 0.0;
    for (int t = 1; t <= 4; ++t) {
        const KeyEstimationResult res = key_estimation_attack(t, 8, 1, 16, 3000, rng);
        for (const auto& est : res.per_angle) {
            if (est.empirical_mi_bits > 1.0 || est.exact_mi_bits > 1.0 + 1e-12) return false;
            // Plug-in MI bias + noise at 24000 samples stays within 0.03.
            if (est.empirical_mi_bits > est.exact_mi_bits + 0.03) return false;
            max_mi = std::max(max_mi, est.empirical_mi_bits);
            // Sampled success agrees with the enumerated value...
            const double n = static_cast<double>(est.samples);
            const double sd =
                std::max(1e-9, std::sqrt(n * est.exact_success * (1.0 - est.exact_success)));
            const double dev =
                std::abs(static_cast<double>(est.correct) - est.exact_success * n) / sd;
            worst_sigma = std::max(worst_sigma, dev);
            if (dev > 3.5) return false;
        }
        // ...and the best angle cannot beat the enumerated grid optimum.
        const double n = 3000.0 * 8.0;
        const double slack =
            kMonteCarloSigmas * std::sqrt(res.grid_optimal_exact *
                                          (1.0 - res.grid_optimal_exact) / n);
        if (res.best_success > res.grid_optimal_exact + slack + 1e-12) return false;
    }
    std::ostringstream os;
    os << "max empirical MI " << max_mi << " bits, worst success deviation " << worst_sigma
       << " sigma";
    detail = os.str();
    return true;
}

// 7. Timing soundness: every displaced adversary is caught by one of four
// non-coplanar verifiers; the undisplaced one passes timing.
bool criterion_timing_soundness(std::string& detail) {
    ProtocolConfig config;
    config.T = 4;
    config.t = 4;
    config.message_lengths = {2};
    config.geometry = make_tetrahedron_scenario(3.0e5);
    config.seed = 5;

    std::vector<Vec3> directions;
    for (int x = -1; x <= 1; ++x) {
        for (int y = -1; y <= 1; ++y) {
            for (int z = -1; z <= 1; ++z) {
                if (x == 0 && y == 0 && z == 0) continue;
                const double nrm = std::sqrt(static_cast<double>(x * x + y * y + z * z));
                directions.push_back({x / nrm, y / nrm, z / nrm});
            }
        }
    }

    int tested = 0;
    for (double offset : {10.0, 100.0, 1000.0, 10000.0}) {
        for (const Vec3& dir : directions) {
            const AttackReport report =
                spoof_position_attack(config, offset * dir, GuessPolicy{}, 1);
            ++tested;
            if (report.timing_feasible) {
                std::ostringstream os;
                os << "undetected at offset " << offset << " m, direction (" << dir.x << ","
                   << dir.y << "," << dir.z << ")";
                detail = os.str();
                return false;
            }
        }
    }
    const AttackReport at_claim = spoof_position_attack(
        config, config.geometry.claimed_position(), GuessPolicy{}, 1);
    std::ostringstream os;
    os << tested << "/" << tested << " displaced positions detected; offset 0 timing "
       << (at_claim.timing_feasible ? "accepted" : "rejected");
    detail = os.str();
    return at_claim.timing_feasible;
}

// 8. literal-pi encoding decodes to all zeros, so any 1 bit breaks identity.
bool criterion_literal_pi(std::string& detail, const fs::path& scratch) {
    // Library route across a few seeds.
    for (std::uint64_t seed : {1ull, 2ull, 3ull, 4ull}) {
        ProtocolConfig config;
        config.T = 16;
        config.t = 8;
        config.message_lengths = {8};
        config.geometry = make_ring_scenario(3, 3.0e5);
        config.seed = seed;
        config.convention = CipherConvention::literal_pi;
        const ProtocolTranscript ts = run_honest(config);
        for (const auto& rec : ts.verifiers) {
            if (!rec.response) return false;
            if (!rec.response->all_zero()) return false;
            if (rec.identity_ok != rec.sent.all_zero()) return false;
        }
    }

    // CLI route with the documented flag.
    const fs::path dir = scratch / "literal_pi";
    const int rc = run_cli("run --scenario " + kScenarios + "/triangle_300km.json" +
                           " --T 16 --t 8 --r 8 --seed 11 --literal-pi --out " + dir.string());
    if (rc != 1) {
        detail = "CLI exit code " + std::to_string(rc) + ", expected 1";
        return false;
    }
    const auto transcript = nlohmann::json::parse(slurp(dir / "transcript.json"));
    bool any_one_sent = false;
    for (const auto& v : transcript.at("verifiers")) {
        for (const auto& bit : v.at("response")) {
            if (bit.get<int>() != 0) return false;
        }
        for (const auto& bit : v.at("message")) {
            any_one_sent = any_one_sent || bit.get<int>() == 1;
        }
    }
    detail = "all responses decode to zeros; overall verdict reject";
    return any_one_sent && transcript.at("overall_accept") == false;
}

// 9. Determinism: identical config + seed give byte-identical outputs.
bool criterion_determinism(std::string& detail, const fs::path& scratch) {
    const std::string run_args = "run --scenario " + kScenarios + "/triangle_300km.json" +
                                 " --T 32 --t 10 --r 16 --seed 99 --out ";
    const fs::path ra = scratch / "det_run_a";
    const fs::path rb = scratch / "det_run_b";
    if (run_cli(run_args + ra.string()) != 0) return false;
    if (run_cli(run_args + rb.string()) != 0) return false;
    for (const char* name : {"transcript.json", "events.jsonl", "summary.csv"}) {
        if (slurp(ra / name) != slurp(rb / name)) {
            detail = std::string("run output differs: ") + name;
            return false;
        }
    }

    const std::string atk_args =
        "attack --strategy guess --trials 5000 --T 8 --t 6 --r 4 --seed 13 --scenario " +
        kScenarios + "/triangle_300km.json --out ";
    const fs::path aa = scratch / "det_atk_a";
    const fs::path ab = scratch / "det_atk_b";
    if (run_cli(atk_args + aa.string()) != 0) return false;
    if (run_cli(atk_args + ab.string()) != 0) return false;
    for (const char* name : {"attack_report.json", "attack_report.csv", "transcript.json"}) {
        if (slurp(aa / name) != slurp(ab / name)) {
            detail = std::string("attack output differs: ") + name;
            return false;
        }
    }
    detail = "transcripts, event logs, summaries and reports identical byte for byte";
    return true;
}

}  // namespace

int main() {
    Scratch scratch;
    struct Criterion {
        std::string name;
        std::function<bool(std::string&)> run;
    };
    const std::vector<Criterion> criteria = {
        {"honest completeness (1000 runs, exact 2d/c, <10 s)", criterion_honest_completeness},
        {"cipher round trip (10k messages, zero errors)", criterion_cipher_round_trip},
        {"neighbor-distance law (t=1..20, 1e-12)", criterion_neighbor_distance},
        {"ciphertext perfect secrecy (mixtures, Helstrom, per-bit 1/2)",
         criterion_perfect_secrecy},
        {"guess-attack acceptance (8 bits -> 2^-8 within 3 sigma)", criterion_guess_acceptance},
        {"Holevo ceiling (MI <= 1 bit, sampled <= enumerated optimum)",
         criterion_holevo_ceiling},
        {"timing soundness (10 m..10 km offsets always detected)", criterion_timing_soundness},
        {"literal-pi demonstration (decodes to zeros, rejects)",
         [&](std::string& d) { return criterion_literal_pi(d, scratch.path); }},
        {"determinism (byte-identical reruns)",
         [&](std::string& d) { return criterion_determinism(d, scratch.path); }},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        std::string detail;
        bool ok = false;
        try {
            ok = criteria[i].run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        std::cout << (ok ? "PASS" : "FAIL") << "  " << (i + 1) << ". " << criteria[i].name;
        if (!detail.empty()) {
            std::cout << "  [" << detail << "]";
        }
        std::cout << "\n";
        failures += ok ? 0 : 1;
    }
    std::cout << (failures == 0 ? "all criteria passed" : "criteria failed: ") << (failures == 0 ? "" : std::to_string(failures))
              << std::endl;
    return failures;
}
