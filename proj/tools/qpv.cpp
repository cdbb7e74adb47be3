// Command-line front end: keygen | run | attack | sweep.
// Exit codes: 0 success (run: protocol accepted), 1 protocol rejected,
// 2 usage or validation error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "qpv/adversary.hpp"
#include "qpv/hash.hpp"
#include "qpv/json_io.hpp"
#include "qpv/manifest.hpp"
#include "qpv/sweep.hpp"

namespace fs = std::filesystem;
using namespace qpv;

namespace {

constexpr int kExitAccept = 0;
constexpr int kExitReject = 1;
constexpr int kExitUsage = 2;

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open for writing: " + path.string());
    }
    out << content;
    if (!out) {
        throw std::runtime_error("write failed: " + path.string());
    }
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open: " + path.string());
    }
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// "1:4" -> 1,2,3,4 ; "1,2,8" -> as written ; mixes allowed.
template <typename Int>
std::vector<Int> parse_int_list(const std::string& text) {
    std::vector<Int> out;
    std::istringstream is(text);
    std::string part;
    while (std::getline(is, part, ',')) {
        const auto colon = part.find(':');
        if (colon == std::string::npos) {
            out.push_back(static_cast<Int>(std::stoll(part)));
        } else {
            const long long lo = std::stoll(part.substr(0, colon));
            const long long hi = std::stoll(part.substr(colon + 1));
            for (long long v = lo; v <= hi; ++v) {
                out.push_back(static_cast<Int>(v));
            }
        }
    }
    if (out.empty()) {
        throw CLI::ValidationError("empty list");
    }
    return out;
}

Vec3 parse_vec3(const std::string& text) {
    std::istringstream is(text);
    std::string part;
    std::vector<double> vals;
    while (std::getline(is, part, ',')) {
        vals.push_back(std::stod(part));
    }
    if (vals.size() != 3) {
        throw CLI::ValidationError("position must be x,y,z");
    }
    return {vals[0], vals[1], vals[2]};
}

fs::path out_dir_default() {
    if (const char* env = std::getenv("QPV_OUT_DIR")) {
        return env;
    }
    return ".";
}

ScenarioGeometry load_scenario_or_default(const std::string& scenario_path, double epsilon,
                                          bool epsilon_set) {
    if (scenario_path.empty()) {
        return make_ring_scenario(3, 3.0e5, epsilon_set ? epsilon : kDefaultTimingToleranceS);
    }
    ScenarioGeometry geo = parse_scenario(read_file(scenario_path));
    if (!epsilon_set) {
        return geo;
    }
    // Command-line tolerance overrides the scenario file.
    std::vector<Station> stations = geo.stations();
    return ScenarioGeometry(std::move(stations), geo.claimed_position(), geo.equidistant_mode(),
                            epsilon);
}

void write_manifest(const fs::path& dir, const std::string& command,
                    const std::string& config_hash, std::uint64_t seed,
                    const std::vector<std::string>& outputs) {
    RunManifest m;
    m.command = command;
    m.config_hash = config_hash;
    m.seed = seed;
    m.created_utc = current_utc_iso8601();
    m.outputs = outputs;
    write_file(dir / "manifest.json", dump_json(m));
}

int cmd_keygen(int T, int t, std::uint64_t seed, const fs::path& dir) {
    Rng rng(seed);
    const auto [key, pk] = keygen(T, t, rng);
    write_file(dir / "private_key.json", dump_json(key));
    write_file(dir / "public_key.json", dump_json(pk));
    std::ostringstream canon;
    canon << "qpv.keygen/1;T=" << T << ";t=" << t << ";seed=" << seed;
    write_manifest(dir, "keygen", to_hex64(fnv1a64(canon.str())), seed,
                   {"private_key.json", "public_key.json"});
    std::cout << "keygen: wrote private_key.json and public_key.json under " << dir.string()
              << "\n";
    return kExitAccept;
}

int cmd_run(const ProtocolConfig& config, const fs::path& dir) {
    const ProtocolTranscript ts = run_honest(config);
    write_file(dir / "transcript.json", dump_transcript_json(ts, config));
    write_file(dir / "events.jsonl",
               dump_event_log_jsonl(ts.key_distribution_log, "key_distribution") +
                   dump_event_log_jsonl(ts.challenge_log, "challenge"));
    write_file(dir / "summary.csv",
               transcript_summary_csv_header() + transcript_summary_csv_row(ts, config));
    write_manifest(dir, "run", config_hash_hex(config), config.seed,
                   {"transcript.json", "events.jsonl", "summary.csv"});

    std::cout << (ts.overall_accept ? "ACCEPT" : "REJECT");
    for (const auto& rec : ts.verifiers) {
        std::cout << "  " << rec.id << ": identity=" << (rec.identity_ok ? "ok" : "FAIL")
                  << " timing=" << (rec.timing_ok ? "ok" : "FAIL");
        if (rec.observed_round_trip_s) {
            std::cout << " rt=" << format_double15(*rec.observed_round_trip_s) << "s";
        } else {
            std::cout << " rt=timeout";
        }
    }
    std::cout << "\n";
    return ts.overall_accept ? kExitAccept : kExitReject;
}

int cmd_attack(const ProtocolConfig& config, const AttackSpec& spec, const fs::path& dir) {
    const auto [transcript, report] = run_with_adversary(config, spec);
    std::vector<std::string> outputs = {"attack_report.json", "attack_report.csv"};
    write_file(dir / "attack_report.json", dump_attack_report_json(report, config));
    write_file(dir / "attack_report.csv",
               attack_report_csv_header() + attack_report_csv_row(report, config));
    if (!transcript.verifiers.empty()) {
        write_file(dir / "transcript.json", dump_transcript_json(transcript, config));
        outputs.push_back("transcript.json");
    }
    std::ostringstream canon;
    canon << dump_config_json(config) << ";strategy=" << spec.strategy
          << ";trials=" << spec.trials << ";copies=" << spec.copies
          << ";grid=" << spec.measurement_grid;
    write_manifest(dir, "attack", to_hex64(fnv1a64(canon.str())), config.seed, outputs);

    std::cout << "attack " << spec.strategy << ": success " << report.successes << "/"
              << report.trials << " (p=" << format_double15(report.success_probability);
    if (report.theoretical_bound) {
        std::cout << ", bound=" << format_double15(*report.theoretical_bound);
    }
    std::cout << ", timing " << (report.timing_feasible ? "feasible" : "infeasible") << ")\n";
    return kExitAccept;
}

int cmd_sweep(const SweepGrid& grid, unsigned jobs, const fs::path& csv_path) {
    std::map<std::string, SweepRow> existing;
    if (fs::exists(csv_path)) {
        existing = parse_sweep_csv(read_file(csv_path));
    }
    const std::vector<SweepRow> rows = run_sweep(grid, jobs, existing);
    std::string csv = sweep_csv_header();
    for (const SweepRow& row : rows) {
        csv += sweep_csv_row(row);
    }
    write_file(csv_path, csv);
    std::ostringstream canon;
    canon << "qpv.sweep/1;metric=" << grid.metric << ";seed=" << grid.seed;
    RunManifest m;
    m.command = "sweep";
    m.config_hash = to_hex64(fnv1a64(canon.str()));
    m.seed = grid.seed;
    m.created_utc = current_utc_iso8601();
    m.outputs = {csv_path.filename().string()};
    write_file(csv_path.string() + ".manifest.json", dump_json(m));
    std::cout << "sweep: wrote " << rows.size() << " rows to " << csv_path.string() << "\n";
    return kExitAccept;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rotation-encoded quantum position verification laboratory"};
    app.require_subcommand(1);

    // keygen ----------------------------------------------------------------
    auto* keygen_cmd = app.add_subcommand("keygen", "Generate a private/public key pair");
    int kg_T = 32, kg_t = 10;
    std::uint64_t kg_seed = 0;
    std::string kg_out;
    keygen_cmd->add_option("--T", kg_T, "Register length (qubits)")->check(CLI::PositiveNumber);
    keygen_cmd->add_option("--t", kg_t, "Precision exponent")->check(CLI::Range(1, 62));
    keygen_cmd->add_option("--seed", kg_seed, "RNG seed");
    keygen_cmd->add_option("--out", kg_out, "Output directory (default $QPV_OUT_DIR or .)");

    // shared protocol options -------------------------------------------------
    struct RunOpts {
        std::string scenario;
        int T = 32, t = 10;
        std::string r = "16";
        std::uint64_t seed = 0;
        bool literal_pi = false;
        double epsilon = kDefaultTimingToleranceS;
        bool epsilon_set = false;
        double depolarize = 0.0;
        std::size_t error_budget = 0;
        std::string out;
    };

    auto add_protocol_options = [](CLI::App* cmd, RunOpts& opts) {
        cmd->add_option("--scenario", opts.scenario, "Scenario JSON path (default: 3 equidistant verifiers at 3e5 m)");
        cmd->add_option("--T", opts.T, "Register length (qubits)")->check(CLI::PositiveNumber);
        cmd->add_option("--t", opts.t, "Precision exponent")->check(CLI::Range(1, 62));
        cmd->add_option("--r", opts.r, "Message lengths: one value or comma list per verifier");
        cmd->add_option("--seed", opts.seed, "RNG seed");
        cmd->add_flag("--literal-pi", opts.literal_pi,
                      "Encode bit 1 as a pi rotation (sign flip only; decodes to all zeros)");
        cmd->add_option("--epsilon", opts.epsilon, "Timing tolerance in seconds")
            ->each([&opts](const std::string&) { opts.epsilon_set = true; });
        cmd->add_option("--depolarize", opts.depolarize,
                        "Per-qubit transit scramble probability (honest channel plumbing)")
            ->check(CLI::Range(0.0, 1.0));
        cmd->add_option("--error-budget", opts.error_budget,
                        "Wrong bits a verifier tolerates before rejecting identity");
        cmd->add_option("--out", opts.out, "Output directory (default $QPV_OUT_DIR or .)");
    };

    // run ---------------------------------------------------------------------
    auto* run_cmd = app.add_subcommand("run", "Execute one honest verification round");
    RunOpts run_opts;
    add_protocol_options(run_cmd, run_opts);

    // attack --------------------------------------------------------------------
    auto* attack_cmd = app.add_subcommand("attack", "Run an adversary strategy");
    RunOpts atk_opts;
    add_protocol_options(attack_cmd, atk_opts);
    std::string atk_strategy;
    std::uint64_t atk_trials = 10000;
    std::vector<std::string> atk_positions;
    bool atk_auto_colluders = false;
    double atk_colluder_offset = 0.3;
    int atk_grid = 16;
    int atk_copies = 1;
    std::string atk_policy = "uniform";
    double atk_angle = 0.0;
    attack_cmd->add_option("--strategy", atk_strategy, "Attack strategy name")->required();
    attack_cmd->add_option("--trials", atk_trials, "Trial count")->check(CLI::PositiveNumber);
    attack_cmd->add_option("--pos", atk_positions,
                           "Adversary position x,y,z in metres (repeat for colluders)");
    attack_cmd->add_flag("--auto-colluders", atk_auto_colluders,
                         "Place one timing-feasible colluder per verifier");
    attack_cmd->add_option("--colluder-offset", atk_colluder_offset,
                           "Angular displacement (rad) for --auto-colluders");
    attack_cmd->add_option("--grid", atk_grid, "Measurement basis grid resolution")
        ->check(CLI::Range(2, 4096));
    attack_cmd->add_option("--copies", atk_copies, "Public-key copies per qubit (estimate)")
        ->check(CLI::Range(1, 64));
    attack_cmd->add_option("--policy", atk_policy, "Response policy: uniform | measure")
        ->check(CLI::IsMember({"uniform", "measure"}));
    attack_cmd->add_option("--angle", atk_angle, "Measurement angle (rad) for --policy measure");

    // sweep -----------------------------------------------------------------------
    auto* sweep_cmd = app.add_subcommand("sweep", "Cross-product experiment grid to CSV");
    std::string sw_metric = "honest";
    std::string sw_strategy = "guess";
    std::string sw_T = "32", sw_t = "10", sw_r = "16", sw_N = "3", sw_k = "1";
    std::uint64_t sw_trials = 1000, sw_seed = 0;
    double sw_d = 3.0e5;
    double sw_epsilon = kDefaultTimingToleranceS;
    int sw_grid = 16;
    unsigned sw_jobs = std::thread::hardware_concurrency();
    std::string sw_out;
    sweep_cmd->add_option("--metric", sw_metric,
                          "neighbor-distance | honest | attack | estimate")
        ->required();
    sweep_cmd->add_option("--strategy", sw_strategy, "Attack strategy (metric=attack)");
    sweep_cmd->add_option("--T", sw_T, "T values, e.g. 16,32 or 8:64");
    sweep_cmd->add_option("--t", sw_t, "t values, e.g. 1:10");
    sweep_cmd->add_option("--r", sw_r, "Message lengths");
    sweep_cmd->add_option("--N", sw_N, "Verifier counts");
    sweep_cmd->add_option("--k", sw_k, "Copy counts (metric=estimate)");
    sweep_cmd->add_option("--trials", sw_trials, "Trials per cell")->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--seed", sw_seed, "Base seed");
    sweep_cmd->add_option("--d", sw_d, "Verifier distance in metres");
    sweep_cmd->add_option("--epsilon", sw_epsilon, "Timing tolerance in seconds");
    sweep_cmd->add_option("--grid", sw_grid, "Basis grid (metric=estimate)")
        ->check(CLI::Range(2, 4096));
    sweep_cmd->add_option("--jobs", sw_jobs, "Worker threads")->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--out", sw_out, "Output CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (keygen_cmd->parsed()) {
            const fs::path dir = kg_out.empty() ? out_dir_default() : fs::path(kg_out);
            return cmd_keygen(kg_T, kg_t, kg_seed, dir);
        }

        if (run_cmd->parsed() || attack_cmd->parsed()) {
            RunOpts& opts = run_cmd->parsed() ? run_opts : atk_opts;
            ProtocolConfig config;
            config.T = opts.T;
            config.t = opts.t;
            config.message_lengths = parse_int_list<std::size_t>(opts.r);
            config.geometry =
                load_scenario_or_default(opts.scenario, opts.epsilon, opts.epsilon_set);
            config.seed = opts.seed;
            config.convention = opts.literal_pi ? CipherConvention::literal_pi
                                                : CipherConvention::quarter_turn;
            config.depolarizing_probability = opts.depolarize;
            config.identity_error_budget = opts.error_budget;
            config.validate();
            const fs::path dir = opts.out.empty() ? out_dir_default() : fs::path(opts.out);

            if (run_cmd->parsed()) {
                return cmd_run(config, dir);
            }

            AttackSpec spec;
            spec.strategy = atk_strategy;
            spec.trials = atk_trials;
            for (const auto& p : atk_positions) {
                spec.positions.push_back(parse_vec3(p));
            }
            spec.auto_place_colluders = atk_auto_colluders;
            spec.colluder_offset_rad = atk_colluder_offset;
            spec.measurement_grid = atk_grid;
            spec.copies = atk_copies;
            if (atk_policy == "measure") {
                spec.policy.kind = GuessPolicy::Kind::measure;
                spec.policy.measurement_angle = Angle{atk_angle};
            }
            if (!is_known_strategy(spec.strategy)) {
                std::cerr << "unknown strategy '" << spec.strategy << "'; available:\n";
                for (const auto& info : attack_registry()) {
                    std::cerr << "  " << info.name << " - " << info.summary << "\n";
                }
                return kExitUsage;
            }
            return cmd_attack(config, spec, dir);
        }

        if (sweep_cmd->parsed()) {
            SweepGrid grid;
            grid.metric = sw_metric;
            grid.strategy = sw_strategy;
            grid.T = parse_int_list<int>(sw_T);
            grid.t = parse_int_list<int>(sw_t);
            grid.r = parse_int_list<std::size_t>(sw_r);
            grid.N = parse_int_list<int>(sw_N);
            grid.copies = parse_int_list<int>(sw_k);
            grid.trials = sw_trials;
            grid.seed = sw_seed;
            grid.distance_m = sw_d;
            grid.timing_tolerance_s = sw_epsilon;
            grid.measurement_grid = sw_grid;
            return cmd_sweep(grid, std::max(1u, sw_jobs), fs::path(sw_out));
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
