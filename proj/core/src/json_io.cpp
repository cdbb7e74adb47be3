#include "qpv/json_io.hpp"

#include <cstdio>
#include <stdexcept>

#include <json.hpp>

#include "qpv/hash.hpp"

namespace qpv {

using ordered_json = nlohmann::ordered_json;

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

std::string format_double15(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.15g", value);
    return buf;
}

namespace {

double number_field(const ordered_json& j) {
    if (j.is_string()) {
        return std::stod(j.get<std::string>());
    }
    return j.get<double>();
}

ordered_json parse_checked(std::string_view text, const char* expected_schema) {
    ordered_json j = ordered_json::parse(text);
    if (!j.is_object() || !j.contains("schema") || j["schema"] != expected_schema) {
        throw std::invalid_argument(std::string("expected document with schema ") +
                                    expected_schema);
    }
    return j;
}

const char* custody_tag(Custody c) {
    return c == Custody::owner ? "owner" : "bearer";
}

Custody parse_custody(const std::string& tag) {
    if (tag == "owner") return Custody::owner;
    if (tag == "bearer") return Custody::bearer;
    throw std::invalid_argument("unknown provenance tag: " + tag);
}

ordered_json register_to_json(const std::vector<QubitState>& qubits, Custody custody,
                              const char* kind) {
    ordered_json j;
    j["schema"] = "qpv.register/1";
    j["kind"] = kind;
    j["provenance"] = custody_tag(custody);
    ordered_json amps = ordered_json::array();
    for (const QubitState& q : qubits) {
        amps.push_back({format_double(q.a0), format_double(q.a1)});
    }
    j["amplitudes"] = std::move(amps);
    return j;
}

std::pair<std::vector<QubitState>, Custody> register_from_json(std::string_view text,
                                                               const char* kind) {
    ordered_json j = parse_checked(text, "qpv.register/1");
    if (j.at("kind") != kind) {
        throw std::invalid_argument(std::string("register kind mismatch, expected ") + kind);
    }
    Custody custody = parse_custody(j.at("provenance").get<std::string>());
    std::vector<QubitState> qubits;
    for (const auto& pair : j.at("amplitudes")) {
        qubits.push_back({number_field(pair.at(0)), number_field(pair.at(1))});
    }
    return {std::move(qubits), custody};
}

const char* role_tag(StationRole role) {
    switch (role) {
        case StationRole::verifier: return "verifier";
        case StationRole::prover: return "prover";
        case StationRole::adversary: return "adversary";
    }
    return "verifier";
}

StationRole parse_role(const std::string& tag) {
    if (tag == "verifier") return StationRole::verifier;
    if (tag == "prover") return StationRole::prover;
    if (tag == "adversary") return StationRole::adversary;
    throw std::invalid_argument("unknown station role: " + tag);
}

ordered_json vec3_to_json(const Vec3& v) {
    return {format_double(v.x), format_double(v.y), format_double(v.z)};
}

Vec3 vec3_from_json(const ordered_json& j) {
    if (!j.is_array() || j.size() != 3) {
        throw std::invalid_argument("position must be a 3-element array");
    }
    return {number_field(j[0]), number_field(j[1]), number_field(j[2])};
}

ordered_json scenario_to_json(const ScenarioGeometry& g) {
    ordered_json j;
    j["schema"] = "qpv.scenario/1";
    j["claimed_position_m"] = vec3_to_json(g.claimed_position());
    j["equidistant_mode"] = g.equidistant_mode();
    j["timing_tolerance_s"] = format_double(g.timing_tolerance_s());
    ordered_json stations = ordered_json::array();
    for (const Station& st : g.stations()) {
        ordered_json s;
        s["id"] = st.id;
        s["role"] = role_tag(st.role);
        s["position_m"] = vec3_to_json(st.position);
        s["processing_delay_s"] = format_double(st.processing_delay_s);
        stations.push_back(std::move(s));
    }
    j["stations"] = std::move(stations);
    return j;
}

const char* convention_tag(CipherConvention c) {
    return c == CipherConvention::literal_pi ? "literal_pi" : "quarter_turn";
}

ordered_json config_to_json(const ProtocolConfig& config) {
    ordered_json j;
    j["schema"] = "qpv.config/1";
    j["T"] = config.T;
    j["t"] = config.t;
    ordered_json lens = ordered_json::array();
    for (std::size_t r : config.message_lengths) lens.push_back(r);
    j["message_lengths"] = std::move(lens);
    j["seed"] = std::to_string(config.seed);
    j["convention"] = convention_tag(config.convention);
    j["depolarizing_probability"] = format_double(config.depolarizing_probability);
    j["identity_error_budget"] = config.identity_error_budget;
    j["scenario"] = scenario_to_json(config.geometry);
    return j;
}

ordered_json message_to_json(const Message& m) {
    ordered_json j;
    j["schema"] = "qpv.message/1";
    j["bits"] = m.bits();
    return j;
}

ordered_json optional_time(const std::optional<double>& v) {
    if (!v) return nullptr;
    return format_double(*v);
}

}  // namespace

std::string dump_json(const PrivateKey& key) {
    ordered_json j;
    j["schema"] = "qpv.private_key/1";
    j["t"] = key.precision();
    j["S"] = key.string();
    return j.dump(2) + "\n";
}

PrivateKey parse_private_key(std::string_view text) {
    ordered_json j = parse_checked(text, "qpv.private_key/1");
    return PrivateKey(j.at("t").get<int>(), j.at("S").get<std::vector<std::uint64_t>>());
}

std::string dump_json(const PublicKeyRegister& reg) {
    return register_to_json(detail::RegisterAccess::qubits(reg), reg.custody(), "public_key")
               .dump(2) +
           "\n";
}

PublicKeyRegister parse_public_key_register(std::string_view text) {
    auto [qubits, custody] = register_from_json(text, "public_key");
    return detail::RegisterAccess::make_public_key(std::move(qubits), custody);
}

std::string dump_json(const CipherRegister& reg) {
    return register_to_json(detail::RegisterAccess::qubits(reg), reg.custody(), "cipher").dump(2) +
           "\n";
}

CipherRegister parse_cipher_register(std::string_view text) {
    auto [qubits, custody] = register_from_json(text, "cipher");
    return detail::RegisterAccess::make_cipher(std::move(qubits), custody);
}

std::string dump_json(const Message& m) {
    return message_to_json(m).dump(2) + "\n";
}

Message parse_message(std::string_view text) {
    ordered_json j = parse_checked(text, "qpv.message/1");
    return Message(j.at("bits").get<std::vector<std::uint8_t>>());
}

std::string dump_json(const ScenarioGeometry& geometry) {
    return scenario_to_json(geometry).dump(2) + "\n";
}

ScenarioGeometry parse_scenario(std::string_view text) {
    ordered_json j = parse_checked(text, "qpv.scenario/1");
    std::vector<Station> stations;
    for (const auto& s : j.at("stations")) {
        Station st;
        st.id = s.at("id").get<std::string>();
        st.role = parse_role(s.value("role", std::string("verifier")));
        st.position = vec3_from_json(s.at("position_m"));
        if (s.contains("processing_delay_s")) {
            st.processing_delay_s = number_field(s["processing_delay_s"]);
        }
        stations.push_back(std::move(st));
    }
    const Vec3 claimed = vec3_from_json(j.at("claimed_position_m"));
    const bool equidistant = j.value("equidistant_mode", false);
    double tolerance = kDefaultTimingToleranceS;
    if (j.contains("timing_tolerance_s")) {
        tolerance = number_field(j["timing_tolerance_s"]);
    }
    return ScenarioGeometry(std::move(stations), claimed, equidistant, tolerance);
}

std::string dump_config_json(const ProtocolConfig& config) {
    return config_to_json(config).dump(2) + "\n";
}

std::string config_hash_hex(const ProtocolConfig& config) {
    return to_hex64(fnv1a64(dump_config_json(config)));
}

std::string dump_transcript_json(const ProtocolTranscript& transcript,
                                 const ProtocolConfig& config) {
    ordered_json j;
    j["schema"] = "qpv.transcript/1";
    j["config_hash"] = config_hash_hex(config);
    j["config"] = config_to_json(config);
    j["overall_accept"] = transcript.overall_accept;
    ordered_json verifiers = ordered_json::array();
    for (const VerifierRecord& rec : transcript.verifiers) {
        ordered_json v;
        v["id"] = rec.id;
        v["message"] = rec.sent.bits();
        v["emit_time_s"] = format_double(rec.emit_time_s);
        v["expected_round_trip_s"] = format_double(rec.expected_round_trip_s);
        v["response"] = rec.response ? ordered_json(rec.response->bits()) : ordered_json(nullptr);
        v["receipt_time_s"] = optional_time(rec.receipt_time_s);
        v["observed_round_trip_s"] = optional_time(rec.observed_round_trip_s);
        v["identity_ok"] = rec.identity_ok;
        v["timing_ok"] = rec.timing_ok;
        v["timed_out"] = !rec.response.has_value();
        verifiers.push_back(std::move(v));
    }
    j["verifiers"] = std::move(verifiers);
    return j.dump(2) + "\n";
}

std::string transcript_summary_csv_header() {
    return "config_hash,seed,N,T,t,r_total,overall_accept,round_trip_min_s,round_trip_max_s\n";
}

std::string transcript_summary_csv_row(const ProtocolTranscript& transcript,
                                       const ProtocolConfig& config) {
    double rt_min = 0.0, rt_max = 0.0;
    bool first = true;
    for (const VerifierRecord& rec : transcript.verifiers) {
        if (!rec.observed_round_trip_s) continue;
        const double rt = *rec.observed_round_trip_s;
        if (first || rt < rt_min) rt_min = rt;
        if (first || rt > rt_max) rt_max = rt;
        first = false;
    }
    std::string row = config_hash_hex(config);
    row += "," + std::to_string(config.seed);
    row += "," + std::to_string(transcript.verifiers.size());
    row += "," + std::to_string(config.T);
    row += "," + std::to_string(config.t);
    row += "," + std::to_string(config.total_message_bits());
    row += transcript.overall_accept ? ",1" : ",0";
    row += "," + (first ? std::string("") : format_double(rt_min));
    row += "," + (first ? std::string("") : format_double(rt_max));
    return row + "\n";
}

std::string dump_attack_report_json(const AttackReport& report, const ProtocolConfig& config) {
    ordered_json j;
    j["schema"] = "qpv.attack_report/1";
    j["config_hash"] = config_hash_hex(config);
    j["strategy"] = report.strategy;
    j["trials"] = report.trials;
    j["successes"] = report.successes;
    j["success_probability"] = format_double(report.success_probability);
    j["ci_low"] = format_double(report.ci_low);
    j["ci_high"] = format_double(report.ci_high);
    j["theoretical_bound"] =
        report.theoretical_bound ? ordered_json(format_double(*report.theoretical_bound))
                                 : ordered_json(nullptr);
    j["timing_feasible"] = report.timing_feasible;
    ordered_json detection = ordered_json::array();
    for (const VerifierDetection& d : report.detection) {
        ordered_json v;
        v["id"] = d.id;
        v["timing_rejects"] = d.timing_rejects;
        v["identity_rejects"] = d.identity_rejects;
        detection.push_back(std::move(v));
    }
    j["detection"] = std::move(detection);
    ordered_json metrics;
    for (const auto& [k, v] : report.metrics) {
        metrics[k] = format_double(v);
    }
    j["metrics"] = std::move(metrics);
    std::string outcomes;
    outcomes.reserve(report.outcomes.size());
    for (std::uint8_t o : report.outcomes) outcomes.push_back(o ? '1' : '0');
    j["per_trial_outcomes"] = std::move(outcomes);
    return j.dump(2) + "\n";
}

std::string attack_report_csv_header() {
    return "config_hash,strategy,trials,successes,success_probability,ci_low,ci_high,"
           "theoretical_bound,timing_feasible\n";
}

std::string attack_report_csv_row(const AttackReport& report, const ProtocolConfig& config) {
    std::string row = config_hash_hex(config);
    row += "," + report.strategy;
    row += "," + std::to_string(report.trials);
    row += "," + std::to_string(report.successes);
    row += "," + format_double(report.success_probability);
    row += "," + format_double(report.ci_low);
    row += "," + format_double(report.ci_high);
    row += ",";
    if (report.theoretical_bound) row += format_double(*report.theoretical_bound);
    row += report.timing_feasible ? ",1" : ",0";
    return row + "\n";
}

std::string dump_event_log_jsonl(const std::vector<SignalEvent>& log, std::string_view phase) {
    std::string out;
    for (const SignalEvent& ev : log) {
        ordered_json j;
        j["phase"] = std::string(phase);
        j["seq"] = ev.seq;
        j["from"] = ev.sender;
        j["to"] = ev.receiver;
        j["kind"] = ev.kind;
        j["emit_s"] = format_double15(ev.emit_time_s);
        j["arrive_s"] = format_double15(ev.arrival_time_s);
        if (std::holds_alternative<ClassicalBits>(ev.payload)) {
            j["payload"] = "classical";
            j["size"] = std::get<ClassicalBits>(ev.payload).bits.size();
        } else if (std::holds_alternative<PublicKeyRegister>(ev.payload)) {
            j["payload"] = "public_key_register";
            j["size"] = std::get<PublicKeyRegister>(ev.payload).size();
        } else {
            j["payload"] = "cipher_register";
            j["size"] = std::get<CipherRegister>(ev.payload).size();
        }
        out += j.dump();
        out += "\n";
    }
    return out;
}

}  // namespace qpv
