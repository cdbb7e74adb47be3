#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "qpv/attack_types.hpp"
#include "qpv/keys.hpp"
#include "qpv/protocol.hpp"
#include "qpv/spacetime.hpp"

// JSON / CSV persistence. Schemas are documented in the README. All
// floating-point values are written as decimal strings with 17 significant
// digits, so files are diff-able and reload to bit-identical doubles;
// parsers accept plain JSON numbers as well.

namespace qpv {

std::string format_double(double value);   // 17 significant digits
std::string format_double15(double value); // 15 significant digits (event logs)

std::string dump_json(const PrivateKey& key);
PrivateKey parse_private_key(std::string_view text);

std::string dump_json(const PublicKeyRegister& reg);
PublicKeyRegister parse_public_key_register(std::string_view text);

std::string dump_json(const CipherRegister& reg);
CipherRegister parse_cipher_register(std::string_view text);

std::string dump_json(const Message& m);
Message parse_message(std::string_view text);

std::string dump_json(const ScenarioGeometry& geometry);
ScenarioGeometry parse_scenario(std::string_view text);

// Canonical config document; its exact bytes feed the config hash.
std::string dump_config_json(const ProtocolConfig& config);
std::string config_hash_hex(const ProtocolConfig& config);

std::string dump_transcript_json(const ProtocolTranscript& transcript,
                                 const ProtocolConfig& config);
std::string transcript_summary_csv_header();
std::string transcript_summary_csv_row(const ProtocolTranscript& transcript,
                                       const ProtocolConfig& config);

std::string dump_attack_report_json(const AttackReport& report, const ProtocolConfig& config);
std::string attack_report_csv_header();
std::string attack_report_csv_row(const AttackReport& report, const ProtocolConfig& config);

// One JSON object per line per event; times carry 15 significant digits.
std::string dump_event_log_jsonl(const std::vector<SignalEvent>& log, std::string_view phase);

}  // namespace qpv
