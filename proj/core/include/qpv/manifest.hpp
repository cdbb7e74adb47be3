#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qpv {

inline constexpr const char* kArtifactVersion = "0.1.0";

// Per-invocation bookkeeping written next to CLI outputs. The manifest is
// the only output file carrying a timestamp; everything else is
// byte-reproducible from (config, seed).
struct RunManifest {
    std::string command;
    std::string config_hash;
    std::uint64_t seed = 0;
    std::string artifact_version = kArtifactVersion;
    std::string created_utc;  // ISO-8601, UTC
    std::vector<std::string> outputs;
};

std::string current_utc_iso8601();
std::string dump_json(const RunManifest& manifest);

}  // namespace qpv
