#include "qpv/manifest.hpp"

#include <ctime>

#include <json.hpp>

namespace qpv {

std::string current_utc_iso8601() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string dump_json(const RunManifest& manifest) {
    nlohmann::ordered_json j;
    j["schema"] = "qpv.manifest/1";
    j["command"] = manifest.command;
    j["config_hash"] = manifest.config_hash;
    j["seed"] = std::to_string(manifest.seed);
    j["artifact_version"] = manifest.artifact_version;
    j["created_utc"] = manifest.created_utc;
    j["outputs"] = manifest.outputs;
    return j.dump(2) + "\n";
}

}  // namespace qpv
