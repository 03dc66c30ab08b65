#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace oraclenet {

[[nodiscard]] std::string tool_version();

/// Provenance written next to every artifact a command produces.
struct RunManifest {
    std::string command;
    std::string env_hash;
    std::map<std::string, std::uint64_t> seeds;
    std::map<std::string, std::string> parameters;
    std::string tool_version = oraclenet::tool_version();
    std::string started_utc;
    std::string finished_utc;

    /// JSON object; keys sorted, so the output is deterministic apart from the timestamps.
    [[nodiscard]] std::string to_json() const;
    static RunManifest from_json(const std::string& text);
};

[[nodiscard]] std::string utc_now_iso8601();

/// Writes `<artifact>.manifest.json`.
void write_manifest(const std::string& artifact, const RunManifest& manifest);

}  // namespace oraclenet
