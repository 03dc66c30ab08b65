#include "oraclenet/manifest.hpp"

#include <chrono>
#include <ctime>

#include <json.hpp>

#include "binary_io.hpp"

#ifndef ORACLENET_VERSION
#define ORACLENET_VERSION "0.0.0"
#endif

namespace oraclenet {

std::string tool_version() {
    return ORACLENET_VERSION;
}

std::string utc_now_iso8601() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string RunManifest::to_json() const {
    nlohmann::json j;
    j["command"] = command;
    j["env_hash"] = env_hash;
    j["seeds"] = seeds;
    j["parameters"] = parameters;
    j["tool_version"] = tool_version;
    j["timestamps"] = {{"started_utc", started_utc}, {"finished_utc", finished_utc}};
    return j.dump(2) + "\n";
}

RunManifest RunManifest::from_json(const std::string& text) {
    try {
        const auto j = nlohmann::json::parse(text);
        RunManifest m;
        m.command = j.at("command").get<std::string>();
        m.env_hash = j.value("env_hash", "");
        m.seeds = j.value("seeds", std::map<std::string, std::uint64_t>{});
        m.parameters = j.value("parameters", std::map<std::string, std::string>{});
        m.tool_version = j.value("tool_version", "");
        if (j.contains("timestamps")) {
            m.started_utc = j["timestamps"].value("started_utc", "");
            m.finished_utc = j["timestamps"].value("finished_utc", "");
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed manifest: ") + e.what());
    }
}

void write_manifest(const std::string& artifact, const RunManifest& manifest) {
    detail::write_file(artifact + ".manifest.json", manifest.to_json());
}

}  // namespace oraclenet
