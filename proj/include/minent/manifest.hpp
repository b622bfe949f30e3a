#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace minent {

inline constexpr const char* kToolVersion = "0.1.0";

/// Record of one CLI run: the resolved configuration, root seed and
/// artifact paths, enough to re-execute the run bit-identically. Written
/// with status "running" before the command does any work and finalized
/// with "completed" (or "aborted") afterwards.
struct RunManifest {
    std::string command;
    std::map<std::string, std::string> config;  // resolved flag -> value
    std::uint64_t seed = 0;
    std::vector<std::string> artifacts;
    std::string version = kToolVersion;
    std::string started_utc;
    std::string finished_utc;
    std::string status = "running";

    void begin(const std::filesystem::path& path);  // stamps start time, writes
    void finish(const std::filesystem::path& path, const std::string& final_status);

    std::string to_json() const;
    static RunManifest from_json_file(const std::filesystem::path& path);
};

/// Current UTC time as an ISO-8601 string.
std::string utc_timestamp();

}  // namespace minent
