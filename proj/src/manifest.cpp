#include "minent/manifest.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <nlohmann/json.hpp>
#include <stdexcept>

namespace minent {

using json = nlohmann::ordered_json;

std::string utc_timestamp() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string RunManifest::to_json() const {
    json j;
    j["format"] = "run-manifest-v1";
    j["tool"] = "minent";
    j["version"] = version;
    j["command"] = command;
    j["config"] = config;
    j["seed"] = seed;
    j["artifacts"] = artifacts;
    j["started_utc"] = started_utc;
    j["finished_utc"] = finished_utc;
    j["status"] = status;
    return j.dump(2) + "\n";
}

void RunManifest::begin(const std::filesystem::path& path) {
    started_utc = utc_timestamp();
    status = "running";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write manifest " + path.string());
    out << to_json();
}

void RunManifest::finish(const std::filesystem::path& path, const std::string& final_status) {
    finished_utc = utc_timestamp();
    status = final_status;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write manifest " + path.string());
    out << to_json();
}

RunManifest RunManifest::from_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open manifest " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& err) {
        throw std::invalid_argument(path.string() + ": " + err.what());
    }
    if (!j.contains("format") || j.at("format") != "run-manifest-v1") {
        throw std::invalid_argument(path.string() + ": not a run manifest");
    }
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    m.config = j.at("config").get<std::map<std::string, std::string>>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.artifacts = j.at("artifacts").get<std::vector<std::string>>();
    m.version = j.at("version").get<std::string>();
    m.started_utc = j.value("started_utc", "");
    m.finished_utc = j.value("finished_utc", "");
    m.status = j.value("status", "");
    return m;
}

}  // namespace minent
