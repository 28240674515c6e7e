#include "mirnet/manifest.hpp"

#include <ctime>

namespace mirnet {

json manifest_to_json(const RunManifest& manifest) {
    json j;
    j["version"] = manifest.version;
    j["command"] = manifest.command;
    j["params"] = manifest.params;
    json inputs = json::array();
    for (const auto& in : manifest.inputs) {
        json e;
        e["path"] = in.path;
        e["sha256"] = in.sha256;
        inputs.push_back(std::move(e));
    }
    j["inputs"] = inputs;
    j["outputs"] = manifest.outputs;
    j["started_at"] = manifest.started_at;
    j["finished_at"] = manifest.finished_at;
    return j;
}

RunManifest manifest_from_json(const json& j) {
    RunManifest m;
    m.version = j.at("version").get<std::string>();
    m.command = j.at("command").get<std::string>();
    m.params = j.at("params");
    for (const json& e : j.at("inputs"))
        m.inputs.push_back({e.at("path").get<std::string>(), e.at("sha256").get<std::string>()});
    m.outputs = j.at("outputs").get<std::vector<std::string>>();
    m.started_at = j.value("started_at", "");
    m.finished_at = j.value("finished_at", "");
    return m;
}

void save_manifest(const std::string& path, const RunManifest& manifest) {
    write_text_atomic(path, to_json_text(manifest_to_json(manifest)));
}

RunManifest load_manifest(const std::string& path) {
    json j;
    try {
        j = json::parse(read_text(path));
    } catch (const json::exception& e) {
        throw Error("'" + path + "' is not a valid manifest: " + e.what());
    }
    return manifest_from_json(j);
}

std::string iso_utc_now() {
    const std::time_t now = std::time(nullptr);
    std::tm utc{};
    gmtime_r(&now, &utc);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &utc);
    return buf;
}

}  // namespace mirnet
