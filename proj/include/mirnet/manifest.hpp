#pragma once

#include <string>
#include <vector>

#include "mirnet/serialize.hpp"

namespace mirnet {

inline constexpr const char* kVersion = "1.0.0";

/// Everything needed to repeat a CLI run and fingerprint what it touched:
/// the subcommand, its full parameter set, content hashes of the inputs, and
/// the files it produced. Re-running a manifest reproduces the numerical
/// outputs byte for byte (the manifest itself carries timestamps and is the
/// one file that differs).
struct RunManifest {
    std::string version = kVersion;
    std::string command;  ///< generate | infer | metrics | compare
    json params;          ///< subcommand parameters, exactly as executed

    struct InputHash {
        std::string path;
        std::string sha256;
    };
    std::vector<InputHash> inputs;
    std::vector<std::string> outputs;  ///< files written, excluding the manifest
    std::string started_at;            ///< ISO 8601 UTC
    std::string finished_at;
};

json manifest_to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const json& j);

void save_manifest(const std::string& path, const RunManifest& manifest);
RunManifest load_manifest(const std::string& path);

/// Current time as ISO 8601 UTC ("2026-01-02T03:04:05Z").
std::string iso_utc_now();

}  // namespace mirnet
