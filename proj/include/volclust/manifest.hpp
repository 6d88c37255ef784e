#pragma once

#include <json.hpp>

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace volclust {

inline constexpr std::string_view kToolVersion = "0.1.0";

[[nodiscard]] std::string sha256_hex(std::string_view bytes);

struct InputDigest {
    std::string path;
    std::string sha256;
};

/// Everything needed to reproduce a run. Identical manifests give identical
/// report bytes, so nothing time- or host-dependent goes in here.
struct RunManifest {
    std::string command;
    std::vector<InputDigest> inputs;
    std::vector<std::pair<std::string, std::string>> config;  // resolved flags, in declaration order
    std::string tool_version{kToolVersion};
    std::uint64_t seed = 0;

    void set(std::string key, std::string value) { config.emplace_back(std::move(key), std::move(value)); }
};

[[nodiscard]] nlohmann::ordered_json to_json(const RunManifest& m);
/// '#'-prefixed header lines for text reports.
[[nodiscard]] std::string to_text(const RunManifest& m);

}  // namespace volclust
