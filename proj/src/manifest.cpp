#include "volclust/manifest.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstdio>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace volclust {

std::string sha256_hex(std::string_view bytes) {
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), digest.data(), &len) != 1)
        throw std::runtime_error("sha256 digest failed");
    std::string hex;
    hex.reserve(2 * len);
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", digest[i]);
        hex += buf;
    }
    return hex;
}

nlohmann::ordered_json to_json(const RunManifest& m) {
    nlohmann::ordered_json j;
    j["command"] = m.command;
    j["tool_version"] = m.tool_version;
    j["seed"] = m.seed;
    auto& inputs = j["inputs"] = nlohmann::ordered_json::array();
    for (const auto& in : m.inputs) inputs.push_back({{"path", in.path}, {"sha256", in.sha256}});
    auto& cfg = j["config"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : m.config) cfg[k] = v;
    return j;
}

std::string to_text(const RunManifest& m) {
    std::ostringstream out;
    out << "# volclust " << m.tool_version << " " << m.command << "\n";
    out << "# seed: " << m.seed << "\n";
    for (const auto& in : m.inputs) out << "# input: " << in.path << " sha256:" << in.sha256 << "\n";
    if (!m.config.empty()) {
        out << "# config:";
        for (const auto& [k, v] : m.config) out << " " << k << "=" << v;
        out << "\n";
    }
    return out.str();
}

}  // namespace volclust
