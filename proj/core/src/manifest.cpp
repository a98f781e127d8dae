#include "deslab/manifest.hpp"

#include "deslab/error.hpp"

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace deslab {

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr))
        throw Error("internal", "sha256 digest failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xf];
    }
    return out;
}

std::string sha256_file(const std::string& path) { return sha256_hex(read_file(path)); }

void RunManifest::add_artifact(const std::string& path) {
    artifacts.emplace_back(path, sha256_file(path));
}

std::string write_manifest(const RunManifest& m) {
    nlohmann::json j;
    j["command"] = m.command;
    j["plant"] = m.plant_path;
    j["scenarios"] = m.scenario_path;
    j["seed"] = m.seed;
    j["horizon_ms"] = m.horizon_ms;
    j["out_dir"] = m.out_dir;
    j["artifacts"] = nlohmann::json::array();
    for (const auto& [path, hash] : m.artifacts)
        j["artifacts"].push_back({{"path", path}, {"sha256", hash}});
    return j.dump(2) + "\n";
}

RunManifest read_manifest(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error("parse", std::string("manifest: ") + e.what());
    }
    RunManifest m;
    m.command = j.value("command", "");
    m.plant_path = j.value("plant", "");
    m.scenario_path = j.value("scenarios", "");
    m.seed = j.value("seed", std::uint64_t{0});
    m.horizon_ms = j.value("horizon_ms", std::int64_t{0});
    m.out_dir = j.value("out_dir", "");
    for (const auto& a : j.value("artifacts", nlohmann::json::array()))
        m.artifacts.emplace_back(a.at("path").get<std::string>(),
                                 a.at("sha256").get<std::string>());
    return m;
}

void save_manifest(const RunManifest& m, const std::string& path) {
    write_file(path, write_manifest(m));
}

bool verify_manifest(const RunManifest& m, std::string* first_mismatch) {
    for (const auto& [path, hash] : m.artifacts) {
        if (!std::filesystem::exists(path) || sha256_file(path) != hash) {
            if (first_mismatch) *first_mismatch = path;
            return false;
        }
    }
    return true;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("io", "cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("io", "cannot open '" + path + "' for writing");
    out << contents;
    if (!out) throw Error("io", "failed writing '" + path + "'");
}

} // namespace deslab
