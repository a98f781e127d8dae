#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace deslab {

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::string& path);

/// Run provenance: inputs, seed, and content hashes of every artifact a
/// command produced.
struct RunManifest {
    std::string command;
    std::string plant_path;    // "<builtin>" for the bundled plant
    std::string scenario_path; // empty when not applicable
    std::uint64_t seed = 0;
    std::int64_t horizon_ms = 0;
    std::string out_dir;
    std::vector<std::pair<std::string, std::string>> artifacts; // path, sha256

    void add_artifact(const std::string& path);
};

std::string write_manifest(const RunManifest& m);
RunManifest read_manifest(const std::string& text);
void save_manifest(const RunManifest& m, const std::string& path);

/// True when every listed artifact exists and matches its recorded hash.
bool verify_manifest(const RunManifest& m, std::string* first_mismatch = nullptr);

// Small file helpers shared across modules.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

} // namespace deslab
