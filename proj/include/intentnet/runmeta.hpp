#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace intentnet {

// Provenance record written once into every command's output directory.
struct RunManifest {
  std::string command;
  std::string version;
  std::uint64_t seed = 0;
  std::string backend;
  std::vector<std::pair<std::string, std::string>> inputs;  // path, fingerprint
  std::vector<std::string> outputs;                         // file names
  std::string config_summary;
  double total_seconds = 0.0;
};

// FNV-1a 64 over a file's bytes, as 16 hex digits.
std::string file_fingerprint(const std::filesystem::path& path);

void write_run_manifest(const RunManifest& manifest,
                        const std::filesystem::path& out_dir);

}  // namespace intentnet
