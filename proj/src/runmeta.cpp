#include "intentnet/runmeta.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "intentnet/errors.hpp"

namespace intentnet {

std::string file_fingerprint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(Errc::IoFailure, "cannot fingerprint " + path.string());
  }
  std::uint64_t h = 0xCBF29CE484222325ULL;
  char buf[4096];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    const std::streamsize n = in.gcount();
    for (std::streamsize i = 0; i < n; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001B3ULL;
    }
    if (!in) {
      break;
    }
  }
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx",
                static_cast<unsigned long long>(h));
  return std::string(hex);
}

void write_run_manifest(const RunManifest& manifest,
                        const std::filesystem::path& out_dir) {
  nlohmann::ordered_json doc;
  doc["command"] = manifest.command;
  doc["version"] = manifest.version;
  doc["seed"] = manifest.seed;
  doc["backend"] = manifest.backend;
  doc["config"] = manifest.config_summary;
  doc["inputs"] = nlohmann::ordered_json::object();
  for (const auto& [path, fingerprint] : manifest.inputs) {
    doc["inputs"][path] = fingerprint;
  }
  doc["outputs"] = manifest.outputs;
  doc["total_seconds"] = manifest.total_seconds;

  const auto path = out_dir / "run_manifest.json";
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(Errc::IoFailure, "cannot write " + path.string());
  }
  out << doc.dump(2) << '\n';
}

}  // namespace intentnet
