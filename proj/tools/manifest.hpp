#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace boxforge::cli {

// Written after every run: captures enough to replay the command
// bit-identically (command, effective config, seed, paths, version).
struct RunManifest {
  std::string command;
  nlohmann::json config = nlohmann::json::object();
  std::uint64_t seed = 0;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  double wall_time_seconds = 0.0;
};

// Resolution order: explicit path, then <out>.manifest.json, then
// <out_dir>/manifest.json, then ./boxforge-manifest.json.
std::filesystem::path manifest_path(const std::string& explicit_path,
                                    const std::string& out_file,
                                    const std::string& out_dir);

void write_manifest(const RunManifest& manifest,
                    const std::filesystem::path& path);

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

}  // namespace boxforge::cli
