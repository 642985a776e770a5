#pragma once

// JSON run manifest. It is written once before any data file (status
// "incomplete") and rewritten with status "complete" at the end, so an
// interrupted run leaves a manifest marked incomplete.

#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

namespace rydchip::cli {

class RunManifest {
 public:
  RunManifest(std::string path, std::string command);

  nlohmann::ordered_json& config() { return doc_["config"]; }
  nlohmann::ordered_json& results() { return doc_["results"]; }
  void set_seed(std::uint64_t seed) { doc_["seed"] = seed; }
  void add_output(const std::string& path);
  void warn(const std::string& message);

  void write_incomplete();
  void write_complete();
  /// Records the failure and exit code; the status stays "incomplete".
  void write_failed(int exit_code, const std::string& message);

 private:
  void write(const char* status);

  std::string path_;
  nlohmann::ordered_json doc_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace rydchip::cli
