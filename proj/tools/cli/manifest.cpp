#include "manifest.hpp"

#include "rydchip/error.hpp"

#include <fstream>

#ifndef RYDCHIP_VERSION
#define RYDCHIP_VERSION "unknown"
#endif

namespace rydchip::cli {

RunManifest::RunManifest(std::string path, std::string command)
    : path_(std::move(path)), start_(std::chrono::steady_clock::now()) {
  doc_["command"] = std::move(command);
  doc_["version"] = RYDCHIP_VERSION;
  doc_["status"] = "incomplete";
  doc_["seed"] = nullptr;
  doc_["config"] = nlohmann::ordered_json::object();
  doc_["outputs"] = nlohmann::ordered_json::array();
  doc_["warnings"] = nlohmann::ordered_json::array();
  doc_["results"] = nlohmann::ordered_json::object();
  doc_["wall_time_s"] = 0.0;
}

void RunManifest::add_output(const std::string& path) { doc_["outputs"].push_back(path); }

void RunManifest::warn(const std::string& message) { doc_["warnings"].push_back(message); }

void RunManifest::write(const char* status) {
  doc_["status"] = status;
  doc_["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  std::ofstream out(path_, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Domain, "cannot write manifest '" + path_ + "'");
  out << doc_.dump(2) << '\n';
}

void RunManifest::write_incomplete() { write("incomplete"); }

void RunManifest::write_complete() { write("complete"); }

void RunManifest::write_failed(int exit_code, const std::string& message) {
  doc_["exit_code"] = exit_code;
  doc_["error"] = message;
  write("incomplete");
}

}  // namespace rydchip::cli
