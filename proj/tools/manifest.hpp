#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <string>

#include "json.hpp"

namespace idt::cli {

// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

std::string tool_version();

// One per run: what was asked, what was read, how long it took.
class RunManifest {
 public:
  explicit RunManifest(std::string subcommand);

  nlohmann::json& config() { return config_; }
  void add_input(const std::string& role, const std::filesystem::path& path);
  void add_output(const std::string& role, const std::filesystem::path& path);

  // Stamps the duration and finish time.
  nlohmann::json finish() const;
  void write(const std::filesystem::path& path) const;

 private:
  std::string subcommand_;
  nlohmann::json config_ = nlohmann::json::object();
  nlohmann::json inputs_ = nlohmann::json::object();
  nlohmann::json outputs_ = nlohmann::json::object();
  std::chrono::steady_clock::time_point start_;
};

// Pretty JSON plus trailing newline, written via a temporary file.
void write_json(const std::filesystem::path& path, const nlohmann::json& value);

}  // namespace idt::cli
