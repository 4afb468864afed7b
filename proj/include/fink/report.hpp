#pragma once

// JSON reports and replayable run manifests for the command-line tool.

#include <string>
#include <vector>

#include <json.hpp>

namespace fink {

inline constexpr const char* kToolVersion = "0.1.0";

struct RunManifest {
  std::string subcommand;
  std::vector<std::string> argv;  // arguments after the program name, minus output paths
  nlohmann::json params;
  nlohmann::json budgets;
  std::string version = kToolVersion;
  double wall_seconds = 0;
  std::string digest;  // of the "result" member only
};

/// Hex SHA-256 of the compact dump of `result`.
std::string result_digest(const nlohmann::json& result);

nlohmann::json to_json(const RunManifest& m);
RunManifest manifest_from_json(const nlohmann::json& j);

/// Writes `j` (pretty, trailing newline) to `path`; "-" means stdout.
void write_json(const std::string& path, const nlohmann::json& j);
nlohmann::json read_json(const std::string& path);

}  // namespace fink
