#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace pdbary::cli {

/// What a command did, serialized as JSON on stdout (and optionally to a
/// file). `config` holds every effective parameter after flags and
/// environment variables were merged, so a rerun with the same values
/// reproduces the outputs.
struct RunReport {
  std::string command;
  std::vector<std::string> arguments;
  nlohmann::json config = nlohmann::json::object();
  nlohmann::json outputs = nlohmann::json::object();
  nlohmann::json metrics = nlohmann::json::object();
  int exitCode = 0;
  std::string error;

  nlohmann::json toJson() const;
  void write(const std::filesystem::path& path) const;
};

}  // namespace pdbary::cli
