#include "cli/run_report.hpp"

#include <fstream>

#include "pdbary/error.hpp"

namespace pdbary::cli {

nlohmann::json RunReport::toJson() const {
  nlohmann::json doc;
  doc["tool"] = "pdbary";
  doc["version"] = PDBARY_VERSION;
  doc["command"] = command;
  doc["arguments"] = arguments;
  doc["config"] = config;
  doc["outputs"] = outputs;
  doc["metrics"] = metrics;
  doc["exitCode"] = exitCode;
  if (!error.empty()) doc["error"] = error;
  return doc;
}

void RunReport::write(const std::filesystem::path& path) const {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write report " + path.string());
  out << toJson().dump(2) << '\n';
}

}  // namespace pdbary::cli
