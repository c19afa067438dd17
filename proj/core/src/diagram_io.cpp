#include "pdbary/diagram_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pdbary/error.hpp"

namespace pdbary {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> splitCommas(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(trim(std::string_view(line).substr(start, pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

double parseReal(const std::string& token, const std::string& source, std::size_t line) {
  double value = 0.0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  if (!token.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end)
    throw ParseError(source, line, "invalid number '" + token + "'");
  return value;
}

int dimensionOf(const PersistenceDiagram& diagram) {
  for (const auto& p : diagram.points)
    if (!p.isDiagonal && diagram.pairType == PairType::SaddleMax) return p.criticalIndexHigh;
  return 2;
}

}  // namespace

std::string formatReal(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

PersistenceDiagram parseDiagram(std::istream& in, const std::string& source) {
  PersistenceDiagram diagram;
  int dimension = 2;
  bool sawHeader = false;
  bool sawType = false;
  std::string raw;
  std::size_t lineNo = 0;
  while (std::getline(in, raw)) {
    ++lineNo;
    const std::string line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (sawHeader) continue;
      std::istringstream meta(line.substr(1));
      std::string item;
      while (meta >> item) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) continue;
        const auto key = item.substr(0, eq);
        const auto value = item.substr(eq + 1);
        if (key == "label") {
          diagram.label = value;
        } else if (key == "pairType") {
          try {
            diagram.pairType = pairTypeFromString(value);
          } catch (const ValidationError& e) {
            throw ParseError(source, lineNo, e.what());
          }
          sawType = true;
        } else if (key == "dimension") {
          dimension = static_cast<int>(parseReal(value, source, lineNo));
          if (dimension < 1 || dimension > 3)
            throw ParseError(source, lineNo, "dimension must be 1, 2 or 3");
        }
      }
      continue;
    }
    if (!sawHeader) {
      if (line != kDiagramCsvHeader)
        throw ParseError(source, lineNo,
                         std::string("expected header '") + kDiagramCsvHeader + "'");
      sawHeader = true;
      continue;
    }
    const auto fields = splitCommas(line);
    if (fields.size() != 9)
      throw ParseError(source, lineNo,
                       "expected 9 columns, found " + std::to_string(fields.size()));
    double values[8];
    for (int k = 0; k < 8; ++k) values[k] = parseReal(fields[k], source, lineNo);
    PairType type;
    try {
      type = pairTypeFromString(fields[8]);
    } catch (const ValidationError& e) {
      throw ParseError(source, lineNo, e.what());
    }
    if (!sawType) {
      diagram.pairType = type;
      sawType = true;
    } else if (type != diagram.pairType) {
      throw ParseError(source, lineNo, "mixed pair types in one diagram");
    }
    if (values[1] < values[0]) throw ParseError(source, lineNo, "death < birth");
    diagram.points.push_back(makePoint(values[0], values[1], type,
                                       {values[2], values[3], values[4]},
                                       {values[5], values[6], values[7]}, dimension));
  }
  if (!sawHeader) throw ParseError(source, 0, "missing header row");
  return diagram;
}

void formatDiagram(const PersistenceDiagram& diagram, std::ostream& out) {
  if (!diagram.label.empty() && diagram.label.find_first_of(" \t\n") == std::string::npos)
    out << "# label=" << diagram.label << '\n';
  out << "# pairType=" << toString(diagram.pairType) << '\n';
  const int dimension = dimensionOf(diagram);
  if (diagram.pairType == PairType::SaddleMax && dimension != 2)
    out << "# dimension=" << dimension << '\n';
  out << kDiagramCsvHeader << '\n';
  const auto type = toString(diagram.pairType);
  for (const auto& p : diagram.points) {
    if (p.isDiagonal) continue;
    out << formatReal(p.birth) << ',' << formatReal(p.death);
    for (double v : p.birthLocation) out << ',' << formatReal(v);
    for (double v : p.deathLocation) out << ',' << formatReal(v);
    out << ',' << type << '\n';
  }
}

PersistenceDiagram readDiagram(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open diagram file " + path.string());
  auto diagram = parseDiagram(in, path.string());
  if (diagram.label.empty()) diagram.label = path.stem().string();
  return diagram;
}

void writeDiagram(const PersistenceDiagram& diagram, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write diagram file " + path.string());
  formatDiagram(diagram, out);
  if (!out) throw Error("write failed for " + path.string());
}

std::filesystem::path Manifest::resolve(const ManifestEntry& entry) const {
  if (entry.path.is_absolute()) return entry.path;
  return baseDirectory / entry.path;
}

Manifest readManifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open manifest " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string(), 0, std::string("invalid JSON: ") + e.what());
  }
  Manifest manifest;
  manifest.baseDirectory = path.parent_path();
  try {
    manifest.kind = doc.value("kind", std::string("diagrams"));
    if (manifest.kind != "diagrams" && manifest.kind != "fields")
      throw ParseError(path.string(), 0, "kind must be 'diagrams' or 'fields'");
    if (doc.contains("pairType"))
      manifest.pairType = pairTypeFromString(doc.at("pairType").get<std::string>());
    if (!doc.contains("members") || !doc.at("members").is_array())
      throw ParseError(path.string(), 0, "missing 'members' array");
    for (const auto& item : doc.at("members")) {
      ManifestEntry entry;
      entry.path = item.at("path").get<std::string>();
      entry.label = item.value("label", entry.path.stem().string());
      if (item.contains("group")) entry.group = item.at("group").get<int>();
      manifest.members.push_back(std::move(entry));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string(), 0, std::string("invalid manifest: ") + e.what());
  }
  if (manifest.members.empty()) throw ValidationError("manifest lists no members: " + path.string());
  return manifest;
}

void writeManifest(const Manifest& manifest, const std::filesystem::path& path) {
  nlohmann::json doc;
  doc["kind"] = manifest.kind;
  if (manifest.pairType) doc["pairType"] = std::string(toString(*manifest.pairType));
  doc["members"] = nlohmann::json::array();
  for (const auto& entry : manifest.members) {
    nlohmann::json item{{"label", entry.label}, {"path", entry.path.generic_string()}};
    if (entry.group) item["group"] = *entry.group;
    doc["members"].push_back(std::move(item));
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot write manifest " + path.string());
  out << doc.dump(2) << '\n';
}

Ensemble loadDiagramEnsemble(const Manifest& manifest) {
  if (manifest.kind != "diagrams")
    throw ValidationError("manifest kind is '" + manifest.kind + "', expected 'diagrams'");
  Ensemble ensemble;
  ensemble.reserve(manifest.members.size());
  for (const auto& entry : manifest.members) {
    auto diagram = readDiagram(manifest.resolve(entry));
    diagram.label = entry.label;
    if (!ensemble.empty() && !diagram.empty() && !ensemble.front().empty() &&
        diagram.pairType != ensemble.front().pairType)
      throw ValidationError("ensemble mixes pair types at member " + entry.label);
    ensemble.push_back(std::move(diagram));
  }
  return ensemble;
}

}  // namespace pdbary
