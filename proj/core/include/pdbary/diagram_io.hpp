#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pdbary/diagram.hpp"

namespace pdbary {

/// Diagram CSV. The header row is exactly
///
///   birth,death,bx,by,bz,dx,dy,dz,pairType
///
/// and may be preceded by `#` metadata lines (`# label=...`, `# dimension=3`).
/// Values are written with 17 significant digits. Diagonal ghosts are never
/// written: augmentation is always recomputed.
inline constexpr const char* kDiagramCsvHeader = "birth,death,bx,by,bz,dx,dy,dz,pairType";

PersistenceDiagram parseDiagram(std::istream& in, const std::string& source = "<stream>");
void formatDiagram(const PersistenceDiagram& diagram, std::ostream& out);

PersistenceDiagram readDiagram(const std::filesystem::path& path);
void writeDiagram(const PersistenceDiagram& diagram, const std::filesystem::path& path);

/// Formats a real with 17 significant digits (shortest lossless form for doubles).
std::string formatReal(double value);

struct ManifestEntry {
  std::string label;
  std::filesystem::path path;  // relative paths resolve against the manifest directory
  std::optional<int> group;    // ground-truth class, when known
};

/// Ensemble manifest JSON:
///
///   { "kind": "diagrams" | "fields", "pairType": "saddleMax",
///     "members": [ { "label": "m000", "path": "m000.csv", "group": 0 }, ... ] }
struct Manifest {
  std::string kind = "diagrams";
  std::optional<PairType> pairType;
  std::vector<ManifestEntry> members;
  std::filesystem::path baseDirectory;

  std::filesystem::path resolve(const ManifestEntry& entry) const;
};

Manifest readManifest(const std::filesystem::path& path);
void writeManifest(const Manifest& manifest, const std::filesystem::path& path);

/// Reads every diagram of a "diagrams" manifest; labels come from the manifest.
Ensemble loadDiagramEnsemble(const Manifest& manifest);

}  // namespace pdbary
