#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "pdbary/diagram.hpp"

namespace pdbary {

/// Scalar field sampled on the vertices of a regular 2D or 3D grid.
///
/// Vertex (x, y, z) is stored at index x + nx * (y + ny * z); in 2D, nz = 1.
/// Its position is (x * spacing[0], y * spacing[1], z * spacing[2]).
struct ScalarField {
  int dimension = 2;
  std::array<std::size_t, 3> extents{0, 0, 1};
  std::array<double, 3> spacing{1.0, 1.0, 1.0};
  std::vector<double> values;
  std::string label;

  ScalarField() = default;
  ScalarField(std::size_t nx, std::size_t ny, std::size_t nz = 1, double fill = 0.0);

  std::size_t vertexCount() const noexcept { return extents[0] * extents[1] * extents[2]; }
  std::size_t index(std::size_t x, std::size_t y, std::size_t z = 0) const noexcept {
    return x + extents[0] * (y + extents[1] * z);
  }
  std::array<std::size_t, 3> coordinates(std::size_t vertex) const noexcept;
  Vec3 position(std::size_t vertex) const noexcept;

  double& at(std::size_t x, std::size_t y, std::size_t z = 0) { return values[index(x, y, z)]; }
  double at(std::size_t x, std::size_t y, std::size_t z = 0) const { return values[index(x, y, z)]; }
};

/// Throws ValidationError when extents, dimension and value count disagree
/// or a value is not finite.
void validate(const ScalarField& field);

/// Binary format, little-endian:
///   "PDBFIELD" | uint32 dimension | uint64 extents[3] | double spacing[3] | double values[]
ScalarField readField(const std::filesystem::path& path);
void writeField(const ScalarField& field, const std::filesystem::path& path);

/// 2D CSV import: one grid row (fixed y) per line, comma separated.
ScalarField parseFieldCsv(const std::string& text, const std::string& source = "<memory>");
ScalarField readFieldCsv(const std::filesystem::path& path);

/// Reads .csv through the CSV importer, anything else as binary.
ScalarField loadField(const std::filesystem::path& path);

/// Vertex-wise arithmetic mean. Throws ValidationError on an empty list or
/// mismatched grids.
ScalarField pointwiseMean(const std::vector<ScalarField>& fields);

}  // namespace pdbary
