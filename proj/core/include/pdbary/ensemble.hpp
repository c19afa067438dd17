#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "pdbary/diagram.hpp"
#include "pdbary/scalar_field.hpp"

namespace pdbary {

/// One Gaussian bump. Centers and widths are in normalized domain
/// coordinates: vertex x maps to x / (nx - 1) in [0, 1].
struct Gaussian {
  Vec3 center{0.5, 0.5, 0.5};
  double amplitude = 1.0;
  double width = 0.1;
};

struct Pattern {
  std::vector<Gaussian> gaussians;
};

/// Synthetic ensemble: member m follows pattern m % patterns.size(), with
/// every Gaussian center shifted by U(-centerJitter, centerJitter) per axis
/// and uniform noise U(-noiseAmplitude, noiseAmplitude) added per vertex.
/// Generated fields have spacing 1 / (n - 1) per axis, so vertex positions
/// (and diagram locations) span the unit square or cube like the centers.
struct EnsembleSpec {
  std::size_t memberCount = 1;
  std::array<std::size_t, 3> extents{64, 64, 1};
  std::vector<Pattern> patterns;
  double noiseAmplitude = 0.0;
  double centerJitter = 0.0;
  std::uint64_t seed = 0;
  std::string labelPrefix = "member";
};

void validate(const EnsembleSpec& spec);

/// JSON form:
///   { "memberCount": 100, "extents": [64, 64], "noiseAmplitude": 0.1,
///     "centerJitter": 0.02, "seed": 7,
///     "patterns": [ { "gaussians": [ { "center": [0.3, 0.5], "amplitude": 1, "width": 0.08 } ] } ] }
EnsembleSpec parseEnsembleSpec(const std::string& json, const std::string& source = "<memory>");
EnsembleSpec readEnsembleSpec(const std::filesystem::path& path);

/// Member `m` alone; identical to generateEnsemble(spec)[m].
ScalarField generateMember(const EnsembleSpec& spec, std::size_t m);

std::vector<ScalarField> generateEnsemble(const EnsembleSpec& spec);

/// Ground-truth pattern index of every member.
std::vector<std::size_t> groundTruthGroups(const EnsembleSpec& spec);

}  // namespace pdbary
