#pragma once

#include <cstddef>
#include <vector>

#include "pdbary/diagram.hpp"
#include "pdbary/scalar_field.hpp"

namespace pdbary {

/// Neighbours of `vertex` in the Freudenthal triangulation of the grid:
/// up to 6 in 2D, up to 14 in 3D.
std::vector<std::size_t> gridNeighbors(const ScalarField& field, std::size_t vertex);

/// True when vertex a precedes vertex b in the injective order (value, index).
inline bool precedes(const ScalarField& field, std::size_t a, std::size_t b) {
  const double va = field.values[a], vb = field.values[b];
  return va < vb || (va == vb && a < b);
}

/// 0-dimensional extremum pairs by union-find (Elder rule).
///
/// MinSaddle: sub-level sets swept in increasing (value, index); when two
/// components meet, the one with the later minimum dies at the merge vertex.
/// SaddleMax: the same sweep over the negated field, mirrored back. The
/// surviving component pairs the global minimum with the global maximum.
/// Zero-persistence pairs (ties) are kept.
PersistenceDiagram extremumDiagram(const ScalarField& field, PairType type);

}  // namespace pdbary
