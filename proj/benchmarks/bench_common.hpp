#pragma once

#include <cstdint>
#include <random>

#include "pdbary/diagram.hpp"
#include "pdbary/ensemble.hpp"
#include "pdbary/field_persistence.hpp"

namespace bench {

inline pdbary::PersistenceDiagram randomDiagram(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  pdbary::PersistenceDiagram d;
  for (std::size_t i = 0; i < n; ++i) {
    double a = u(rng), b = u(rng);
    if (a > b) std::swap(a, b);
    if (a == b) b = a + 1e-6;
    d.points.push_back({a, b});
  }
  return d;
}

// saddle-max diagrams of noisy six-bump terrains
inline pdbary::Ensemble terrainEnsemble(std::uint64_t seed, std::size_t members, std::size_t side) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.15, 0.85);
  pdbary::EnsembleSpec spec;
  spec.memberCount = members;
  spec.extents = {side, side, 1};
  spec.noiseAmplitude = 0.05;
  spec.centerJitter = 0.02;
  spec.seed = seed;
  pdbary::Pattern p;
  for (int g = 0; g < 6; ++g) p.gaussians.push_back({{u(rng), u(rng), 0}, 0.5 + 0.5 * u(rng), 0.08});
  spec.patterns = {p};
  pdbary::Ensemble out;
  for (const auto& f : pdbary::generateEnsemble(spec))
    out.push_back(pdbary::extremumDiagram(f, pdbary::PairType::SaddleMax));
  return out;
}

}  // namespace bench
