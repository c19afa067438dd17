#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pdbary/assignment.hpp"
#include "pdbary/diagram.hpp"
#include "pdbary/energy_trace.hpp"

namespace pdbary {

struct ClusteringConfig {
  std::size_t k = 1;
  std::optional<double> timeLimit;  // seconds
  std::uint64_t seed = 0;
  double gammaAssign = 0.01;  // accuracy of member-to-centroid distances
  int threads = 1;
  double epsilonDivisor = 5.0;
  double epsilonFloorRatio = 1e-5;
  double rhoGrowthCap = 0.10;
  double tau = 4.0;
  bool persistenceProgressivity = true;
  bool elkanPruning = true;
  std::size_t maxIterations = 10000;
};

/// Squared-distance matrix helper: row-major k x k.
using DistanceMatrix = std::vector<std::vector<double>>;

/// k-means++ seeding: the first member uniformly, each next one with
/// probability proportional to its squared converged distance to the nearest
/// chosen centroid. Returns k distinct member indices.
std::vector<std::size_t> kmeansPlusPlusIndices(const Ensemble& inputs, std::size_t k,
                                               const MetricParams& params, std::uint64_t seed,
                                               double gamma = 0.01, int threads = 1);

std::vector<PersistenceDiagram> kmeansPlusPlusInit(const Ensemble& inputs, std::size_t k,
                                                   const MetricParams& params, std::uint64_t seed,
                                                   double gamma = 0.01, int threads = 1);

/// Centroids that may still be closer than the owner, by the triangle
/// inequality: j is excluded when D(owner, j) >= 2 (1+gamma)^2 d(member, owner).
/// The inflation keeps the test safe with (1+gamma)-approximate distances.
/// Always contains the owner.
std::vector<std::size_t> elkanPrune(double memberDistToOwner, const DistanceMatrix& centroidDistances,
                                    std::size_t owner, double gamma = 0.0);

/// Nearest centroid among `candidates`; ties keep `owner`, then the lowest index.
std::size_t nearestCentroid(const std::vector<double>& distances,
                            const std::vector<std::size_t>& candidates, std::size_t owner);

struct ClusteringResult {
  std::vector<std::size_t> labels;
  std::vector<PersistenceDiagram> centroids;
  EnergyTrace trace;
  std::size_t iterations = 0;
  double elapsedSeconds = 0.0;
  std::size_t distancesComputed = 0;
  std::size_t distancesPruned = 0;
};

/// Progressive k-means over persistence diagrams.
ClusteringResult clusterDiagrams(const Ensemble& inputs, const MetricParams& params,
                                 const ClusteringConfig& config);

/// Converged Frechet energy of each cluster against its centroid.
std::vector<double> clusterEnergies(const Ensemble& inputs, const std::vector<std::size_t>& labels,
                                    const std::vector<PersistenceDiagram>& centroids,
                                    const MetricParams& params, double gamma = 0.01,
                                    int threads = 1);

/// True when the two labelings induce the same partition.
bool samePartition(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b);

}  // namespace pdbary
