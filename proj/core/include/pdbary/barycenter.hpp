#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <vector>

#include "pdbary/assignment.hpp"
#include "pdbary/diagram.hpp"
#include "pdbary/energy_trace.hpp"

namespace pdbary {

struct BarycenterConfig {
  std::optional<double> timeLimit;  // seconds; unset runs to convergence
  double epsilonDivisor = 5.0;
  double epsilonFloorRatio = 1e-5;  // stop is blocked while epsilon > ratio * initial epsilon
  double rhoGrowthCap = 0.10;       // max relative growth of the revealed point count per step
  double tau = 4.0;                 // rho never drops below sqrt(tau * epsilon)
  double gammaForEnergy = 0.01;
  int threads = 1;
  std::uint64_t seed = 0;
  bool persistenceProgressivity = true;
  bool traceConvergedEnergy = false;  // evaluate the converged energy at every step (slow)
  std::size_t maxRelaxations = 100000;
};

/// Index of the ensemble member used to initialize the candidate.
std::size_t initialMemberIndex(std::uint64_t seed, std::size_t memberCount);

/// Assignment of one input (bidders) to the candidate (objects).
using Mapping = std::vector<std::size_t>;

/// Arithmetic-mean update: every candidate point moves to the mean of its N
/// matched points, a diagonal match counting as the point's own projection.
/// Critical-point locations are averaged the same way. Points whose mean
/// reaches the diagonal are snapped onto it (kept until final pruning).
PersistenceDiagram meanUpdate(const PersistenceDiagram& candidate,
                              const std::vector<PersistenceDiagram>& inputs,
                              const std::vector<Mapping>& mappings);

/// Sum over inputs of the cost of a fixed assignment to `candidate`.
double fixedAssignmentCost(const PersistenceDiagram& candidate,
                           const std::vector<PersistenceDiagram>& inputs,
                           const std::vector<Mapping>& mappings, const MetricParams& params);

/// Progressive optimizer state.
struct BarycenterState {
  PersistenceDiagram candidate;
  std::vector<PriceVector> priceVectors;  // one per input, laid out [candidate | ghosts]
  double epsilon = 0.0;
  double epsilonInitial = 0.0;
  double rho = 0.0;
  std::vector<double> energyHistory;  // approximate energy, one per relaxation
  std::size_t relaxationCount = 0;
  Stopwatch clock;

  // Inputs sorted by decreasing persistence; D_rho(f_i) is the first
  // revealed[i] points of sorted[i].
  std::vector<PersistenceDiagram> sorted;
  std::vector<std::size_t> revealed;
  std::vector<double> allPersistence;  // every input persistence, decreasing
  std::vector<Mapping> mappings;       // last assignment of each input
  std::vector<double> costs;           // last assignment cost of each input
  std::mt19937_64 rng;

  std::vector<PersistenceDiagram> thresholdedInputs() const;
  std::size_t revealedCount() const;
  bool fullyRevealed() const;
};

BarycenterState initializeProgressive(const Ensemble& inputs, const MetricParams& params,
                                      const BarycenterConfig& config);

/// One relaxation: a single memorized-price auction round per input (in
/// parallel), the mean update, and global epsilon scaling. Persistence
/// scaling follows when `allowReveal` is set. Returns the approximate energy
/// of the candidate the round was run against.
double relaxationStep(BarycenterState& state, const MetricParams& params,
                      const BarycenterConfig& config, bool allowReveal);

/// Lowers rho so the revealed point count grows by at most the configured
/// cap (at least one persistence level), never below sqrt(tau * epsilon),
/// and injects candidate points drawn among the newly revealed ones.
/// Returns the new rho.
double persistenceScaling(BarycenterState& state, const BarycenterConfig& config);

struct BarycenterResult {
  PersistenceDiagram barycenter;
  EnergyTrace trace;
  double approxEnergy = 0.0;  // of the returned snapshot
  std::size_t relaxations = 0;
  double elapsedSeconds = 0.0;
};

/// Progressive barycenter with price memorization, accuracy and persistence
/// progressivity, parallel assignment and an optional time budget.
BarycenterResult progressiveBarycenter(const Ensemble& inputs, const MetricParams& params,
                                       const BarycenterConfig& config = {});

struct ReferenceConfig {
  std::uint64_t seed = 0;
  int threads = 1;
  double gamma = 0.01;
  std::size_t maxIterations = 1000;
  std::size_t munkresGuard = kDefaultMunkresGuard;
};

/// Baseline relaxation: full assignments (exact or converged auction) to the
/// candidate, then the mean update, until assignments stop changing (exact)
/// or the energy fails to decrease twice in a row (auction).
BarycenterResult referenceBarycenter(const Ensemble& inputs, const MetricParams& params,
                                     Solver solver, const ReferenceConfig& config = {});

/// Sum of squared converged auction distances from `candidate` to each input.
double frechetEnergy(const PersistenceDiagram& candidate, const Ensemble& inputs,
                     const MetricParams& params, double gamma = 0.01, int threads = 1);

}  // namespace pdbary
