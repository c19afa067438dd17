#include "pdbary/barycenter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "parallel.hpp"
#include "progressive.hpp"
#include "pdbary/error.hpp"

namespace pdbary {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

PairType ensembleType(const Ensemble& inputs) {
  for (const auto& d : inputs)
    if (!d.empty()) return d.pairType;
  return inputs.front().pairType;
}

std::vector<std::size_t> invert(const Mapping& mapping) {
  std::vector<std::size_t> inverse(mapping.size(), kNoIndex);
  for (std::size_t b = 0; b < mapping.size(); ++b) inverse[mapping[b]] = b;
  return inverse;
}

double minimumOf(const PriceVector& prices, std::size_t begin, std::size_t end) {
  double m = kInf;
  for (std::size_t k = begin; k < end; ++k) m = std::min(m, prices[k]);
  return m;
}

struct Assignments {
  std::vector<Mapping> mappings;
  std::vector<double> costs;
  double total = 0.0;
};

Assignments solveAll(const PersistenceDiagram& candidate, const std::vector<PersistenceDiagram>& inputs,
                     const MetricParams& params, Solver solver, double gamma, int threads,
                     std::size_t munkresGuard) {
  Assignments out;
  out.mappings.resize(inputs.size());
  out.costs.resize(inputs.size());
  const auto tree = AssignmentProblem::buildTree(candidate, params);
  detail::parallelFor(inputs.size(), threads, [&](std::size_t i) {
    const AssignmentProblem problem(inputs[i], candidate, params, tree);
    AssignmentResult result;
    if (solver == Solver::Munkres) {
      result = munkresAssignment(problem, munkresGuard);
    } else {
      AuctionOptions options;
      options.gamma = gamma;
      result = auctionUntilConverged(problem, options).result;
    }
    out.costs[i] = result.cost;
    out.mappings[i] = std::move(result.mapping);
  });
  for (double c : out.costs) out.total += c;
  return out;
}

}  // namespace

std::size_t initialMemberIndex(std::uint64_t seed, std::size_t memberCount) {
  if (memberCount == 0) throw ValidationError("empty ensemble");
  std::mt19937_64 rng(seed);
  return static_cast<std::size_t>(rng() % memberCount);
}

PersistenceDiagram meanUpdate(const PersistenceDiagram& candidate,
                              const std::vector<PersistenceDiagram>& inputs,
                              const std::vector<Mapping>& mappings) {
  PersistenceDiagram next = candidate;
  const std::size_t m = candidate.size();
  if (m == 0 || inputs.empty()) return next;
  const double count = static_cast<double>(inputs.size());
  std::vector<DiagramPoint> sums(m);
  for (auto& s : sums) {
    s.birth = s.death = 0.0;
    s.birthLocation = s.deathLocation = {0.0, 0.0, 0.0};
  }
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const auto owners = invert(mappings[i]);
    const std::size_t nb = inputs[i].size();
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t owner = owners[j];
      const DiagramPoint& self = candidate.points[j];
      DiagramPoint target;
      if (owner < nb) {
        target = inputs[i].points[owner];
      } else {
        target = diagonalProjection(self);
      }
      sums[j].birth += target.birth;
      sums[j].death += target.death;
      for (int k = 0; k < 3; ++k) {
        sums[j].birthLocation[k] += target.birthLocation[k];
        sums[j].deathLocation[k] += target.deathLocation[k];
      }
    }
  }
  for (std::size_t j = 0; j < m; ++j) {
    DiagramPoint& p = next.points[j];
    p.birth = sums[j].birth / count;
    p.death = sums[j].death / count;
    for (int k = 0; k < 3; ++k) {
      p.birthLocation[k] = sums[j].birthLocation[k] / count;
      p.deathLocation[k] = sums[j].deathLocation[k] / count;
    }
    if (p.death <= p.birth) {
      const double mid = (p.birth + p.death) / 2.0;
      p.birth = p.death = mid;
    }
  }
  return next;
}

double fixedAssignmentCost(const PersistenceDiagram& candidate,
                           const std::vector<PersistenceDiagram>& inputs,
                           const std::vector<Mapping>& mappings, const MetricParams& params) {
  double total = 0.0;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const AssignmentProblem problem(inputs[i], candidate, params);
    total += problem.mappingCost(mappings[i]);
  }
  return total;
}

std::vector<PersistenceDiagram> BarycenterState::thresholdedInputs() const {
  std::vector<PersistenceDiagram> out(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    out[i].pairType = sorted[i].pairType;
    out[i].label = sorted[i].label;
    out[i].points.assign(sorted[i].points.begin(),
                         sorted[i].points.begin() + static_cast<std::ptrdiff_t>(revealed[i]));
  }
  return out;
}

std::size_t BarycenterState::revealedCount() const {
  return std::accumulate(revealed.begin(), revealed.end(), std::size_t{0});
}

bool BarycenterState::fullyRevealed() const { return revealedCount() == allPersistence.size(); }

BarycenterState initializeProgressive(const Ensemble& inputs, const MetricParams& params,
                                      const BarycenterConfig& config) {
  if (inputs.empty()) throw ValidationError("empty ensemble");
  validate(params);
  if (!(config.epsilonDivisor > 1.0)) throw ValidationError("epsilon divisor must exceed 1");
  if (!(config.rhoGrowthCap > 0.0 && config.rhoGrowthCap <= 1.0))
    throw ValidationError("rho growth cap must lie in (0,1]");
  if (!(config.epsilonFloorRatio > 0.0) || !(config.tau > 0.0) || !(config.gammaForEnergy > 0.0))
    throw ValidationError("barycenter parameters must be positive");

  BarycenterState state;
  state.rng.seed(config.seed);
  const std::size_t n = inputs.size();
  const PairType type = ensembleType(inputs);
  state.sorted.reserve(n);
  for (const auto& d : inputs) {
    if (!d.empty() && d.pairType != type) throw ValidationError("ensemble mixes pair types");
    state.sorted.push_back(detail::sortedByPersistence(d));
    state.sorted.back().pairType = type;
    for (const auto& p : state.sorted.back().points) state.allPersistence.push_back(p.persistence());
  }
  std::sort(state.allPersistence.begin(), state.allPersistence.end(), std::greater<>());
  const double maxPersistence = state.allPersistence.empty() ? 0.0 : state.allPersistence.front();
  state.rho = config.persistenceProgressivity ? 0.5 * maxPersistence : 0.0;

  state.revealed.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    auto& count = state.revealed[i];
    while (count < state.sorted[i].size() && state.sorted[i].points[count].persistence() > state.rho)
      ++count;
  }
  const auto current = state.thresholdedInputs();
  const std::size_t first = static_cast<std::size_t>(state.rng() % n);
  state.candidate = current[first];
  state.candidate.label = "barycenter";
  state.candidate.pairType = type;

  double maxWeight = 0.0;
  const auto tree = AssignmentProblem::buildTree(state.candidate, params);
  for (const auto& d : current) {
    const AssignmentProblem problem(d, state.candidate, params, tree);
    maxWeight = std::max(maxWeight, problem.maxEdgeWeight());
  }
  if (maxWeight == 0.0) {
    // Nothing revealed yet or nothing to match; any scale works.
    maxWeight = maxPersistence > 0.0 ? maxPersistence * maxPersistence : 1.0;
  }
  state.epsilonInitial = maxWeight / 4.0;
  state.epsilon = state.epsilonInitial;

  state.priceVectors.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    state.priceVectors[i].assign(state.candidate.size() + state.revealed[i], 0.0);
  state.mappings.resize(n);
  state.costs.assign(n, 0.0);
  return state;
}

double relaxationStep(BarycenterState& state, const MetricParams& params,
                      const BarycenterConfig& config, bool allowReveal) {
  const auto current = state.thresholdedInputs();
  const auto tree = AssignmentProblem::buildTree(state.candidate, params);
  std::optional<RoundDeadline> deadline;
  if (config.timeLimit)
    deadline = RoundDeadline{state.clock.after(*config.timeLimit), state.epsilonInitial, config.epsilonDivisor};
  detail::parallelFor(current.size(), config.threads, [&](std::size_t i) {
    const AssignmentProblem problem(current[i], state.candidate, params, tree);
    auto [result, prices] =
        singleRoundWithPrices(problem, std::move(state.priceVectors[i]), state.epsilon, deadline);
    state.priceVectors[i] = std::move(prices);
    state.costs[i] = result.cost;
    state.mappings[i] = std::move(result.mapping);
  });
  double energy = 0.0;
  for (double c : state.costs) energy += c;

  state.candidate = meanUpdate(state.candidate, current, state.mappings);
  std::vector<PriceVector*> prices;
  for (auto& p : state.priceVectors) prices.push_back(&p);
  detail::pruneSnapped(state.candidate, prices);
  state.epsilon = std::max(state.epsilon / config.epsilonDivisor,
                           config.epsilonFloorRatio * state.epsilonInitial);
  state.energyHistory.push_back(energy);
  ++state.relaxationCount;
  if (allowReveal && config.persistenceProgressivity) persistenceScaling(state, config);
  return energy;
}

double persistenceScaling(BarycenterState& state, const BarycenterConfig& config) {
  const double rho = detail::scheduleRho(state.allPersistence, state.revealedCount(), state.rho,
                                         state.epsilon, config.tau, config.rhoGrowthCap);
  if (rho >= state.rho) return state.rho;

  const std::size_t n = state.sorted.size();
  const auto before = state.revealed;
  std::vector<std::size_t> added(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    auto& r = state.revealed[i];
    while (r < state.sorted[i].size() && state.sorted[i].points[r].persistence() > rho) ++r;
    added[i] = r - before[i];
  }
  state.rho = rho;
  const std::size_t donor = detail::pickDonor(added, state.rng);
  if (donor == kNoIndex) return rho;

  const std::size_t m = state.candidate.size();
  const std::size_t injected = added[donor];
  for (std::size_t r = before[donor]; r < state.revealed[donor]; ++r) {
    DiagramPoint p = state.sorted[donor].points[r];
    p.isDiagonal = false;
    state.candidate.points.push_back(p);
  }

  for (std::size_t i = 0; i < n; ++i) {
    PriceVector& old = state.priceVectors[i];
    const std::size_t ghosts = old.size() - m;
    double minReal = minimumOf(old, 0, m);
    double minGhost = minimumOf(old, m, old.size());
    if (!std::isfinite(minReal)) minReal = std::isfinite(minGhost) ? minGhost : 0.0;
    if (!std::isfinite(minGhost)) minGhost = minReal;
    PriceVector next;
    next.reserve(m + injected + ghosts + added[i]);
    next.insert(next.end(), old.begin(), old.begin() + static_cast<std::ptrdiff_t>(m));
    next.insert(next.end(), injected, minReal);
    next.insert(next.end(), old.begin() + static_cast<std::ptrdiff_t>(m), old.end());
    next.insert(next.end(), added[i], minGhost);
    old = std::move(next);
  }
  return rho;
}

BarycenterResult progressiveBarycenter(const Ensemble& inputs, const MetricParams& params,
                                       const BarycenterConfig& config) {
  BarycenterState state = initializeProgressive(inputs, params, config);
  BarycenterResult out;
  const double revealWindow = config.timeLimit ? 0.1 * *config.timeLimit : kInf;
  const double epsilonFloor = config.epsilonFloorRatio * state.epsilonInitial;

  PersistenceDiagram best;
  double bestEnergy = kInf;
  bool haveBest = false;
  double previous = kInf;
  bool comparable = false;
  int increases = 0;

  for (std::size_t step = 0; step < config.maxRelaxations; ++step) {
    TraceRow row;
    row.step = step;
    row.epsilon = state.epsilon;
    row.rho = state.rho;
    row.candidateSize = state.candidate.size();
    PersistenceDiagram before = state.candidate;
    const std::size_t revealedBefore = state.revealedCount();
    const bool allowReveal = state.clock.seconds() < revealWindow;

    const double energy = relaxationStep(state, params, config, allowReveal);
    const bool revealed = state.revealedCount() != revealedBefore;

    if (comparable)
      increases = energy >= previous ? increases + 1 : 0;
    else
      increases = 0;
    if (energy < bestEnergy) {
      bestEnergy = energy;
      best = std::move(before);
      haveBest = true;
    }
    row.approxEnergy = energy;
    row.elapsedSeconds = state.clock.seconds();
    if (config.traceConvergedEnergy)
      row.convergedEnergy = frechetEnergy(withoutDiagonalPoints(haveBest ? best : state.candidate),
                                          inputs, params, config.gammaForEnergy, config.threads);
    out.trace.push_back(row);

    if (revealed) {
      // Later energies are measured against larger inputs.
      bestEnergy = kInf;
      haveBest = false;
      comparable = false;
    } else {
      comparable = true;
    }
    previous = energy;

    const double elapsed = state.clock.seconds();
    const bool floorReached = state.epsilon <= epsilonFloor * (1.0 + 1e-12);
    const bool revealDone = !config.persistenceProgressivity || state.fullyRevealed() ||
                            elapsed >= revealWindow ||
                            (floorReached && state.rho <= std::sqrt(config.tau * state.epsilon));
    if (revealDone && floorReached && increases >= 2) break;
    if (config.timeLimit && elapsed >= *config.timeLimit) break;
  }

  out.barycenter = withoutDiagonalPoints(haveBest ? best : state.candidate);
  out.barycenter.label = "barycenter";
  out.approxEnergy = haveBest ? bestEnergy : (state.energyHistory.empty() ? 0.0 : state.energyHistory.back());
  out.relaxations = state.relaxationCount;
  out.elapsedSeconds = state.clock.seconds();
  return out;
}

BarycenterResult referenceBarycenter(const Ensemble& inputs, const MetricParams& params,
                                     Solver solver, const ReferenceConfig& config) {
  if (inputs.empty()) throw ValidationError("empty ensemble");
  validate(params);
  Stopwatch clock;
  const PairType type = ensembleType(inputs);
  PersistenceDiagram candidate = inputs[initialMemberIndex(config.seed, inputs.size())];
  candidate.label = "barycenter";
  candidate.pairType = type;
  if (solver == Solver::Munkres) {
    for (const auto& d : inputs)
      if (d.size() + candidate.size() > config.munkresGuard)
        throw SizeGuardError("exact assignment refused: " + std::to_string(d.size() + candidate.size()) +
                             " points exceed the Munkres size guard of " +
                             std::to_string(config.munkresGuard) + "; use the auction solver");
  }

  BarycenterResult out;
  PersistenceDiagram best = candidate;
  double bestEnergy = kInf;
  double previous = kInf;
  int increases = 0;
  std::vector<Mapping> previousMappings;
  std::size_t iteration = 0;
  for (; iteration < config.maxIterations; ++iteration) {
    auto assignments = solveAll(candidate, inputs, params, solver, config.gamma, config.threads,
                                config.munkresGuard);
    const double energy = assignments.total;
    if (energy < bestEnergy) {
      bestEnergy = energy;
      best = candidate;
    }
    TraceRow row;
    row.step = iteration;
    row.candidateSize = candidate.size();
    row.approxEnergy = energy;
    row.elapsedSeconds = clock.seconds();
    out.trace.push_back(row);

    bool stop = false;
    if (solver == Solver::Munkres) {
      stop = assignments.mappings == previousMappings || energy >= previous;
    } else {
      increases = energy >= previous ? increases + 1 : 0;
      stop = increases >= 2;
    }
    previous = energy;
    if (stop) break;
    candidate = meanUpdate(candidate, inputs, assignments.mappings);
    previousMappings = std::move(assignments.mappings);
  }
  out.barycenter = withoutDiagonalPoints(best);
  out.barycenter.label = "barycenter";
  out.approxEnergy = bestEnergy;
  out.relaxations = std::min(iteration + 1, config.maxIterations);
  out.elapsedSeconds = clock.seconds();
  return out;
}

double frechetEnergy(const PersistenceDiagram& candidate, const Ensemble& inputs,
                     const MetricParams& params, double gamma, int threads) {
  if (!(gamma > 0.0)) throw ValidationError("gamma must be positive");
  std::vector<double> costs(inputs.size(), 0.0);
  const auto tree = AssignmentProblem::buildTree(candidate, params);
  detail::parallelFor(inputs.size(), threads, [&](std::size_t i) {
    const AssignmentProblem problem(inputs[i], candidate, params, tree);
    AuctionOptions options;
    options.gamma = gamma;
    costs[i] = auctionUntilConverged(problem, options).result.cost;
  });
  double total = 0.0;
  for (double c : costs) total += c;
  return total;
}

}  // namespace pdbary
