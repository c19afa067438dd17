#include "pdbary/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>

#include "parallel.hpp"
#include "pdbary/barycenter.hpp"
#include "pdbary/error.hpp"
#include "progressive.hpp"

namespace pdbary {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double convergedCost(const PersistenceDiagram& bidders, const PersistenceDiagram& objects,
                     const MetricParams& params, double gamma,
                     std::shared_ptr<const ObjectTree> tree = nullptr) {
  const AssignmentProblem problem(bidders, objects, params, std::move(tree));
  AuctionOptions options;
  options.gamma = gamma;
  return auctionUntilConverged(problem, options).result.cost;
}

double convergedDistance(const PersistenceDiagram& a, const PersistenceDiagram& b,
                         const MetricParams& params, double gamma,
                         std::shared_ptr<const ObjectTree> tree = nullptr) {
  return costToDistance(convergedCost(a, b, params, gamma, std::move(tree)), params.q);
}

double minimumOf(const PriceVector& prices, std::size_t begin, std::size_t end) {
  double m = kInf;
  for (std::size_t k = begin; k < end; ++k) m = std::min(m, prices[k]);
  return m;
}

void checkEnsemble(const Ensemble& inputs) {
  if (inputs.empty()) throw ValidationError("empty ensemble");
  PairType type = inputs.front().pairType;
  bool seen = false;
  for (const auto& d : inputs) {
    if (d.empty()) continue;
    if (seen && d.pairType != type) throw ValidationError("ensemble mixes pair types");
    type = d.pairType;
    seen = true;
  }
}

DistanceMatrix centroidDistanceMatrix(const std::vector<PersistenceDiagram>& centroids,
                                      const MetricParams& params, double gamma, int threads) {
  const std::size_t k = centroids.size();
  DistanceMatrix out(k, std::vector<double>(k, 0.0));
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a + 1; b < k; ++b) pairs.emplace_back(a, b);
  std::vector<double> values(pairs.size(), 0.0);
  detail::parallelFor(pairs.size(), threads, [&](std::size_t p) {
    values[p] = convergedDistance(centroids[pairs[p].first], centroids[pairs[p].second], params, gamma);
  });
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    out[pairs[p].first][pairs[p].second] = values[p];
    out[pairs[p].second][pairs[p].first] = values[p];
  }
  return out;
}

}  // namespace

std::vector<std::size_t> kmeansPlusPlusIndices(const Ensemble& inputs, std::size_t k,
                                               const MetricParams& params, std::uint64_t seed,
                                               double gamma, int threads) {
  checkEnsemble(inputs);
  validate(params);
  const std::size_t n = inputs.size();
  if (k == 0) throw ValidationError("k must be at least 1");
  if (k > n) throw ValidationError("k = " + std::to_string(k) + " exceeds the ensemble size " +
                                   std::to_string(n));
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> chosen;
  std::vector<bool> taken(n, false);
  std::vector<double> nearest(n, kInf);
  chosen.push_back(static_cast<std::size_t>(rng() % n));
  taken[chosen.back()] = true;

  while (chosen.size() < k) {
    const auto& last = inputs[chosen.back()];
    const auto tree = AssignmentProblem::buildTree(last, params);
    detail::parallelFor(n, threads, [&](std::size_t i) {
      if (taken[i]) {
        nearest[i] = 0.0;
        return;
      }
      const double d = convergedDistance(inputs[i], last, params, gamma, tree);
      nearest[i] = std::min(nearest[i], d * d);
    });
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (!taken[i]) total += nearest[i];
    std::size_t pick = kNoIndex;
    if (total > 0.0) {
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * total;
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (taken[i] || nearest[i] <= 0.0) continue;
        acc += nearest[i];
        pick = i;
        if (u < acc) break;
      }
    } else {
      std::vector<std::size_t> rest;
      for (std::size_t i = 0; i < n; ++i)
        if (!taken[i]) rest.push_back(i);
      pick = rest[static_cast<std::size_t>(rng() % rest.size())];
    }
    chosen.push_back(pick);
    taken[pick] = true;
  }
  return chosen;
}

std::vector<PersistenceDiagram> kmeansPlusPlusInit(const Ensemble& inputs, std::size_t k,
                                                   const MetricParams& params, std::uint64_t seed,
                                                   double gamma, int threads) {
  std::vector<PersistenceDiagram> out;
  for (std::size_t i : kmeansPlusPlusIndices(inputs, k, params, seed, gamma, threads))
    out.push_back(inputs[i]);
  return out;
}

std::vector<std::size_t> elkanPrune(double memberDistToOwner, const DistanceMatrix& centroidDistances,
                                    std::size_t owner, double gamma) {
  std::vector<std::size_t> out;
  const double inflate = (1.0 + gamma) * (1.0 + gamma);
  const double bound = 2.0 * inflate * memberDistToOwner;
  for (std::size_t j = 0; j < centroidDistances.size(); ++j) {
    if (j == owner || centroidDistances[owner][j] < bound) out.push_back(j);
  }
  return out;
}

std::size_t nearestCentroid(const std::vector<double>& distances,
                            const std::vector<std::size_t>& candidates, std::size_t owner) {
  std::size_t best = owner;
  double bestValue = owner < distances.size() ? distances[owner] : kInf;
  for (std::size_t j : candidates) {
    if (distances[j] < bestValue || (distances[j] == bestValue && best != owner && j < best)) {
      best = j;
      bestValue = distances[j];
    }
  }
  return best;
}

ClusteringResult clusterDiagrams(const Ensemble& inputs, const MetricParams& params,
                                 const ClusteringConfig& config) {
  checkEnsemble(inputs);
  validate(params);
  const std::size_t n = inputs.size();
  const std::size_t k = config.k;
  if (k == 0 || k > n)
    throw ValidationError("k must lie in [1, " + std::to_string(n) + "], got " + std::to_string(k));
  if (!(config.epsilonDivisor > 1.0)) throw ValidationError("epsilon divisor must exceed 1");
  if (!(config.rhoGrowthCap > 0.0 && config.rhoGrowthCap <= 1.0))
    throw ValidationError("rho growth cap must lie in (0,1]");
  if (!(config.gammaAssign > 0.0) || !(config.epsilonFloorRatio > 0.0) || !(config.tau > 0.0))
    throw ValidationError("clustering parameters must be positive");

  Stopwatch clock;
  ClusteringResult out;
  std::mt19937_64 rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
  const double revealWindow = config.timeLimit ? 0.1 * *config.timeLimit : kInf;

  PairType type = inputs.front().pairType;
  for (const auto& d : inputs)
    if (!d.empty()) {
      type = d.pairType;
      break;
    }
  std::vector<PersistenceDiagram> sorted;
  std::vector<double> allPersistence;
  for (const auto& d : inputs) {
    sorted.push_back(detail::sortedByPersistence(d));
    sorted.back().pairType = type;
    for (const auto& p : sorted.back().points) allPersistence.push_back(p.persistence());
  }
  std::sort(allPersistence.begin(), allPersistence.end(), std::greater<>());
  const double maxPersistence = allPersistence.empty() ? 0.0 : allPersistence.front();
  double rho = config.persistenceProgressivity ? 0.5 * maxPersistence : 0.0;

  std::vector<std::size_t> revealed(n, 0);
  const auto revealTo = [&](double threshold, std::vector<std::size_t>& added) {
    added.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i)
      while (revealed[i] < sorted[i].size() && sorted[i].points[revealed[i]].persistence() > threshold) {
        ++revealed[i];
        ++added[i];
      }
  };
  const auto thresholded = [&]() {
    std::vector<PersistenceDiagram> current(n);
    for (std::size_t i = 0; i < n; ++i) {
      current[i].pairType = type;
      current[i].label = sorted[i].label;
      current[i].points.assign(sorted[i].points.begin(),
                               sorted[i].points.begin() + static_cast<std::ptrdiff_t>(revealed[i]));
    }
    return current;
  };
  const auto revealedTotal = [&]() {
    return std::accumulate(revealed.begin(), revealed.end(), std::size_t{0});
  };
  {
    std::vector<std::size_t> ignored;
    revealTo(rho, ignored);
  }
  auto current = thresholded();

  const auto seeds = kmeansPlusPlusIndices(current, k, params, config.seed, config.gammaAssign,
                                           config.threads);
  std::vector<PersistenceDiagram> centroids;
  for (std::size_t j = 0; j < k; ++j) {
    centroids.push_back(current[seeds[j]]);
    centroids.back().label = "centroid_" + std::to_string(j);
    centroids.back().pairType = type;
  }

  // Exhaustive first assignment.
  std::vector<std::size_t> labels(n, 0);
  std::vector<double> ownDistance(n, 0.0);
  {
    std::vector<std::vector<double>> all(n, std::vector<double>(k, 0.0));
    std::vector<std::shared_ptr<const ObjectTree>> trees;
    for (const auto& c : centroids) trees.push_back(AssignmentProblem::buildTree(c, params));
    detail::parallelFor(n * k, config.threads, [&](std::size_t t) {
      const std::size_t i = t / k, j = t % k;
      all[i][j] = convergedDistance(current[i], centroids[j], params, config.gammaAssign, trees[j]);
    });
    std::vector<std::size_t> everyone(k);
    std::iota(everyone.begin(), everyone.end(), std::size_t{0});
    for (std::size_t i = 0; i < n; ++i) {
      labels[i] = nearestCentroid(all[i], everyone, 0);
      ownDistance[i] = all[i][labels[i]];
    }
    for (std::size_t j = 0; j < k; ++j) labels[seeds[j]] = j;
    out.distancesComputed += n * k;
  }

  double epsilonInitial = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const AssignmentProblem problem(current[i], centroids[labels[i]], params);
    epsilonInitial = std::max(epsilonInitial, problem.maxEdgeWeight());
  }
  if (epsilonInitial == 0.0) epsilonInitial = maxPersistence > 0.0 ? maxPersistence * maxPersistence : 1.0;
  epsilonInitial /= 4.0;
  double epsilon = epsilonInitial;
  const double epsilonFloor = config.epsilonFloorRatio * epsilonInitial;

  std::vector<PriceVector> prices(n);
  for (std::size_t i = 0; i < n; ++i)
    prices[i].assign(centroids[labels[i]].size() + revealed[i], 0.0);
  std::vector<Mapping> mappings(n);
  std::vector<double> costs(n, 0.0);
  std::vector<bool> migrated(n, false);

  for (std::size_t iteration = 0; iteration < config.maxIterations; ++iteration) {
    bool labelsStable = true;
    if (iteration > 0) {
      // Assignment.
      const auto C = centroidDistanceMatrix(centroids, params, config.gammaAssign, config.threads);
      std::vector<std::shared_ptr<const ObjectTree>> trees;
      for (const auto& c : centroids) trees.push_back(AssignmentProblem::buildTree(c, params));
      std::vector<std::size_t> next(n);
      std::vector<std::size_t> computed(n, 0), pruned(n, 0);
      detail::parallelFor(n, config.threads, [&](std::size_t i) {
        const std::size_t owner = labels[i];
        std::vector<double> d(k, kInf);
        d[owner] = convergedDistance(current[i], centroids[owner], params, config.gammaAssign, trees[owner]);
        std::vector<std::size_t> candidates(k);
        std::iota(candidates.begin(), candidates.end(), std::size_t{0});
        if (config.elkanPruning) candidates = elkanPrune(d[owner], C, owner, config.gammaAssign);
        for (std::size_t j : candidates)
          if (j != owner) d[j] = convergedDistance(current[i], centroids[j], params, config.gammaAssign, trees[j]);
        computed[i] = candidates.size();
        pruned[i] = k - candidates.size();
        next[i] = nearestCentroid(d, candidates, owner);
        ownDistance[i] = d[next[i]];
      });
      for (std::size_t i = 0; i < n; ++i) {
        out.distancesComputed += computed[i];
        out.distancesPruned += pruned[i];
        if (next[i] != labels[i]) {
          labelsStable = false;
          migrated[i] = true;
        }
      }
      labels = std::move(next);
    }

    // Empty clusters take the member farthest from its centroid.
    for (std::size_t j = 0; j < k; ++j) {
      std::vector<std::size_t> sizes(k, 0);
      for (std::size_t l : labels) ++sizes[l];
      if (sizes[j] > 0) continue;
      std::size_t far = kNoIndex;
      for (std::size_t i = 0; i < n; ++i) {
        if (sizes[labels[i]] < 2) continue;
        if (far == kNoIndex || ownDistance[i] > ownDistance[far]) far = i;
      }
      if (far == kNoIndex) continue;
      labels[far] = j;
      ownDistance[far] = 0.0;
      migrated[far] = true;
      labelsStable = false;
      centroids[j] = current[far];
      centroids[j].label = "centroid_" + std::to_string(j);
      centroids[j].pairType = type;
    }

    // Update: one memorized-price round per member, migrated members first
    // catch up to the global epsilon from zeroed prices.
    std::vector<std::shared_ptr<const ObjectTree>> trees;
    for (const auto& c : centroids) trees.push_back(AssignmentProblem::buildTree(c, params));
    std::optional<RoundDeadline> deadline;
    if (config.timeLimit)
      deadline = RoundDeadline{clock.after(*config.timeLimit), epsilonInitial, config.epsilonDivisor};
    detail::parallelFor(n, config.threads, [&](std::size_t i) {
      const auto& centroid = centroids[labels[i]];
      const AssignmentProblem problem(current[i], centroid, params, trees[labels[i]]);
      if (migrated[i]) {
        PriceVector zero(centroid.size() + revealed[i], 0.0);
        prices[i] = auctionDownToEpsilon(problem, std::move(zero), epsilon, config.epsilonDivisor).second;
      }
      auto [result, updated] = singleRoundWithPrices(problem, std::move(prices[i]), epsilon, deadline);
      prices[i] = std::move(updated);
      costs[i] = result.cost;
      mappings[i] = std::move(result.mapping);
    });
    std::fill(migrated.begin(), migrated.end(), false);

    std::vector<std::vector<std::size_t>> members(k);
    for (std::size_t i = 0; i < n; ++i) members[labels[i]].push_back(i);
    detail::parallelFor(k, config.threads, [&](std::size_t j) {
      if (members[j].empty()) return;
      std::vector<PersistenceDiagram> group;
      std::vector<Mapping> groupMappings;
      for (std::size_t i : members[j]) {
        group.push_back(current[i]);
        groupMappings.push_back(mappings[i]);
      }
      centroids[j] = meanUpdate(centroids[j], group, groupMappings);
      std::vector<PriceVector*> groupPrices;
      for (std::size_t i : members[j]) groupPrices.push_back(&prices[i]);
      detail::pruneSnapped(centroids[j], groupPrices);
    });
    double energy = 0.0;
    for (double c : costs) energy += c;

    TraceRow row;
    row.step = iteration;
    row.epsilon = epsilon;
    row.rho = rho;
    for (const auto& c : centroids) row.candidateSize += c.size();
    row.approxEnergy = energy;

    epsilon = std::max(epsilon / config.epsilonDivisor, epsilonFloor);

    // Persistence progressivity with one global threshold.
    const bool allowReveal = config.persistenceProgressivity && clock.seconds() < revealWindow;
    if (allowReveal) {
      const double nextRho = detail::scheduleRho(allPersistence, revealedTotal(), rho, epsilon,
                                                 config.tau, config.rhoGrowthCap);
      if (nextRho < rho) {
        const auto before = revealed;
        std::vector<std::size_t> added;
        revealTo(nextRho, added);
        rho = nextRho;
        for (std::size_t j = 0; j < k; ++j) {
          std::vector<std::size_t> gained;
          for (std::size_t i : members[j]) gained.push_back(revealed[i] - before[i]);
          const std::size_t pick = detail::pickDonor(gained, rng);
          const std::size_t m = centroids[j].size();
          std::size_t injected = 0;
          if (pick != kNoIndex) {
            const std::size_t donor = members[j][pick];
            injected = gained[pick];
            for (std::size_t r = before[donor]; r < revealed[donor]; ++r) {
              DiagramPoint p = sorted[donor].points[r];
              p.isDiagonal = false;
              centroids[j].points.push_back(p);
            }
          }
          for (std::size_t i : members[j]) {
            PriceVector& old = prices[i];
            double minReal = minimumOf(old, 0, m);
            double minGhost = minimumOf(old, m, old.size());
            if (!std::isfinite(minReal)) minReal = std::isfinite(minGhost) ? minGhost : 0.0;
            if (!std::isfinite(minGhost)) minGhost = minReal;
            PriceVector next;
            next.reserve(old.size() + injected + added[i]);
            next.insert(next.end(), old.begin(), old.begin() + static_cast<std::ptrdiff_t>(m));
            next.insert(next.end(), injected, minReal);
            next.insert(next.end(), old.begin() + static_cast<std::ptrdiff_t>(m), old.end());
            next.insert(next.end(), added[i], minGhost);
            old = std::move(next);
          }
        }
        current = thresholded();
        labelsStable = false;
      }
    }

    row.elapsedSeconds = clock.seconds();
    out.trace.push_back(row);
    out.iterations = iteration + 1;

    const double elapsed = clock.seconds();
    const bool floorReached = epsilon <= epsilonFloor * (1.0 + 1e-12);
    const bool revealDone = !config.persistenceProgressivity || revealedTotal() == allPersistence.size() ||
                            elapsed >= revealWindow || (floorReached && rho <= std::sqrt(config.tau * epsilon));
    if (iteration > 0 && labelsStable && floorReached && revealDone) break;
    if (config.timeLimit && elapsed >= *config.timeLimit) break;
  }

  out.labels = std::move(labels);
  for (auto& c : centroids) {
    out.centroids.push_back(withoutDiagonalPoints(c));
    out.centroids.back().label = c.label;
  }
  out.elapsedSeconds = clock.seconds();
  return out;
}

std::vector<double> clusterEnergies(const Ensemble& inputs, const std::vector<std::size_t>& labels,
                                    const std::vector<PersistenceDiagram>& centroids,
                                    const MetricParams& params, double gamma, int threads) {
  if (labels.size() != inputs.size()) throw ValidationError("one label per member is required");
  std::vector<Ensemble> groups(centroids.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (labels[i] >= centroids.size()) throw ValidationError("label out of range");
    groups[labels[i]].push_back(inputs[i]);
  }
  std::vector<double> out(centroids.size(), 0.0);
  for (std::size_t j = 0; j < centroids.size(); ++j)
    if (!groups[j].empty()) out[j] = frechetEnergy(centroids[j], groups[j], params, gamma, threads);
  return out;
}

bool samePartition(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  if (a.size() != b.size()) return false;
  std::map<std::size_t, std::size_t> forward, backward;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto [f, fNew] = forward.emplace(a[i], b[i]);
    const auto [g, gNew] = backward.emplace(b[i], a[i]);
    if ((!fNew && f->second != b[i]) || (!gNew && g->second != a[i])) return false;
  }
  return true;
}

}  // namespace pdbary
