#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "oracles/oracles.hpp"
#include "pdbary/assignment.hpp"
#include "pdbary/barycenter.hpp"
#include "pdbary/clustering.hpp"
#include "pdbary/error.hpp"

using namespace pdbary;

namespace {

PersistenceDiagram shifted(const PersistenceDiagram& d, double by) {
  PersistenceDiagram out = d;
  for (auto& p : out.points) {
    p.birth += by;
    p.death += by;
  }
  return out;
}

Ensemble twoGroups(std::mt19937_64& rng, std::size_t perGroup, double noise) {
  auto a = oracle::randomDiagram(rng, 8);
  PersistenceDiagram b;
  for (int k = 0; k < 5; ++k) b.points.push_back(makePoint(0.0, 3.0 + k));
  std::uniform_real_distribution<double> u(-noise, noise);
  Ensemble out;
  for (std::size_t i = 0; i < 2 * perGroup; ++i) {
    PersistenceDiagram d = i % 2 == 0 ? a : b;
    for (auto& p : d.points) {
      p.death += u(rng);
      if (p.death < p.birth) p.death = p.birth;
    }
    out.push_back(d);
  }
  return out;
}

}  // namespace

TEST_CASE("k-means++ seeding") {
  std::mt19937_64 rng(1);
  Ensemble inputs;
  for (int i = 0; i < 6; ++i) inputs.push_back(oracle::randomDiagram(rng, 5));
  MetricParams params;
  auto all = kmeansPlusPlusIndices(inputs, 6, params, 3);
  std::set<std::size_t> distinct(all.begin(), all.end());
  CHECK(distinct.size() == 6);
  CHECK(kmeansPlusPlusIndices(inputs, 1, params, 3).size() == 1);
  CHECK(kmeansPlusPlusIndices(inputs, 1, params, 3) == kmeansPlusPlusIndices(inputs, 1, params, 3));
  CHECK_THROWS_AS(kmeansPlusPlusIndices(inputs, 7, params, 0), ValidationError);
  CHECK_THROWS_AS(kmeansPlusPlusIndices({}, 1, params, 0), ValidationError);

  // duplicate groups: within-group distance 0, so the second pick is always across
  PersistenceDiagram a, b;
  a.points = {makePoint(0, 1)};
  b.points = {makePoint(0, 6), makePoint(1, 4)};
  Ensemble groups = {a, a, a, b, b, b, b};
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto picks = kmeansPlusPlusIndices(groups, 2, params, seed);
    CHECK((picks[0] < 3) != (picks[1] < 3));
  }
  auto centroids = kmeansPlusPlusInit(groups, 2, params, 5);
  CHECK(centroids.size() == 2);
}

TEST_CASE("elkan pruning examples") {
  DistanceMatrix one = {{0.0}};
  CHECK(elkanPrune(3.0, one, 0) == std::vector<std::size_t>{0});
  DistanceMatrix three = {{0, 1, 2}, {1, 0, 1.5}, {2, 1.5, 0}};
  CHECK(elkanPrune(0.0, three, 1) == std::vector<std::size_t>{1});
  CHECK(elkanPrune(0.6, three, 0) == std::vector<std::size_t>({0, 1}));
  CHECK(elkanPrune(0.6, three, 0, 0.0) == std::vector<std::size_t>({0, 1}));
  CHECK(elkanPrune(10.0, three, 2).size() == 3);
}

TEST_CASE("nearest centroid ties keep the owner, then the lowest index") {
  std::vector<double> d = {1.0, 1.0, 1.0};
  CHECK(nearestCentroid(d, {0, 1, 2}, 2) == 2);
  d = {1.0, 0.5, 0.5};
  CHECK(nearestCentroid(d, {0, 1, 2}, 0) == 1);
}

TEST_CASE("elkan pruning agrees with exhaustive assignment") {
  std::mt19937_64 rng(31);
  MetricParams params;
  for (int trial = 0; trial < 25; ++trial) {
    if (trial % 2) params.alpha = 0.5; else params.alpha = 0.0;
    const std::size_t k = 2 + rng() % 4;
    std::vector<PersistenceDiagram> centroids;
    for (std::size_t j = 0; j < k; ++j)
      centroids.push_back(shifted(oracle::randomDiagram(rng, 6, PairType::MinSaddle, true),
                                  0.3 * static_cast<double>(j)));
    DistanceMatrix C(k, std::vector<double>(k, 0.0));
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b)
        if (a != b) C[a][b] = auctionUntilConverged(centroids[a], centroids[b], params, 0.01).distance;
    for (int m = 0; m < 10; ++m) {
      auto member = shifted(oracle::randomDiagram(rng, 6, PairType::MinSaddle, true), 0.3 * (rng() % k));
      std::vector<double> d(k);
      for (std::size_t j = 0; j < k; ++j)
        d[j] = auctionUntilConverged(member, centroids[j], params, 0.01).distance;
      std::vector<std::size_t> everyone(k);
      std::iota(everyone.begin(), everyone.end(), std::size_t{0});
      const std::size_t owner = rng() % k;
      const auto candidates = elkanPrune(d[owner], C, owner, 0.01);
      CHECK(std::find(candidates.begin(), candidates.end(), owner) != candidates.end());
      CHECK(nearestCentroid(d, candidates, owner) == nearestCentroid(d, everyone, owner));
    }
  }
}

TEST_CASE("same partition") {
  CHECK(samePartition({0, 0, 1, 2}, {2, 2, 0, 1}));
  CHECK(!samePartition({0, 0, 1}, {0, 1, 1}));
  CHECK(!samePartition({0, 1}, {0, 0}));
  CHECK(!samePartition({0}, {0, 0}));
}

TEST_CASE("clustering with k = 1 matches the barycenter") {
  std::mt19937_64 rng(8);
  auto inputs = twoGroups(rng, 5, 0.05);
  MetricParams params;
  ClusteringConfig config;
  config.k = 1;
  auto r = clusterDiagrams(inputs, params, config);
  REQUIRE(r.labels.size() == inputs.size());
  for (auto l : r.labels) CHECK(l == 0);
  const double clustered = clusterEnergies(inputs, r.labels, r.centroids, params)[0];
  const double reference = frechetEnergy(progressiveBarycenter(inputs, params).barycenter, inputs, params);
  CHECK(clustered <= 1.05 * reference);
}

TEST_CASE("two groups of identical diagrams split perfectly") {
  PersistenceDiagram a, b;
  a.points = {makePoint(0, 1), makePoint(0.2, 0.5)};
  b.points = {makePoint(0, 8), makePoint(2, 5), makePoint(1, 3)};
  Ensemble inputs = {a, b, a, b, a, b, b};
  MetricParams params;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    ClusteringConfig config;
    config.k = 2;
    config.seed = seed;
    auto r = clusterDiagrams(inputs, params, config);
    CHECK(samePartition(r.labels, {0, 1, 0, 1, 0, 1, 1}));
    const auto& ca = r.centroids[r.labels[0]];
    const auto& cb = r.centroids[r.labels[1]];
    CHECK(auctionUntilConverged(ca, a, params, 0.01).distance == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(auctionUntilConverged(cb, b, params, 0.01).distance == doctest::Approx(0.0).epsilon(1e-9));
  }
}

TEST_CASE("clustering is deterministic; elkan pruning and threads do not change labels") {
  std::mt19937_64 rng(12);
  auto inputs = twoGroups(rng, 8, 0.2);
  MetricParams params;
  ClusteringConfig config;
  config.k = 2;
  config.seed = 4;
  auto a = clusterDiagrams(inputs, params, config);
  auto b = clusterDiagrams(inputs, params, config);
  CHECK(a.labels == b.labels);
  CHECK(a.centroids[0].points == b.centroids[0].points);
  config.threads = 3;
  auto c = clusterDiagrams(inputs, params, config);
  CHECK(a.labels == c.labels);
  CHECK(a.centroids[1].points == c.centroids[1].points);
  config.threads = 1;
  config.elkanPruning = false;
  auto d = clusterDiagrams(inputs, params, config);
  CHECK(a.labels == d.labels);
  CHECK(d.distancesPruned == 0);
}

TEST_CASE("clustering validation") {
  MetricParams params;
  ClusteringConfig config;
  CHECK_THROWS_AS(clusterDiagrams({}, params, config), ValidationError);
  config.k = 3;
  PersistenceDiagram d;
  d.points = {makePoint(0, 1)};
  CHECK_THROWS_AS(clusterDiagrams({d, d}, params, config), ValidationError);
}

TEST_CASE("time-limited clustering stops") {
  std::mt19937_64 rng(2);
  auto inputs = twoGroups(rng, 10, 0.3);
  ClusteringConfig config;
  config.k = 2;
  config.timeLimit = 0.2;
  auto r = clusterDiagrams(inputs, MetricParams{}, config);
  CHECK(r.elapsedSeconds < 1.0);
  CHECK(r.labels.size() == inputs.size());
}
