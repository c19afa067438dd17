#pragma once

#include <chrono>
#include <cstddef>
#include <deque>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "pdbary/diagram.hpp"
#include "pdbary/kd_tree.hpp"

namespace pdbary {

/// Bijection between augmented bidders and augmented objects.
struct AssignmentResult {
  std::vector<std::size_t> mapping;  // bidder index -> object index
  double cost = 0.0;                 // sum of matching costs (squared distances for q = 2)
  double distance = 0.0;             // cost^(1/q)
};

/// One price per augmented object, each >= 0.
using PriceVector = std::vector<double>;

/// The balanced assignment problem between two diagrams.
///
/// Index layout (nb = |bidders|, no = |objects|, n = nb + no):
///   bidders  [0, nb) real bidder points, [nb, n) diagonal ghosts,
///   objects  [0, no) real object points, [no, n) diagonal ghosts.
/// A real point matched to any ghost pays the cost of its own diagonal
/// projection; ghost-ghost matches are free. This is exactly the
/// augmentation-preserving formulation, with interchangeable ghosts.
class AssignmentProblem {
 public:
  /// `objectTree` may be supplied to share one read-only kd-tree across
  /// several problems with the same object diagram; it is built when absent.
  AssignmentProblem(const PersistenceDiagram& bidders, const PersistenceDiagram& objects,
                    const MetricParams& params,
                    std::shared_ptr<const ObjectTree> objectTree = nullptr);

  std::size_t size() const noexcept { return realBidders_ + realObjects_; }
  std::size_t realBidders() const noexcept { return realBidders_; }
  std::size_t realObjects() const noexcept { return realObjects_; }
  bool isGhostBidder(std::size_t bidder) const noexcept { return bidder >= realBidders_; }
  bool isGhostObject(std::size_t object) const noexcept { return object >= realObjects_; }

  const MetricParams& params() const noexcept { return params_; }
  PairType pairType() const noexcept { return pairType_; }
  const PersistenceDiagram& bidders() const noexcept { return *bidders_; }
  const PersistenceDiagram& objects() const noexcept { return *objects_; }
  const ObjectTree& tree() const noexcept { return *tree_; }
  const std::shared_ptr<const ObjectTree>& sharedTree() const noexcept { return tree_; }

  double bidderDiagonalCost(std::size_t bidder) const noexcept { return bidderDiag_[bidder]; }
  double objectDiagonalCost(std::size_t object) const noexcept { return objectDiag_[object]; }

  /// Matching cost between an augmented bidder and an augmented object.
  double cost(std::size_t bidder, std::size_t object) const;

  /// Largest edge weight of the bipartite graph, ghost-ghost edges excluded.
  double maxEdgeWeight() const;

  /// Sum of costs under a complete mapping.
  double mappingCost(const std::vector<std::size_t>& mapping) const;

  static std::shared_ptr<const ObjectTree> buildTree(const PersistenceDiagram& objects,
                                                     const MetricParams& params);

 private:
  const PersistenceDiagram* bidders_;
  const PersistenceDiagram* objects_;
  MetricParams params_;
  PairType pairType_;
  std::size_t realBidders_;
  std::size_t realObjects_;
  std::vector<double> bidderDiag_;
  std::vector<double> objectDiag_;
  std::shared_ptr<const ObjectTree> tree_;
};

/// Converts a total cost to a distance (cost^(1/q)).
double costToDistance(double cost, double q);

// --- exact solver ---------------------------------------------------------

inline constexpr std::size_t kDefaultMunkresGuard = 2000;

/// Exact optimal assignment (Hungarian method with potentials, O(n^3)).
/// Throws SizeGuardError when |Df| + |Dg| exceeds `sizeGuard`.
AssignmentResult munkresAssignment(const PersistenceDiagram& f, const PersistenceDiagram& g,
                                   const MetricParams& params,
                                   std::size_t sizeGuard = kDefaultMunkresGuard);

AssignmentResult munkresAssignment(const AssignmentProblem& problem,
                                   std::size_t sizeGuard = kDefaultMunkresGuard);

// --- auction ---------------------------------------------------------------

/// Mutable state of one auction between a bidder and an object diagram.
/// Confined to a single worker.
/// Wall-clock limit for a round. Past `at`, epsilon grows by `growth` every
/// few bids up to `ceiling`, so the round still ends with a full assignment.
struct RoundDeadline {
  std::chrono::steady_clock::time_point at;
  double ceiling = 0.0;
  double growth = 5.0;
};

struct AuctionState {
  double epsilon = 1.0;
  std::optional<RoundDeadline> deadline;
  PriceVector prices;
  std::vector<std::size_t> bidderToObject;
  std::vector<std::size_t> objectToBidder;
  std::deque<std::size_t> unassigned;

  static AuctionState fresh(const AssignmentProblem& problem, double epsilon);
  bool complete() const noexcept;
};

struct RoundStats {
  std::size_t bids = 0;
  std::size_t steals = 0;  // bids that evicted a previous owner
  bool interrupted = false;  // the deadline passed and epsilon was raised
};

/// Optional per-bid observer (bidder, object, evicted owner or kNoIndex).
struct BidObserver {
  virtual ~BidObserver() = default;
  virtual void onBid(std::size_t bidder, std::size_t object, std::size_t evicted,
                     double priceBefore, double priceAfter) = 0;
};

/// One auction round: every bidder starts unassigned and bids until all are
/// assigned. Each bid buys the object of highest value
/// v = -cost - price, found through the kd-tree (off-diagonal objects) and
/// lazy heaps (diagonal objects); the price rises by the gap to the second
/// best value plus epsilon, or by epsilon alone if there is a single object.
RoundStats auctionRound(AuctionState& state, const AssignmentProblem& problem,
                        BidObserver* observer = nullptr);

/// The two best objects for `bidder` under the current prices, by exhaustive
/// scan. Reference implementation for the accelerated search.
BestTwo bestTwoLinear(const AssignmentProblem& problem, const PriceVector& prices,
                      std::size_t bidder);

/// Same query through the kd-tree and lazy heaps. Builds the worker-local
/// structures from `prices` on each call (testing entry point).
BestTwo bestTwoAccelerated(const AssignmentProblem& problem, const PriceVector& prices,
                           std::size_t bidder);

/// Result of a mapping taken from a completed auction state.
AssignmentResult resultOf(const AssignmentProblem& problem, const AuctionState& state);

struct AuctionOptions {
  double gamma = 0.01;
  double epsilonDivisor = 5.0;
  std::size_t maxRounds = 64;
};

struct AuctionReport {
  AssignmentResult result;
  PriceVector prices;
  std::size_t rounds = 0;
  double finalEpsilon = 0.0;
};

/// Rounds with epsilon starting at a quarter of the largest edge weight and
/// divided after each round, until
///   cost <= (1+gamma)^q (cost - epsilon * n),
/// which guarantees W <= distance <= (1+gamma) W.
AuctionReport auctionUntilConverged(const AssignmentProblem& problem,
                                    const AuctionOptions& options = {});

AssignmentResult auctionUntilConverged(const PersistenceDiagram& f, const PersistenceDiagram& g,
                                       const MetricParams& params, double gamma = 0.01);

/// Exactly one round starting from `prices` (price memorization).
std::pair<AssignmentResult, PriceVector> singleRoundWithPrices(
    const AssignmentProblem& problem, PriceVector prices, double epsilon,
    const std::optional<RoundDeadline>& deadline = std::nullopt);

std::pair<AssignmentResult, PriceVector> singleRoundWithPrices(const PersistenceDiagram& f,
                                                               const PersistenceDiagram& g,
                                                               PriceVector prices, double epsilon,
                                                               const MetricParams& params);

/// Catch-up: rounds at epsilon0, epsilon0/divisor, ... while above `target`,
/// then one round at `target`. epsilon0 is a quarter of the largest edge weight.
std::pair<AssignmentResult, PriceVector> auctionDownToEpsilon(const AssignmentProblem& problem,
                                                              PriceVector prices, double target,
                                                              double divisor = 5.0);

/// Epsilon-complementary slackness: every bidder's value for its object is
/// within epsilon (plus a relative rounding tolerance) of its best value.
bool satisfiesComplementarySlackness(const AssignmentProblem& problem, const AuctionState& state);

/// Convenience: W_q by the auction (gamma) or exactly.
enum class Solver { Munkres, Auction };
double wassersteinDistance(const PersistenceDiagram& f, const PersistenceDiagram& g,
                           const MetricParams& params, Solver solver = Solver::Auction,
                           double gamma = 0.01);

}  // namespace pdbary
