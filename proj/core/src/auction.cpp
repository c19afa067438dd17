#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdint>
#include <functional>
#include <numeric>

#include "pdbary/assignment.hpp"
#include "pdbary/error.hpp"

namespace pdbary {

namespace {

constexpr double kResolution = 1e-14;

/// Worker-local search structures derived from the current prices.
class Proximity {
 public:
  Proximity(const AssignmentProblem& problem, const PriceVector& prices)
      : problem_(problem), prices_(prices), treePrices_(problem.tree(), realPrices()) {
    const std::size_t no = problem.realObjects();
    std::vector<double> ghostKeys(prices.begin() + static_cast<std::ptrdiff_t>(no), prices.end());
    ghostObjects_ = LazyMinHeap(std::move(ghostKeys));
    std::vector<double> diagKeys(no);
    for (std::size_t b = 0; b < no; ++b) diagKeys[b] = problem.objectDiagonalCost(b) + prices[b];
    realByDiagonal_ = LazyMinHeap(std::move(diagKeys));
  }

  /// Best two real objects for `bidder`.
  BestTwo bestReal(std::size_t bidder) {
    const std::size_t no = problem_.realObjects();
    if (problem_.isGhostBidder(bidder)) return realByDiagonal_.topTwo();
    const DiagramPoint& point = problem_.bidders().points[bidder];
    auto keyOf = [&](std::size_t object) { return problem_.cost(bidder, object) + prices_[object]; };
    BestTwo out;
    if (point.onDiagonal()) {
      // Diagonal-to-diagonal costs vanish, so box bounds are not valid here.
      for (std::size_t b = 0; b < no; ++b) out.offer(keyOf(b), b);
    } else {
      out = searchBestTwo(problem_.tree(), treePrices_, problem_.tree().embed(point), keyOf);
    }
    return out;
  }

  BestTwo bestTwo(std::size_t bidder) {
    const std::size_t no = problem_.realObjects();
    BestTwo out = bestReal(bidder);
    const double deletion = problem_.isGhostBidder(bidder) ? 0.0 : problem_.bidderDiagonalCost(bidder);
    const BestTwo ghosts = ghostObjects_.topTwo();
    if (ghosts.best != kNoIndex) out.offer(deletion + ghosts.bestKey, no + ghosts.best);
    if (ghosts.second != kNoIndex) out.offer(deletion + ghosts.secondKey, no + ghosts.second);
    return out;
  }

  void priceChanged(std::size_t object) {
    const std::size_t no = problem_.realObjects();
    if (object >= no) {
      ghostObjects_.setKey(object - no, prices_[object]);
    } else {
      treePrices_.update(object, realPrices());
      realByDiagonal_.setKey(object, problem_.objectDiagonalCost(object) + prices_[object]);
    }
  }

 private:
  std::span<const double> realPrices() const {
    return std::span<const double>(prices_.data(), problem_.realObjects());
  }

  const AssignmentProblem& problem_;
  const PriceVector& prices_;
  TreePriceIndex treePrices_;
  LazyMinHeap ghostObjects_;
  LazyMinHeap realByDiagonal_;
};

void checkPrices(const AssignmentProblem& problem, const PriceVector& prices) {
  if (prices.size() != problem.size())
    throw ValidationError("price vector has " + std::to_string(prices.size()) +
                          " entries, expected " + std::to_string(problem.size()));
}

}  // namespace

AuctionState AuctionState::fresh(const AssignmentProblem& problem, double epsilon) {
  AuctionState state;
  state.epsilon = epsilon;
  state.prices.assign(problem.size(), 0.0);
  state.bidderToObject.assign(problem.size(), kNoIndex);
  state.objectToBidder.assign(problem.size(), kNoIndex);
  return state;
}

bool AuctionState::complete() const noexcept {
  for (auto o : bidderToObject)
    if (o == kNoIndex) return false;
  return true;
}

namespace {

/// The ghost objects, one price for all of them. Every bidder values the
/// ghosts identically, so they form a single pool of `capacity` copies;
/// which copy a holder gets is arbitrary.
class GhostPool {
 public:
  GhostPool(std::size_t firstCopy, std::size_t capacity, double price) : price_(price) {
    for (std::size_t c = capacity; c-- > 0;) free_.push_back(firstCopy + c);
  }

  double price() const noexcept { return price_; }
  bool full() const noexcept { return free_.empty(); }
  std::size_t freeCount() const noexcept { return free_.size(); }
  std::size_t takeFree() {
    const std::size_t copy = free_.back();
    free_.pop_back();
    return copy;
  }

  /// key = best real cost - base pool cost; the holder stays with the pool
  /// while key - price >= -epsilon. Stored keys may be stale, but only low.
  void hold(std::size_t bidder, double key) {
    if (bidder >= version_.size()) version_.resize(bidder + 1, 0);
    heap_.push_back({key, bidder, ++version_[bidder]});
    std::push_heap(heap_.begin(), heap_.end(), std::greater<>());
  }
  void release(std::size_t bidder) { ++version_[bidder]; }

  /// Smallest stored key among holders, a lower bound on the true minimum.
  double lowestKey() {
    dropStale();
    return heap_.empty() ? std::numeric_limits<double>::infinity() : heap_.front().key;
  }

  /// The holder with the exact smallest key; `refresh` recomputes a key.
  template <typename Refresh>
  std::pair<std::size_t, double> leastKeen(Refresh&& refresh) {
    while (true) {
      dropStale();
      const Entry top = heap_.front();
      const double key = refresh(top.bidder);
      if (key <= top.key) return {top.bidder, top.key};
      std::pop_heap(heap_.begin(), heap_.end(), std::greater<>());
      heap_.back() = {key, top.bidder, top.version};
      std::push_heap(heap_.begin(), heap_.end(), std::greater<>());
    }
  }

  void raise(double price) { price_ = std::max(price_, price); }

 private:
  struct Entry {
    double key;
    std::size_t bidder;
    std::uint64_t version;
    bool operator>(const Entry& o) const noexcept {
      return key != o.key ? key > o.key : bidder > o.bidder;
    }
  };
  void dropStale() {
    while (!heap_.empty() && heap_.front().version != version_[heap_.front().bidder]) {
      std::pop_heap(heap_.begin(), heap_.end(), std::greater<>());
      heap_.pop_back();
    }
  }

  double price_;
  std::vector<std::size_t> free_;
  std::vector<Entry> heap_;
  std::vector<std::uint64_t> version_;
};

}  // namespace

RoundStats auctionRound(AuctionState& state, const AssignmentProblem& problem,
                        BidObserver* observer) {
  if (!(state.epsilon > 0.0)) throw ValidationError("auction epsilon must be positive");
  checkPrices(problem, state.prices);
  const std::size_t n = problem.size();
  const std::size_t no = problem.realObjects();
  state.bidderToObject.assign(n, kNoIndex);
  state.objectToBidder.assign(n, kNoIndex);
  state.unassigned.resize(n);
  std::iota(state.unassigned.begin(), state.unassigned.end(), std::size_t{0});

  RoundStats stats;
  if (n == 0) return stats;
  const double inf = std::numeric_limits<double>::infinity();
  double start = 0.0;
  for (std::size_t b = no; b < n; ++b) start = std::max(start, state.prices[b]);
  GhostPool pool(no, n - no, start);
  Proximity proximity(problem, state.prices);
  double& eps = state.epsilon;
  std::size_t sinceCheck = 0;
  auto poolBase = [&](std::size_t bidder) {
    return problem.isGhostBidder(bidder) ? 0.0 : problem.bidderDiagonalCost(bidder);
  };
  auto outsideCost = [&](std::size_t bidder) { return proximity.bestReal(bidder).bestKey; };
  auto assign = [&](std::size_t bidder, std::size_t object) {
    state.objectToBidder[object] = bidder;
    state.bidderToObject[bidder] = object;
  };

  while (!state.unassigned.empty()) {
    if (state.deadline && ++sinceCheck == 256) {
      sinceCheck = 0;
      if (eps < state.deadline->ceiling && std::chrono::steady_clock::now() >= state.deadline->at) {
        eps = std::min(state.deadline->ceiling, eps * state.deadline->growth);
        stats.interrupted = true;
      }
    }
    const std::size_t bidder = state.unassigned.front();
    state.unassigned.pop_front();
    const BestTwo real = proximity.bestReal(bidder);
    const bool poolOpen = n > no;
    const double poolCost = poolOpen ? poolBase(bidder) + pool.price() : inf;
    ++stats.bids;

    // Ties go to real objects, whose indices are lower than every ghost's.
    if (real.best != kNoIndex && real.bestKey <= poolCost) {
      const std::size_t object = real.best;
      const double second = std::min(real.secondKey, poolCost);
      const double gap = std::isfinite(second) ? second - real.bestKey : 0.0;
      const double before = state.prices[object];
      // below the price resolution a bid must still move the price
      state.prices[object] = std::max(before + gap + eps, std::nextafter(before, inf));
      proximity.priceChanged(object);
      const std::size_t evicted = state.objectToBidder[object];
      if (evicted != kNoIndex) {
        state.bidderToObject[evicted] = kNoIndex;
        state.unassigned.push_back(evicted);
        ++stats.steals;
      }
      assign(bidder, object);
      if (observer) observer->onBid(bidder, object, evicted, before, state.prices[object]);
      continue;
    }

    const double base = poolBase(bidder);
    const double key = real.bestKey - base;
    const double before = pool.price();
    if (!pool.full()) {
      // Free copies keep the pool's price until the last one is taken; then
      // the raise is capped so that every holder stays epsilon-happy.
      if (pool.freeCount() == 1) {
        const double gap = std::isfinite(key) ? key - before : 0.0;
        const double raise = std::max(0.0, std::min(gap, pool.lowestKey() - before) + eps);
        pool.raise(before + raise);
      }
      const std::size_t copy = pool.takeFree();
      assign(bidder, copy);
      pool.hold(bidder, key);
      if (observer) observer->onBid(bidder, copy, kNoIndex, before, pool.price());
      continue;
    }
    pool.hold(bidder, key);
    const auto [loser, loserKey] =
        pool.leastKeen([&](std::size_t h) { return outsideCost(h) - poolBase(h); });
    pool.raise(loserKey + eps);
    pool.release(loser);
    if (loser == bidder) {
      // The bidder is priced out at once and will bid on a real object.
      state.unassigned.push_back(bidder);
      if (observer) observer->onBid(bidder, kNoIndex, kNoIndex, before, pool.price());
      continue;
    }
    const std::size_t copy = state.bidderToObject[loser];
    state.bidderToObject[loser] = kNoIndex;
    state.unassigned.push_back(loser);
    ++stats.steals;
    assign(bidder, copy);
    if (observer) observer->onBid(bidder, copy, loser, before, pool.price());
  }
  for (std::size_t b = no; b < n; ++b) state.prices[b] = pool.price();
  return stats;
}

BestTwo bestTwoLinear(const AssignmentProblem& problem, const PriceVector& prices,
                      std::size_t bidder) {
  checkPrices(problem, prices);
  BestTwo out;
  for (std::size_t b = 0; b < problem.size(); ++b)
    out.offer(problem.cost(bidder, b) + prices[b], b);
  return out;
}

BestTwo bestTwoAccelerated(const AssignmentProblem& problem, const PriceVector& prices,
                           std::size_t bidder) {
  checkPrices(problem, prices);
  Proximity proximity(problem, prices);
  return proximity.bestTwo(bidder);
}

AssignmentResult resultOf(const AssignmentProblem& problem, const AuctionState& state) {
  AssignmentResult result;
  result.mapping = state.bidderToObject;
  result.cost = problem.mappingCost(result.mapping);
  result.distance = costToDistance(result.cost, problem.params().q);
  return result;
}

AuctionReport auctionUntilConverged(const AssignmentProblem& problem,
                                    const AuctionOptions& options) {
  if (!(options.gamma > 0.0)) throw ValidationError("gamma must be positive");
  AuctionReport report;
  const std::size_t n = problem.size();
  if (n == 0) return report;
  const double maxWeight = problem.maxEdgeWeight();
  if (!std::isfinite(maxWeight)) throw ValidationError("non-finite matching cost");
  if (maxWeight == 0.0) {
    // Every bijection is optimal.
    report.result.mapping.resize(n);
    std::iota(report.result.mapping.begin(), report.result.mapping.end(), std::size_t{0});
    report.prices.assign(n, 0.0);
    return report;
  }
  const double q = problem.params().q;
  const double bound = std::pow(1.0 + options.gamma, q);
  AuctionState state = AuctionState::fresh(problem, maxWeight / 4.0);
  while (true) {
    auctionRound(state, problem);
    ++report.rounds;
    const double cost = problem.mappingCost(state.bidderToObject);
    const double slack = state.epsilon * static_cast<double>(n);
    if (cost == 0.0 || cost <= bound * (cost - slack) || report.rounds >= options.maxRounds ||
        state.epsilon <= kResolution * maxWeight)
      break;
    state.epsilon /= options.epsilonDivisor;
  }
  report.result = resultOf(problem, state);
  report.prices = std::move(state.prices);
  report.finalEpsilon = state.epsilon;
  return report;
}

AssignmentResult auctionUntilConverged(const PersistenceDiagram& f, const PersistenceDiagram& g,
                                       const MetricParams& params, double gamma) {
  const AssignmentProblem problem(f, g, params);
  AuctionOptions options;
  options.gamma = gamma;
  return auctionUntilConverged(problem, options).result;
}

std::pair<AssignmentResult, PriceVector> singleRoundWithPrices(
    const AssignmentProblem& problem, PriceVector prices, double epsilon,
    const std::optional<RoundDeadline>& deadline) {
  checkPrices(problem, prices);
  AuctionState state;
  state.epsilon = epsilon;
  state.deadline = deadline;
  state.prices = std::move(prices);
  auctionRound(state, problem);
  auto result = resultOf(problem, state);
  return {std::move(result), std::move(state.prices)};
}

std::pair<AssignmentResult, PriceVector> singleRoundWithPrices(const PersistenceDiagram& f,
                                                               const PersistenceDiagram& g,
                                                               PriceVector prices, double epsilon,
                                                               const MetricParams& params) {
  const AssignmentProblem problem(f, g, params);
  return singleRoundWithPrices(problem, std::move(prices), epsilon);
}

std::pair<AssignmentResult, PriceVector> auctionDownToEpsilon(const AssignmentProblem& problem,
                                                              PriceVector prices, double target,
                                                              double divisor) {
  if (!(target > 0.0)) throw ValidationError("target epsilon must be positive");
  checkPrices(problem, prices);
  AuctionState state;
  state.prices = std::move(prices);
  double epsilon = problem.maxEdgeWeight() / 4.0;
  while (epsilon > target) {
    state.epsilon = epsilon;
    auctionRound(state, problem);
    epsilon /= divisor;
  }
  state.epsilon = target;
  auctionRound(state, problem);
  auto result = resultOf(problem, state);
  return {std::move(result), std::move(state.prices)};
}

bool satisfiesComplementarySlackness(const AssignmentProblem& problem, const AuctionState& state) {
  for (std::size_t a = 0; a < problem.size(); ++a) {
    const std::size_t object = state.bidderToObject[a];
    if (object == kNoIndex) return false;
    const double held = problem.cost(a, object) + state.prices[object];
    const BestTwo best = bestTwoLinear(problem, state.prices, a);
    const double tolerance = 1e-9 * (1.0 + std::abs(held));
    if (held > best.bestKey + state.epsilon + tolerance) return false;
  }
  return true;
}

}  // namespace pdbary
