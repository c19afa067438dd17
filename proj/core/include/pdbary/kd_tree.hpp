#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "pdbary/diagram.hpp"

namespace pdbary {

inline constexpr std::size_t kNoIndex = std::numeric_limits<std::size_t>::max();

/// The two smallest (key, index) pairs seen so far, ordered lexicographically
/// so that ties resolve toward the lowest index.
struct BestTwo {
  std::size_t best = kNoIndex;
  double bestKey = std::numeric_limits<double>::infinity();
  std::size_t second = kNoIndex;
  double secondKey = std::numeric_limits<double>::infinity();

  void offer(double key, std::size_t index) noexcept {
    if (index == best) return;
    if (key < bestKey || (key == bestKey && index < best)) {
      second = best;
      secondKey = bestKey;
      best = index;
      bestKey = key;
    } else if (index != second && (key < secondKey || (key == secondKey && index < second))) {
      second = index;
      secondKey = key;
    }
  }

  void merge(const BestTwo& other) noexcept {
    if (other.best != kNoIndex) offer(other.bestKey, other.best);
    if (other.second != kNoIndex) offer(other.secondKey, other.second);
  }
};

/// Static kd-tree over the off-diagonal objects of one diagram.
///
/// Points live in birth/death space (2D), or in the 5D space
/// (sqrt(1-a)*birth, sqrt(1-a)*death, sqrt(a)*p^lambda) when geometric
/// lifting is active, so that box distances lower-bound matching costs. The
/// tree is immutable once built and may be shared by concurrent auctions;
/// prices live in a separate worker-local TreePriceIndex.
class ObjectTree {
 public:
  static constexpr int kMaxDims = 5;
  static constexpr std::uint32_t kLeafSize = 8;
  using Coords = std::array<double, kMaxDims>;

  struct Node {
    Coords lo{};
    Coords hi{};
    std::uint32_t begin = 0;
    std::uint32_t end = 0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::int32_t parent = -1;

    bool leaf() const noexcept { return left < 0; }
  };

  ObjectTree() = default;
  ObjectTree(std::span<const DiagramPoint> objects, const MetricParams& params, PairType type);

  std::size_t objectCount() const noexcept { return leafOf_.size(); }
  int dims() const noexcept { return dims_; }
  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  /// Objects of a node are order()[node.begin, node.end).
  std::span<const std::uint32_t> order() const noexcept { return order_; }
  std::int32_t leafOf(std::size_t object) const noexcept { return leafOf_[object]; }

  /// Embeds a point in the tree's coordinate space.
  Coords embed(const DiagramPoint& p) const noexcept;

  /// Lower bound of the matching cost between `query` and any object under `node`.
  double lowerBound(std::int32_t node, const Coords& query) const noexcept {
    const Node& n = nodes_[node];
    auto gapOf = [&](int d) {
      if (query[d] < n.lo[d]) return n.lo[d] - query[d];
      if (query[d] > n.hi[d]) return query[d] - n.hi[d];
      return 0.0;
    };
    double sum = 0.0;
    if (exponent_ == 2.0) {
      for (int d = 0; d < dims_; ++d) {
        const double g = gapOf(d);
        sum += g * g;
      }
    } else {
      for (int d = 0; d < dims_; ++d) {
        const double g = gapOf(d);
        if (g > 0.0) sum += std::pow(g, exponent_);
      }
    }
    return sum * kBoundSlack;
  }

  // Box bounds are computed in embedded coordinates while keys use the exact
  // cost formula; the slack absorbs the rounding difference between the two.
  static constexpr double kBoundSlack = 1.0 - 1e-9;

 private:
  std::int32_t buildNode(std::uint32_t begin, std::uint32_t end, std::int32_t parent,
                         const std::vector<Coords>& coords);

  int dims_ = 2;
  double exponent_ = 2.0;
  double planeScale_ = 1.0;
  double geometricScale_ = 0.0;
  double lambda_ = 0.0;
  std::vector<Node> nodes_;
  std::vector<std::uint32_t> order_;
  std::vector<std::int32_t> leafOf_;
};

/// Per-node minimum object price over an ObjectTree. Worker-local.
class TreePriceIndex {
 public:
  TreePriceIndex() = default;
  TreePriceIndex(const ObjectTree& tree, std::span<const double> prices);

  /// Refreshes the minima on the leaf-to-root path of `object`.
  void update(std::size_t object, std::span<const double> prices);
  double minPrice(std::int32_t node) const noexcept { return minPrice_[node]; }

 private:
  const ObjectTree* tree_ = nullptr;
  std::vector<double> minPrice_;
};

/// Best two objects under key(b) = cost(query, b) + price(b), given a
/// callable returning that key for an object index. Branch-and-bound on
/// box lower bounds plus subtree minimum price.
template <typename KeyFn>
BestTwo searchBestTwo(const ObjectTree& tree, const TreePriceIndex& prices,
                      const ObjectTree::Coords& query, KeyFn&& keyOf) {
  BestTwo result;
  if (tree.nodes().empty()) return result;
  const auto& nodes = tree.nodes();
  const auto order = tree.order();
  struct Pending {
    std::int32_t node;
    double bound;
  };
  Pending stack[128];
  int top = 0;
  stack[top++] = {0, tree.lowerBound(0, query) + prices.minPrice(0)};
  while (top > 0) {
    const Pending item = stack[--top];
    if (item.bound > result.secondKey) continue;
    const auto& node = nodes[item.node];
    if (node.leaf()) {
      for (std::uint32_t k = node.begin; k < node.end; ++k) {
        const std::size_t object = order[k];
        result.offer(keyOf(object), object);
      }
      continue;
    }
    const double leftBound = tree.lowerBound(node.left, query) + prices.minPrice(node.left);
    const double rightBound = tree.lowerBound(node.right, query) + prices.minPrice(node.right);
    // Push the farther child first so the nearer one is explored first.
    if (leftBound <= rightBound) {
      stack[top++] = {node.right, rightBound};
      stack[top++] = {node.left, leftBound};
    } else {
      stack[top++] = {node.left, leftBound};
      stack[top++] = {node.right, rightBound};
    }
  }
  return result;
}

/// Min-heap over (key, index) with lazy invalidation: stale entries are
/// discarded when they surface. Keys may only be raised.
class LazyMinHeap {
 public:
  LazyMinHeap() = default;
  explicit LazyMinHeap(std::vector<double> keys);

  std::size_t size() const noexcept { return keys_.size(); }
  double key(std::size_t index) const noexcept { return keys_[index]; }
  void setKey(std::size_t index, double key);

  /// The two smallest valid entries.
  BestTwo topTwo();

 private:
  using Entry = std::pair<double, std::size_t>;
  void push(Entry entry);
  Entry pop();
  bool valid(const Entry& entry) const noexcept { return keys_[entry.second] == entry.first; }
  void compact();

  std::vector<double> keys_;
  std::vector<Entry> heap_;
};

}  // namespace pdbary
