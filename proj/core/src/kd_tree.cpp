#include "pdbary/kd_tree.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace pdbary {

ObjectTree::ObjectTree(std::span<const DiagramPoint> objects, const MetricParams& params,
                       PairType type) {
  if (params.alpha > 0.0) {
    dims_ = 5;
    exponent_ = 2.0;
    planeScale_ = std::sqrt(1.0 - params.alpha);
    geometricScale_ = std::sqrt(params.alpha);
    lambda_ = params.lambdaFor(type);
  } else {
    dims_ = 2;
    exponent_ = params.q;
  }
  const auto n = static_cast<std::uint32_t>(objects.size());
  leafOf_.assign(n, -1);
  order_.resize(n);
  std::iota(order_.begin(), order_.end(), 0u);
  if (n == 0) return;
  std::vector<Coords> coords(n);
  for (std::uint32_t i = 0; i < n; ++i) coords[i] = embed(objects[i]);
  nodes_.reserve(2 * (n / kLeafSize + 1));
  buildNode(0, n, -1, coords);
}

ObjectTree::Coords ObjectTree::embed(const DiagramPoint& p) const noexcept {
  Coords c{};
  c[0] = planeScale_ * p.birth;
  c[1] = planeScale_ * p.death;
  if (dims_ == 5) {
    const Vec3 loc = liftedLocation(p, lambda_);
    for (int k = 0; k < 3; ++k) c[2 + k] = geometricScale_ * loc[k];
  }
  return c;
}

std::int32_t ObjectTree::buildNode(std::uint32_t begin, std::uint32_t end, std::int32_t parent,
                                   const std::vector<Coords>& coords) {
  const auto id = static_cast<std::int32_t>(nodes_.size());
  nodes_.emplace_back();
  {
    Node& node = nodes_.back();
    node.begin = begin;
    node.end = end;
    node.parent = parent;
    node.lo.fill(std::numeric_limits<double>::infinity());
    node.hi.fill(-std::numeric_limits<double>::infinity());
    for (std::uint32_t k = begin; k < end; ++k) {
      const auto& c = coords[order_[k]];
      for (int d = 0; d < dims_; ++d) {
        node.lo[d] = std::min(node.lo[d], c[d]);
        node.hi[d] = std::max(node.hi[d], c[d]);
      }
    }
  }
  if (end - begin <= kLeafSize) {
    for (std::uint32_t k = begin; k < end; ++k) leafOf_[order_[k]] = id;
    return id;
  }
  int axis = 0;
  double widest = -1.0;
  for (int d = 0; d < dims_; ++d) {
    const double extent = nodes_[id].hi[d] - nodes_[id].lo[d];
    if (extent > widest) {
      widest = extent;
      axis = d;
    }
  }
  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](std::uint32_t a, std::uint32_t b) {
                     if (coords[a][axis] != coords[b][axis]) return coords[a][axis] < coords[b][axis];
                     return a < b;
                   });
  const auto left = buildNode(begin, mid, id, coords);
  const auto right = buildNode(mid, end, id, coords);
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

TreePriceIndex::TreePriceIndex(const ObjectTree& tree, std::span<const double> prices)
    : tree_(&tree), minPrice_(tree.nodes().size(), std::numeric_limits<double>::infinity()) {
  const auto& nodes = tree.nodes();
  // Children always have larger ids than their parent.
  for (auto id = static_cast<std::int64_t>(nodes.size()) - 1; id >= 0; --id) {
    const auto& node = nodes[id];
    double m = std::numeric_limits<double>::infinity();
    if (node.leaf()) {
      for (std::uint32_t k = node.begin; k < node.end; ++k)
        m = std::min(m, prices[tree.order()[k]]);
    } else {
      m = std::min(minPrice_[node.left], minPrice_[node.right]);
    }
    minPrice_[id] = m;
  }
}

void TreePriceIndex::update(std::size_t object, std::span<const double> prices) {
  const auto& nodes = tree_->nodes();
  std::int32_t id = tree_->leafOf(object);
  {
    const auto& node = nodes[id];
    double m = std::numeric_limits<double>::infinity();
    for (std::uint32_t k = node.begin; k < node.end; ++k)
      m = std::min(m, prices[tree_->order()[k]]);
    minPrice_[id] = m;
  }
  id = nodes[id].parent;
  while (id >= 0) {
    const auto& node = nodes[id];
    const double m = std::min(minPrice_[node.left], minPrice_[node.right]);
    if (m == minPrice_[id]) break;
    minPrice_[id] = m;
    id = node.parent;
  }
}

LazyMinHeap::LazyMinHeap(std::vector<double> keys) : keys_(std::move(keys)) { compact(); }

void LazyMinHeap::setKey(std::size_t index, double key) {
  keys_[index] = key;
  push({key, index});
  if (heap_.size() > 4 * keys_.size() + 16) compact();
}

void LazyMinHeap::push(Entry entry) {
  heap_.push_back(entry);
  std::push_heap(heap_.begin(), heap_.end(), std::greater<>());
}

LazyMinHeap::Entry LazyMinHeap::pop() {
  std::pop_heap(heap_.begin(), heap_.end(), std::greater<>());
  const Entry e = heap_.back();
  heap_.pop_back();
  return e;
}

void LazyMinHeap::compact() {
  heap_.clear();
  heap_.reserve(keys_.size());
  for (std::size_t i = 0; i < keys_.size(); ++i) heap_.emplace_back(keys_[i], i);
  std::make_heap(heap_.begin(), heap_.end(), std::greater<>());
}

BestTwo LazyMinHeap::topTwo() {
  BestTwo out;
  while (!heap_.empty() && !valid(heap_.front())) pop();
  if (heap_.empty()) return out;
  const Entry first = pop();
  out.offer(first.first, first.second);
  while (!heap_.empty() && (!valid(heap_.front()) || heap_.front().second == first.second)) pop();
  if (!heap_.empty()) out.offer(heap_.front().first, heap_.front().second);
  push(first);
  return out;
}

}  // namespace pdbary
