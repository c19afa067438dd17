#include "pdbary/field_persistence.hpp"

#include <algorithm>
#include <numeric>

#include "pdbary/error.hpp"

namespace pdbary {

namespace {

struct UnionFind {
  std::vector<std::size_t> parent;
  std::vector<std::size_t> oldest;  // vertex of the component's minimum

  explicit UnionFind(std::size_t n) : parent(n), oldest(n) {
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    std::iota(oldest.begin(), oldest.end(), std::size_t{0});
  }

  std::size_t find(std::size_t v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  }
};

struct RawPair {
  std::size_t extremum;
  std::size_t saddle;
};

// Pairs of the sub-level set sweep, as vertex indices.
std::vector<RawPair> sweep(const ScalarField& field, std::size_t& globalMin) {
  const std::size_t n = field.vertexCount();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return precedes(field, a, b); });
  std::vector<bool> swept(n, false);
  UnionFind uf(n);
  std::vector<RawPair> pairs;
  for (std::size_t v : order) {
    swept[v] = true;
    std::vector<std::size_t> roots;
    for (std::size_t u : gridNeighbors(field, v)) {
      if (!swept[u] || u == v) continue;
      const std::size_t r = uf.find(u);
      if (std::find(roots.begin(), roots.end(), r) == roots.end()) roots.push_back(r);
    }
    if (roots.empty()) continue;  // local minimum: v starts its own component
    std::sort(roots.begin(), roots.end(), [&](std::size_t a, std::size_t b) {
      return precedes(field, uf.oldest[a], uf.oldest[b]);
    });
    const std::size_t survivor = roots.front();
    for (std::size_t k = 1; k < roots.size(); ++k) {
      pairs.push_back({uf.oldest[roots[k]], v});
      uf.parent[roots[k]] = survivor;
    }
    uf.parent[v] = survivor;
  }
  globalMin = order.front();
  return pairs;
}

}  // namespace

std::vector<std::size_t> gridNeighbors(const ScalarField& field, std::size_t vertex) {
  static constexpr int k2D[6][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {1, 1, 0}, {-1, -1, 0}};
  static constexpr int k3D[14][3] = {{1, 0, 0},  {-1, 0, 0},  {0, 1, 0},  {0, -1, 0}, {0, 0, 1},
                                     {0, 0, -1}, {1, 1, 0},   {-1, -1, 0}, {1, 0, 1},  {-1, 0, -1},
                                     {0, 1, 1},  {0, -1, -1}, {1, 1, 1},  {-1, -1, -1}};
  const auto c = field.coordinates(vertex);
  std::vector<std::size_t> out;
  const auto visit = [&](const int (&o)[3]) {
    long long p[3];
    for (int a = 0; a < 3; ++a) {
      p[a] = static_cast<long long>(c[a]) + o[a];
      if (p[a] < 0 || p[a] >= static_cast<long long>(field.extents[a])) return;
    }
    out.push_back(field.index(static_cast<std::size_t>(p[0]), static_cast<std::size_t>(p[1]),
                              static_cast<std::size_t>(p[2])));
  };
  if (field.dimension == 3) {
    out.reserve(14);
    for (const auto& o : k3D) visit(o);
  } else {
    out.reserve(6);
    for (const auto& o : k2D) visit(o);
  }
  return out;
}

PersistenceDiagram extremumDiagram(const ScalarField& field, PairType type) {
  validate(field);
  const int d = field.dimension;
  PersistenceDiagram out;
  out.pairType = type;
  out.label = field.label;

  ScalarField work = field;
  if (type == PairType::SaddleMax)
    for (double& v : work.values) v = -v;

  std::size_t globalMin = 0;
  const auto pairs = sweep(work, globalMin);
  const double lo = *std::min_element(field.values.begin(), field.values.end());
  const double hi = *std::max_element(field.values.begin(), field.values.end());

  const auto emit = [&](std::size_t extremum, std::size_t saddle) {
    if (type == PairType::MinSaddle) {
      out.points.push_back(makePoint(field.values[extremum], field.values[saddle], type,
                                     field.position(extremum), field.position(saddle), d));
    } else {
      out.points.push_back(makePoint(field.values[saddle], field.values[extremum], type,
                                     field.position(saddle), field.position(extremum), d));
    }
  };
  for (const auto& p : pairs) emit(p.extremum, p.saddle);

  // Essential pair spanning the whole range.
  std::size_t other = globalMin;
  for (std::size_t v = 0; v < work.vertexCount(); ++v)
    if (precedes(work, other, v)) other = v;
  DiagramPoint essential;
  if (type == PairType::MinSaddle) {
    essential = makePoint(lo, hi, type, field.position(globalMin), field.position(other), d);
  } else {
    essential = makePoint(lo, hi, type, field.position(other), field.position(globalMin), d);
  }
  out.points.push_back(essential);
  return out;
}

}  // namespace pdbary
