// Brute-force reference implementations. They share no code with the
// library beyond the plain data types, so agreement is meaningful.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>
#include <random>
#include <utility>
#include <vector>

#include "pdbary/diagram.hpp"
#include "pdbary/scalar_field.hpp"

namespace oracle {

using pdbary::DiagramPoint;
using pdbary::MetricParams;
using pdbary::PairType;
using pdbary::PersistenceDiagram;

struct Point {
  double b, d;
  std::array<double, 3> loc;  // extremum location
  bool ghost;
};

inline std::array<double, 3> extremumLocation(const DiagramPoint& p, PairType type) {
  return type == PairType::MinSaddle ? p.birthLocation : p.deathLocation;
}

// Squared plane distance, zero between two diagonal points.
inline double plane2(const Point& x, const Point& y) {
  const bool xd = x.ghost || x.b == x.d;
  const bool yd = y.ghost || y.b == y.d;
  if (xd && yd) return 0.0;
  return (x.b - y.b) * (x.b - y.b) + (x.d - y.d) * (x.d - y.d);
}

inline double ownDiagonal2(const Point& x) {
  const double h = (x.d - x.b) / 2.0;
  return 2.0 * h * h;
}

// Literal augmented formulation: each diagram receives the diagonal
// projections of the other's points, every pairing costs the squared plane
// distance. Exhaustive over all bijections; alpha must be 0.
inline double exhaustiveAugmentedPlane(const PersistenceDiagram& f, const PersistenceDiagram& g) {
  std::vector<Point> A, B;
  for (const auto& p : f.points) A.push_back({p.birth, p.death, {}, false});
  for (const auto& p : g.points) {
    const double m = (p.birth + p.death) / 2.0;
    A.push_back({m, m, {}, true});
  }
  for (const auto& p : g.points) B.push_back({p.birth, p.death, {}, false});
  for (const auto& p : f.points) {
    const double m = (p.birth + p.death) / 2.0;
    B.push_back({m, m, {}, true});
  }
  std::vector<std::size_t> perm(A.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  if (A.empty()) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  do {
    double c = 0.0;
    for (std::size_t i = 0; i < A.size(); ++i) c += plane2(A[i], B[perm[i]]);
    best = std::min(best, c);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Partial matching: each point is either matched to one point of the other
// diagram or deleted at its diagonal cost. Lifted costs when alpha > 0.
inline double unbalancedBruteForce(const PersistenceDiagram& f, const PersistenceDiagram& g,
                                   const MetricParams& params) {
  const PairType type = f.empty() ? g.pairType : f.pairType;
  const double a = params.alpha;
  auto toPoint = [&](const DiagramPoint& p) {
    return Point{p.birth, p.death, extremumLocation(p, type), false};
  };
  std::vector<Point> F, G;
  for (const auto& p : f.points) F.push_back(toPoint(p));
  for (const auto& p : g.points) G.push_back(toPoint(p));
  auto pair2 = [&](const Point& x, const Point& y) {
    const double pl = plane2(x, y);
    if ((x.b == x.d) && (y.b == y.d)) return 0.0;
    if (a == 0.0) return pl;
    double geo = 0.0;
    for (int k = 0; k < 3; ++k) geo += (x.loc[k] - y.loc[k]) * (x.loc[k] - y.loc[k]);
    return (1.0 - a) * pl + a * geo;
  };
  auto del = [&](const Point& x) { return (1.0 - a) * ownDiagonal2(x); };

  std::vector<bool> used(G.size(), false);
  std::function<double(std::size_t)> rec = [&](std::size_t i) -> double {
    if (i == F.size()) {
      double c = 0.0;
      for (std::size_t j = 0; j < G.size(); ++j)
        if (!used[j]) c += del(G[j]);
      return c;
    }
    double best = del(F[i]) + rec(i + 1);
    for (std::size_t j = 0; j < G.size(); ++j) {
      if (used[j]) continue;
      used[j] = true;
      best = std::min(best, pair2(F[i], G[j]) + rec(i + 1));
      used[j] = false;
    }
    return best;
  };
  return rec(0);
}

// Exhaustive bijections over the ghost-interchangeable formulation: real-real
// pairs pay the lifted cost, a real point paired with any ghost pays its own
// deletion cost, ghost pairs are free.
inline double exhaustiveInterchangeable(const PersistenceDiagram& f, const PersistenceDiagram& g,
                                        const MetricParams& params) {
  const std::size_t nf = f.size(), ng = g.size(), n = nf + ng;
  if (n == 0) return 0.0;
  const PairType type = f.empty() ? g.pairType : f.pairType;
  const double a = params.alpha;
  auto deletion = [&](const DiagramPoint& x) {
    const double h = (x.death - x.birth) / 2.0;
    return (1.0 - a) * 2.0 * h * h;
  };
  auto pairing = [&](const DiagramPoint& x, const DiagramPoint& y) {
    if (x.birth == x.death && y.birth == y.death) return 0.0;
    const double pl = (x.birth - y.birth) * (x.birth - y.birth) + (x.death - y.death) * (x.death - y.death);
    if (a == 0.0) return pl;
    const auto lx = extremumLocation(x, type), ly = extremumLocation(y, type);
    double geo = 0.0;
    for (int k = 0; k < 3; ++k) geo += (lx[k] - ly[k]) * (lx[k] - ly[k]);
    return (1.0 - a) * pl + a * geo;
  };
  std::vector<std::vector<double>> cost(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const bool gi = i >= nf, gj = j >= ng;
      if (!gi && !gj)
        cost[i][j] = pairing(f.points[i], g.points[j]);
      else if (!gi)
        cost[i][j] = deletion(f.points[i]);
      else if (!gj)
        cost[i][j] = deletion(g.points[j]);
    }
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  double best = std::numeric_limits<double>::infinity();
  do {
    double c = 0.0;
    for (std::size_t i = 0; i < n; ++i) c += cost[i][perm[i]];
    best = std::min(best, c);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// ---- field persistence by threshold sweep --------------------------------

inline bool adjacent(const pdbary::ScalarField& f, std::size_t u, std::size_t v) {
  const auto cu = f.coordinates(u), cv = f.coordinates(v);
  long long d[3];
  int pos = 0, neg = 0;
  for (int k = 0; k < 3; ++k) {
    d[k] = static_cast<long long>(cv[k]) - static_cast<long long>(cu[k]);
    if (d[k] > 1 || d[k] < -1) return false;
    pos += d[k] > 0;
    neg += d[k] < 0;
  }
  if (pos + neg == 0) return false;
  if (f.dimension == 2 && d[2] != 0) return false;
  return pos == 0 || neg == 0;
}

struct RawPair {
  double birth, death;
  std::size_t birthVertex, deathVertex;
};

// 0-dimensional sub-level-set pairs. At every step of the injective order the
// components of the swept set are recomputed from scratch; a component whose
// oldest vertex stops being the oldest of its component has died.
inline std::vector<RawPair> sublevelPairs(const pdbary::ScalarField& f) {
  const std::size_t n = f.vertexCount();
  auto before = [&](std::size_t a, std::size_t b) {
    return f.values[a] < f.values[b] || (f.values[a] == f.values[b] && a < b);
  };
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), before);
  std::vector<bool> in(n, false);
  std::vector<std::size_t> alive;  // oldest vertices of current components
  std::vector<RawPair> out;
  for (std::size_t s = 0; s < n; ++s) {
    const std::size_t t = order[s];
    in[t] = true;
    std::vector<std::size_t> rep(n, n);
    for (std::size_t start = 0; start < n; ++start) {
      if (!in[start] || rep[start] != n) continue;
      std::vector<std::size_t> comp;
      std::queue<std::size_t> q;
      q.push(start);
      rep[start] = start;
      while (!q.empty()) {
        const std::size_t u = q.front();
        q.pop();
        comp.push_back(u);
        for (std::size_t v = 0; v < n; ++v)
          if (in[v] && rep[v] == n && adjacent(f, u, v)) {
            rep[v] = start;
            q.push(v);
          }
      }
      std::size_t oldest = comp.front();
      for (std::size_t u : comp)
        if (before(u, oldest)) oldest = u;
      for (std::size_t u : comp) rep[u] = oldest;
    }
    std::vector<std::size_t> next;
    for (std::size_t m : alive) {
      if (rep[m] == m)
        next.push_back(m);
      else
        out.push_back({f.values[m], f.values[t], m, t});
    }
    if (rep[t] == t) next.push_back(t);
    alive = std::move(next);
  }
  return out;
}

// Multiset of (birth, death) of the extremum diagram, essential pair included.
inline std::vector<std::pair<double, double>> extremumPairs(const pdbary::ScalarField& f, PairType type) {
  pdbary::ScalarField work = f;
  if (type == PairType::SaddleMax)
    for (double& v : work.values) v = -v;
  std::vector<std::pair<double, double>> out;
  for (const auto& p : sublevelPairs(work)) {
    if (type == PairType::MinSaddle)
      out.emplace_back(p.birth, p.death);
    else
      out.emplace_back(-p.death, -p.birth);
  }
  const auto [lo, hi] = std::minmax_element(f.values.begin(), f.values.end());
  out.emplace_back(*lo, *hi);
  std::sort(out.begin(), out.end());
  return out;
}

// ---- random inputs ---------------------------------------------------------

inline PersistenceDiagram randomDiagram(std::mt19937_64& rng, std::size_t n,
                                        PairType type = PairType::MinSaddle, bool locations = false,
                                        double scale = 1.0) {
  std::uniform_real_distribution<double> u(0.0, scale);
  PersistenceDiagram d;
  d.pairType = type;
  for (std::size_t i = 0; i < n; ++i) {
    double b = u(rng), e = u(rng);
    if (e < b) std::swap(b, e);
    pdbary::Vec3 bl{0, 0, 0}, dl{0, 0, 0};
    if (locations) {
      bl = {u(rng), u(rng), u(rng)};
      dl = {u(rng), u(rng), u(rng)};
    }
    d.points.push_back(pdbary::makePoint(b, e, type, bl, dl, 2));
  }
  return d;
}

inline pdbary::ScalarField randomField(std::mt19937_64& rng, std::size_t nx, std::size_t ny,
                                       std::size_t nz = 1, int levels = 0) {
  pdbary::ScalarField f(nx, ny, nz);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> li(0, std::max(levels - 1, 0));
  for (double& v : f.values) v = levels > 0 ? static_cast<double>(li(rng)) : u(rng);
  return f;
}

}  // namespace oracle
